// tanglev: coloured tangle invariants from the command line.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tanglev/evaluator.hpp"
#include "tanglev/io.hpp"
#include "tanglev/sampling.hpp"

using namespace tanglev;
using json = nlohmann::json;

namespace {

struct RunConfig {
  std::string mode;
  int ell = 3;
  std::string character;  // alpha,beta,a,b
  std::string twist = "balanced";
  std::string backend = "rational";
  double tol = 1e-8;
  std::string input;
  std::string coloring;
  std::string cache_dir;
  std::optional<size_t> open;
  std::uint64_t seed = 1;
  int samples = 100;
  int threads = 0;
  bool moves = false;
};

int fail_hard(const std::string& code, const std::string& msg) {
  json e{{"error", {{"code", code}, {"message", msg}}}};
  std::cout << e.dump(2) << "\n";
  std::cerr << "tanglev: " << msg << "\n";
  return 1;
}

Mat2<Qi> colour_from_character(const std::string& text) {
  std::vector<Qi> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_qi(item));
  if (v.size() != 4) throw Error(Errc::InvalidArgument, "--char needs four values alpha,beta,a,b");
  for (const auto& q : {v[0], v[2]})
    if (is_zero(q)) throw Error(Errc::InvalidArgument, "alpha and a must be nonzero");
  return Factorization<Qi>{v[0], v[1], v[2], v[3]}.assemble();
}

// Bottom colours whose meridians are all conjugate to x (abelian colouring).
Boundary<Qi> meridian_bottom(const Signs& signs, const Mat2<Qi>& x) {
  Boundary<Qi> b;
  Mat2<Qi> G = Mat2<Qi>::identity();
  for (int s : signs) {
    Entry<Qi> e{s, cup_color(G, s, x)};
    G = star_mul(G, twisted(e));
    b.push_back(e);
  }
  return b;
}

struct Coloured {
  GColoring<Qi> col;
  std::vector<CentralCharacter> characters;
};

Coloured colour_diagram(const Diagram& d, const RunConfig& cfg) {
  Coloured out;
  if (!cfg.coloring.empty()) {
    auto in = parse_coloring(json::parse(read_text(cfg.coloring)));
    out.col = propagate<Qi>(d, in.bottom, in.seeds);
    for (const auto& e : in.bottom) out.characters.push_back(CentralCharacter::of(e.color));
    for (const auto& s : in.seeds) out.characters.push_back(CentralCharacter::of(s));
    return out;
  }
  if (cfg.character.empty()) throw Error(Errc::InvalidArgument, "need --char or --coloring");
  auto x = colour_from_character(cfg.character);
  out.col = propagate<Qi>(d, meridian_bottom(d.bottom, x), meridian_seed(x));
  out.characters.push_back(CentralCharacter::of(x));
  return out;
}

EvalOptions eval_options(const RunConfig& cfg, bool disk_cache) {
  EvalOptions o;
  o.rd = RootData::make(cfg.ell);
  o.twist = parse_twist(cfg.twist);
  std::optional<std::filesystem::path> dir;
  if (disk_cache && !cfg.cache_dir.empty()) dir = cfg.cache_dir;
  o.cache = std::make_shared<BlockCache>(dir);
  return o;
}

int run_invariant(const RunConfig& cfg) {
  auto opts = eval_options(cfg, true);
  auto d = load_diagram(cfg.input, cfg.open);
  auto c = colour_diagram(d, cfg);
  Evaluator ev(opts);
  InvariantResult r = cfg.backend == "float" ? invariant(ev, to_cx(c.col)) : invariant(ev, c.col);
  json j = result_json(r, opts, c.characters);
  j["mode"] = "invariant";
  j["backend"] = cfg.backend;
  j["diagram"] = print(d);
  j["seeds_used"] = c.col.seeds_used;
  if (!r.scalar) j["note"] = "open tangle: invariant field is the (0,0) entry of the block";
  if (!r.scalar && r.block.matrix.size() > 0) j["invariant"] = {r.block.matrix(0, 0).real(), r.block.matrix(0, 0).imag()};
  if (cfg.moves) {
    std::vector<Site> sites;
    for (auto k : {MoveKind::R2, MoveKind::R3, MoveKind::FramedR1, MoveKind::SlideCupCap}) {
      auto s = find_sites(d, k);
      sites.insert(sites.end(), s.begin(), s.end());
    }
    json rows = json::array();
    bool all = true;
    for (const auto& row : reidemeister_report<Qi>(ev, d, c.col.bottom(), c.col.seed_log, sites, cfg.tol)) {
      json jr{{"move", row.move}, {"ok", row.ok}};
      if (row.error.empty()) {
        jr["magnitude_defect"] = row.magnitude_defect;
        jr["phase_drift"] = row.phase_drift;
        all = all && row.ok;
      } else {
        jr["skipped"] = row.error;
      }
      rows.push_back(jr);
    }
    j["moves"] = rows;
    j["moves_ok"] = all;
    std::cout << j.dump(2) << "\n";
    return all ? 0 : 2;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_color_check(const RunConfig& cfg) {
  RootData::make(cfg.ell);
  auto d = load_diagram(cfg.input, cfg.open);
  json j{{"mode", "color-check"}, {"diagram", print(d)}, {"backend", cfg.backend}};
  try {
    auto c = colour_diagram(d, cfg);
    bool conserved = holonomies(c.col.bottom()).back() == holonomies(c.col.top()).back();
    j["consistent"] = true;
    j["holonomy_conserved"] = conserved;
    j["seeds_used"] = c.col.seeds_used;
    j["edges"] = coloring_json(c.col);
    j["top"] = boundary_json(c.col.top());
    json gen = json::array();
    for (const auto& e : c.col.levels)
      for (const auto& x : e) gen.push_back(is_generic(CentralCharacter::of(x.color), RootData::make(cfg.ell)));
    j["all_generic"] = std::all_of(gen.begin(), gen.end(), [](const json& v) { return v.get<bool>(); });
    std::cout << j.dump(2) << "\n";
    return conserved ? 0 : 2;
  } catch (const Error& e) {
    if (e.code() != Errc::CapMismatch && e.code() != Errc::Inconsistent && e.code() != Errc::NotFactorizable &&
        e.code() != Errc::MissingSeed)
      throw;
    j["consistent"] = false;
    j["reason"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    std::cout << j.dump(2) << "\n";
    return 2;
  }
}

// Per-sample outcome of a verification suite.
struct Outcome {
  enum Kind { Skip, Pass, Fail } kind = Skip;
  double residual = 0;
  std::string detail;
};

std::mt19937_64 sample_rng(std::uint64_t seed, int suite, int i) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(i)};
  return std::mt19937_64(seq);
}

template <class F>
std::vector<Outcome> parallel_samples(int n, int threads, F&& body) {
  std::vector<Outcome> out(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[i] = body(i);
      } catch (const Error& e) {
        out[i] = {Outcome::Skip, 0, e.what()};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

json summarize(const std::string& name, const std::vector<Outcome>& r, bool& all_pass) {
  int pass = 0, fail = 0, skip = 0;
  double worst = 0;
  json failures = json::array();
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i].kind == Outcome::Pass) ++pass;
    if (r[i].kind == Outcome::Skip) ++skip;
    if (r[i].kind == Outcome::Fail) {
      ++fail;
      if (failures.size() < 5) failures.push_back({{"sample", i}, {"detail", r[i].detail}});
    }
    if (r[i].kind != Outcome::Skip) worst = std::max(worst, r[i].residual);
  }
  all_pass = all_pass && fail == 0 && pass > 0;
  json j{{"suite", name}, {"passed", pass}, {"failed", fail}, {"skipped", skip}, {"max_residual", worst}};
  if (!failures.empty()) j["failures"] = failures;
  return j;
}

Outcome yb_sample(std::mt19937_64& rng) {
  std::array<Mat2<Qi>, 3> t{random_rational_matrix(rng), random_rational_matrix(rng), random_rational_matrix(rng)};
  try {
    bool ok = yb_lhs(t) == yb_rhs(t);
    return {ok ? Outcome::Pass : Outcome::Fail, ok ? 0.0 : 1.0, ok ? "" : "composites differ"};
  } catch (const Error& e) {
    if (e.code() == Errc::NotFactorizable) return {};
    throw;
  }
}

int run_verify(const RunConfig& cfg) {
  const auto rd = RootData::make(cfg.ell);
  const int n = cfg.samples;
  bool all = true;
  json suites = json::array();

  suites.push_back(summarize("factorization", parallel_samples(n, cfg.threads, [&](int i) -> Outcome {
    auto rng = sample_rng(cfg.seed, 1, i);
    auto g = random_rational_matrix(rng), h = random_factorizable(rng), k = random_factorizable(rng);
    if (!is_factorizable(g)) return {};
    bool ok = factorize(g).assemble() == g;
    ok = ok && star_mul(star_mul(g, h), k) == star_mul(g, star_mul(h, k));
    ok = ok && star_mul(g, star_inv(g)) == Mat2<Qi>::identity();
    return {ok ? Outcome::Pass : Outcome::Fail, ok ? 0.0 : 1.0, ok ? "" : "star group axiom"};
  }), all));

  suites.push_back(summarize("yang-baxter", parallel_samples(n, cfg.threads, [&](int i) {
    auto rng = sample_rng(cfg.seed, 2, i);
    return yb_sample(rng);
  }), all));

  suites.push_back(summarize("relations", parallel_samples(n, cfg.threads, [&](int i) -> Outcome {
    auto rng = sample_rng(cfg.seed, 3, i);
    auto chi = CentralCharacter::of(random_factorizable(rng));
    if (!is_generic(chi, rd)) return {};
    auto rep = check_irrep(build_irrep(chi, rd));
    double rel = 0, cen = 0;
    for (double v : rep.relations) rel = std::max(rel, v);
    for (double v : rep.central) cen = std::max(cen, v);
    bool ok = rel < 1e-10 && cen < 1e-9 && rep.casimir < 1e-9;
    return {ok ? Outcome::Pass : Outcome::Fail, std::max({rel, cen, rep.casimir}), "relation residual"};
  }), all));

  suites.push_back(summarize("pull-back", parallel_samples(n, cfg.threads, [&](int i) -> Outcome {
    auto rng = sample_rng(cfg.seed, 4, i);
    auto x = random_factorizable(rng), y = random_factorizable(rng);
    auto [u, v] = b_map(x, y);
    for (const auto& g : {x, y, u, v})
      if (!is_generic(CentralCharacter::of(g), rd)) return {};
    auto rep = z0_pullback_check(x, y, rd);
    double res = std::max(rep.max_deviation, rep.max_off_scalar);
    return {res < 1e-8 ? Outcome::Pass : Outcome::Fail, res, "central images differ from b(x,y)"};
  }), all));

  int nr = std::max(1, n / 20);
  suites.push_back(summarize("reidemeister", parallel_samples(nr, cfg.threads, [&](int i) -> Outcome {
    auto rng = sample_rng(cfg.seed, 5, i);
    auto x = random_factorizable(rng);
    auto d = close_braid(braid_word({1, 1, 1}, 2), 1);
    GColoring<Qi> col;
    try {
      col = propagate<Qi>(d, {{+1, x}}, meridian_seed(x));
      for (const auto& lev : col.levels)
        for (const auto& e : lev)
          if (!is_generic(CentralCharacter::of(e.color), rd)) return {};
    } catch (const Error&) {
      return {};
    }
    Evaluator ev(eval_options(cfg, false));
    std::vector<Site> sites;
    for (auto k : {MoveKind::R2, MoveKind::R3, MoveKind::FramedR1, MoveKind::SlideCupCap}) {
      auto s = find_sites(d, k);
      sites.insert(sites.end(), s.begin(), s.end());
    }
    double worst = 0;
    int used = 0;
    for (const auto& row : reidemeister_report<Qi>(ev, d, {{+1, x}}, col.seed_log, sites, cfg.tol)) {
      if (!row.error.empty()) continue;
      worst = std::max(worst, row.magnitude_defect);
      ++used;
    }
    if (used == 0) return {};
    return {worst < cfg.tol ? Outcome::Pass : Outcome::Fail, worst, "magnitude changed under a move"};
  }), all));

  json j{{"mode", "verify"},     {"ell", cfg.ell},         {"samples", n},
         {"seed", cfg.seed},     {"normalization", kNormalizationVersion},
         {"suites", suites},     {"all_pass", all}};
  std::cout << j.dump(2) << "\n";
  return all ? 0 : 2;
}

int run_yb_fuzz(const RunConfig& cfg) {
  bool all = true;
  auto r = parallel_samples(cfg.samples, cfg.threads, [&](int i) {
    auto rng = sample_rng(cfg.seed, 2, i);
    return yb_sample(rng);
  });
  json j{{"mode", "yb-fuzz"}, {"seed", cfg.seed}, {"samples", cfg.samples}, {"result", summarize("yang-baxter", r, all)},
         {"all_pass", all}};
  std::cout << j.dump(2) << "\n";
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariants of G-coloured framed tangles at odd roots of unity"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--ell", cfg.ell, "odd root-of-unity order l >= 3")->capture_default_str();
    s->add_option("--twist,--mu", cfg.twist, "twist mu: balanced, K or L")->capture_default_str();
    s->add_option("--tol", cfg.tol, "comparison tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    s->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  };
  auto diagram_opts = [&](CLI::App* s) {
    s->add_option("input", cfg.input, ".tgl, .braid or .json diagram ('-' for stdin)")->required();
    s->add_option("--char", cfg.character, "colour character alpha,beta,a,b (rationals)");
    s->add_option("--coloring", cfg.coloring, ".coloring JSON with bottom colours and seeds");
    s->add_option("--open", cfg.open, "open strands left by a braid closure");
    s->add_option("--backend", cfg.backend, "rational or float")
        ->check(CLI::IsMember({"rational", "float"}))
        ->capture_default_str();
  };

  auto* inv = app.add_subcommand("invariant", "evaluate a coloured diagram");
  common(inv);
  diagram_opts(inv);
  inv->add_option("--cache-dir", cfg.cache_dir, "directory for persistent braiding blocks");
  inv->add_flag("--moves", cfg.moves, "also apply every local move and report magnitude agreement");

  auto* cc = app.add_subcommand("color-check", "propagate a colouring and report it");
  common(cc);
  diagram_opts(cc);

  auto* ver = app.add_subcommand("verify", "run the property suite");
  common(ver);
  ver->add_option("--samples", cfg.samples, "samples per suite")->capture_default_str()->check(CLI::PositiveNumber);

  auto* fuzz = app.add_subcommand("yb-fuzz", "randomized exact Yang-Baxter test");
  common(fuzz);
  fuzz->add_option("--samples", cfg.samples, "number of triples")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_hard("UsageError", e.what());
  }
  if (cfg.threads <= 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    RootData::make(cfg.ell);
    parse_twist(cfg.twist);
    if (*inv) return run_invariant(cfg);
    if (*cc) return run_color_check(cfg);
    if (*ver) return run_verify(cfg);
    return run_yb_fuzz(cfg);
  } catch (const Error& e) {
    return fail_hard(errc_name(e.code()), e.what());
  } catch (const json::exception& e) {
    return fail_hard("SyntaxError", e.what());
  } catch (const std::exception& e) {
    return fail_hard("InternalError", e.what());
  }
}
