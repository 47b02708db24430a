#pragma once

#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "braiding.hpp"
#include "coloring.hpp"
#include "moves.hpp"

namespace tanglev {

struct EvalOptions {
  RootData rd = RootData::make(3);
  TwistChoice twist = TwistChoice::Balanced;
  double tol = kDefaultTol;
  std::shared_ptr<BlockCache> cache = std::make_shared<BlockCache>();
};

// One normalization annotation per crossing block.
struct PhaseEntry {
  size_t slice, pos;
  int sign;
  double pivot_arg;  // argument of the normalizing pivot entry, in (-pi/l^2, pi/l^2]
  double residual;
  int nullity;
};

// Operator between the spaces of two coloured boundaries; rows index the codomain.
struct LinearBlock {
  CMat matrix;
  Boundary<Cx> domain, codomain;
  std::vector<PhaseEntry> phase_log;
};

namespace detail {

// Applies op (out x in) to factors [pos, pos + in_arity) of a state whose rows carry `width` factors of size l.
inline CMat apply_local(const CMat& state, int l, size_t pos, size_t width, size_t in_arity, const CMat& op) {
  size_t right_w = width - pos - in_arity;
  Eigen::Index left = 1, right = 1;
  for (size_t i = 0; i < pos; ++i) left *= l;
  for (size_t i = 0; i < right_w; ++i) right *= l;
  const Eigen::Index in = op.cols(), out = op.rows(), cols = state.cols();
  CMat next = CMat::Zero(left * out * right, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index a = 0; a < left; ++a)
      for (Eigen::Index m = 0; m < in; ++m)
        for (Eigen::Index r = 0; r < right; ++r) {
          Cx v = state((a * in + m) * right + r, c);
          if (v == Cx(0.0)) continue;
          for (Eigen::Index o = 0; o < out; ++o) next((a * out + o) * right + r, c) += op(o, m) * v;
        }
  return next;
}

}  // namespace detail

class Evaluator {
 public:
  explicit Evaluator(EvalOptions opts = {}) : opts_(std::move(opts)) {}

  const EvalOptions& options() const { return opts_; }

  const CyclicRep& rep(const Mat2<Cx>& colour) {
    std::string k = key(colour);
    auto it = reps_.find(k);
    if (it != reps_.end()) return it->second;
    return reps_.emplace(k, build_irrep(CentralCharacter::of(colour, opts_.tol), opts_.rd)).first->second;
  }
  CMat mu(const Mat2<Cx>& colour) { return twist_mu(rep(colour), opts_.twist); }

  // Local operator for a cup or cap whose legs carry raw colour x.
  CMat cup_cap(Piece p, const Mat2<Cx>& x) {
    const int l = opts_.rd.ell;
    CMat op;
    switch (p) {
      case Piece::CupR: {  // canonical copairing into V (x) V*
        op = CMat::Zero(l * l, 1);
        for (int i = 0; i < l; ++i) op(i * l + i, 0) = 1.0;
        break;
      }
      case Piece::CupL: {  // into V* (x) V, twisted by mu^-1
        CMat mi = mu(x).inverse();
        op = CMat::Zero(l * l, 1);
        for (int i = 0; i < l; ++i)
          for (int k = 0; k < l; ++k) op(i * l + k, 0) = mi(k, i);
        break;
      }
      case Piece::CapR: {  // V (x) V* -> C, twisted by mu
        CMat m = mu(x);
        op = CMat::Zero(1, l * l);
        for (int j = 0; j < l; ++j)
          for (int i = 0; i < l; ++i) op(0, j * l + i) = m(i, j);
        break;
      }
      case Piece::CapL: {  // canonical pairing V* (x) V -> C
        op = CMat::Zero(1, l * l);
        for (int i = 0; i < l; ++i) op(0, i * l + i) = 1.0;
        break;
      }
      default: throw Error(Errc::InvalidArgument, "cup_cap: not a cup or cap");
    }
    return op;
  }

  BraidingBlock crossing(Piece p, const Mat2<Cx>& c, const Mat2<Cx>& d) {
    auto blk = opts_.cache->get(opts_.rd, c, d, p == Piece::CrossNeg, opts_.tol);
    if (blk.retried)
      throw Error(Errc::NoIntertwiner, "principal branch section is not coherent at this crossing");
    return blk;
  }

  // Operator of slice k on the full level space.
  LinearBlock slice_operator(const GColoring<Cx>& col, size_t k) {
    const auto& in = col.levels[k];
    const int l = opts_.rd.ell;
    Eigen::Index dim = 1;
    for (size_t i = 0; i < in.size(); ++i) dim *= l;
    LinearBlock blk{CMat::Identity(dim, dim), in, col.levels[k + 1], {}};
    apply_slice(blk, col, k);
    return blk;
  }

  // Bottom-to-top state propagation.
  LinearBlock contract(const GColoring<Cx>& col) {
    const auto& d = col.diagram;
    const int l = opts_.rd.ell;
    Eigen::Index dim = 1;
    for (size_t i = 0; i < d.bottom.size(); ++i) dim *= l;
    LinearBlock blk{CMat::Identity(dim, dim), col.bottom(), col.bottom(), {}};
    for (size_t k = 0; k < d.slices.size(); ++k) apply_slice(blk, col, k);
    blk.codomain = col.top();
    return blk;
  }

  template <class S>
  LinearBlock contract(const GColoring<S>& col) {
    return contract(to_cx(col));
  }

 private:
  static std::string key(const Mat2<Cx>& g) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", g.m11.real(), g.m11.imag(),
                  g.m12.real(), g.m12.imag(), g.m21.real(), g.m21.imag(), g.m22.real(), g.m22.imag());
    return buf;
  }

  void apply_slice(LinearBlock& blk, const GColoring<Cx>& col, size_t k) {
    const auto& in = col.levels[k];
    const auto& outc = col.levels[k + 1];
    const int l = opts_.rd.ell;
    size_t width = in.size(), pos = 0, b = 0;
    for (Piece p : col.diagram.slices[k]) {
      size_t ia = piece_bottom(p).size(), oa = piece_top(p).size();
      if (is_identity(p)) {
        pos += 1;
        b += 1;
        continue;
      }
      CMat op;
      if (is_crossing(p)) {
        auto br = crossing(p, in[b].color, in[b + 1].color);
        if (!same(br.u, outc[pos].color, 1e-8) || !same(br.v, outc[pos + 1].color, 1e-8))
          throw Error(Errc::InvalidArgument, "crossing block colours disagree with the colouring");
        op = br.M;
        Cx pivot = 0.0;
        double mx = br.M.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < br.M.rows() && pivot == Cx(0.0); ++i)
          for (Eigen::Index j = 0; j < br.M.cols(); ++j)
            if (std::abs(br.M(i, j)) >= mx * (1 - 1e-9)) {
              pivot = br.M(i, j);
              break;
            }
        blk.phase_log.push_back({k, pos, p == Piece::CrossPos ? +1 : -1, std::arg(pivot), br.residual, br.nullity});
      } else if (is_cup(p)) {
        op = cup_cap(p, outc[pos].color);
      } else {
        op = cup_cap(p, in[b].color);
      }
      blk.matrix = detail::apply_local(blk.matrix, l, pos, width, ia, op);
      width = width - ia + oa;
      pos += oa;
      b += ia;
    }
  }

  EvalOptions opts_;
  std::map<std::string, CyclicRep> reps_;
};

// Fibered composition: refused unless the middle coloured objects agree.
inline LinearBlock compose(const LinearBlock& top, const LinearBlock& bottom, double tol = 1e-9) {
  if (!same(top.domain, bottom.codomain, tol))
    throw Error(Errc::InvalidArgument, "composition of blocks over different coloured objects");
  LinearBlock out{top.matrix * bottom.matrix, bottom.domain, top.codomain, bottom.phase_log};
  out.phase_log.insert(out.phase_log.end(), top.phase_log.begin(), top.phase_log.end());
  return out;
}

struct InvariantResult {
  Cx value{0.0, 0.0};
  bool scalar = false;      // closed diagram, or a (1,1) tangle whose block is scalar
  double off_scalar = 0.0;  // (1,1) tangles: distance of the block from value * Id
  LinearBlock block;
  int writhe = 0;
  double max_block_residual = 0.0;
  int max_nullity = 0;
};

inline InvariantResult invariant(Evaluator& ev, const GColoring<Cx>& col) {
  InvariantResult r;
  r.block = ev.contract(col);
  r.writhe = writhe(col.diagram);
  for (const auto& p : r.block.phase_log) {
    r.max_block_residual = std::max(r.max_block_residual, p.residual);
    r.max_nullity = std::max(r.max_nullity, p.nullity);
  }
  const auto& M = r.block.matrix;
  if (M.rows() == 1 && M.cols() == 1) {
    r.value = M(0, 0);
    r.scalar = true;
  } else if (M.rows() == M.cols() && col.diagram.bottom.size() == 1 && col.diagram.top.size() == 1) {
    r.value = M.trace() / static_cast<double>(M.rows());
    r.off_scalar = off_scalar(M) / std::max(1.0, std::abs(r.value));
    r.scalar = true;
  }
  return r;
}

template <class S>
InvariantResult invariant(Evaluator& ev, const GColoring<S>& col) {
  return invariant(ev, to_cx(col));
}

struct MoveReportRow {
  std::string move;
  Cx before, after;
  double magnitude_defect = 0;  // relative
  double phase_drift = 0;
  bool ok = false;
  std::string error;
};

// Applies each move, recolours with the same seeds, re-evaluates and tabulates agreement.
template <class S>
std::vector<MoveReportRow> reidemeister_report(Evaluator& ev, const Diagram& d, const Boundary<S>& bottom,
                                               const std::vector<Mat2<S>>& seeds, const std::vector<Site>& moves,
                                               double tol = 1e-8) {
  auto base = invariant(ev, propagate<S>(d, bottom, seeds));
  std::vector<MoveReportRow> rows;
  for (const auto& site : moves) {
    MoveReportRow row;
    row.move = describe(site);
    row.before = base.value;
    try {
      auto moved = apply_move(d, site);
      auto r = invariant(ev, propagate<S>(moved, bottom, seeds));
      row.after = r.value;
      double scale = std::max(std::abs(base.value), 1e-300);
      row.magnitude_defect = std::abs(std::abs(r.value) - std::abs(base.value)) / std::max(1.0, scale);
      row.phase_drift = std::arg(r.value / base.value);
      row.ok = row.magnitude_defect < tol;
    } catch (const Error& e) {
      row.error = std::string(errc_name(e.code())) + ": " + e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json phase_log_json(const std::vector<PhaseEntry>& log) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : log)
    a.push_back({{"slice", p.slice}, {"pos", p.pos}, {"sign", p.sign}, {"pivot_arg", p.pivot_arg},
                 {"normalization", kNormalizationVersion}});
  return a;
}

inline nlohmann::json result_json(const InvariantResult& r, const EvalOptions& opts,
                                  const std::vector<CentralCharacter>& characters) {
  nlohmann::json chars = nlohmann::json::array();
  for (const auto& c : characters) {
    nlohmann::json q = nlohmann::json::array();
    for (Cx v : {c.alpha, c.beta, c.a, c.b}) q.push_back({v.real(), v.imag()});
    chars.push_back(q);
  }
  nlohmann::json j{{"invariant", {r.value.real(), r.value.imag()}},
                   {"magnitude", std::abs(r.value)},
                   {"scalar", r.scalar},
                   {"phase_log", phase_log_json(r.block.phase_log)},
                   {"ell", opts.rd.ell},
                   {"character", chars},
                   {"branch_policy", "principal (r=0, s=0)"},
                   {"twist", twist_name(opts.twist)},
                   {"normalization", kNormalizationVersion},
                   {"writhe", r.writhe},
                   {"residuals",
                    {{"max_block_residual", r.max_block_residual},
                     {"max_nullity", r.max_nullity},
                     {"off_scalar", r.off_scalar}}}};
  if (!r.scalar) j["block_shape"] = {r.block.matrix.rows(), r.block.matrix.cols()};
  return j;
}

}  // namespace tanglev
