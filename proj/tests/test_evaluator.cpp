#include <gtest/gtest.h>

#include "support.hpp"
#include "tanglev/evaluator.hpp"

using namespace tanglev;
using tanglev::testing::random_factorizable;

namespace {

// Rational colour whose whole abelian long-trefoil colouring is generic at l = 3.
Mat2<Qi> generic_colour(std::mt19937_64& rng) {
  auto rd = RootData::make(3);
  for (;;) {
    auto x = random_factorizable(rng);
    try {
      auto z = curl_partner(x);
      if (is_generic(CentralCharacter::of(x), rd) && is_generic(CentralCharacter::of(z), rd)) return x;
    } catch (const Error&) {
    }
  }
}

Cx long_value(Evaluator& ev, const Diagram& d, const Mat2<Qi>& x) {
  return invariant(ev, propagate<Qi>(d, {{+1, x}}, meridian_seed(x))).value;
}

}  // namespace

TEST(Contract, EmptyAndIdentity) {
  Evaluator ev;
  auto r = invariant(ev, propagate<Qi>(Diagram{}, {}));
  EXPECT_TRUE(r.scalar);
  EXPECT_EQ(r.value, Cx(1.0));
  std::mt19937_64 rng(51);
  auto x = generic_colour(rng);
  auto blk = ev.contract(propagate<Qi>(identity_diagram({1}), {{+1, x}}));
  EXPECT_LT(max_abs(blk.matrix - CMat::Identity(3, 3)), 1e-15);
}

TEST(Contract, ZigzagsAreIdentities) {
  std::mt19937_64 rng(52);
  Evaluator ev;
  auto x = generic_colour(rng);
  for (int v = 0; v < 4; ++v) {
    int sign = v < 2 ? +1 : -1;
    auto d = apply_move(identity_diagram({sign}), {MoveKind::SlideCupCap, true, 0, 0, v});
    auto blk = ev.contract(propagate<Qi>(d, {{sign, x}}));
    EXPECT_LT(max_abs(blk.matrix - CMat::Identity(3, 3)), 1e-10) << v;
  }
}

TEST(Contract, LoopsAreTwistTraces) {
  std::mt19937_64 rng(53);
  auto x = generic_colour(rng);
  for (auto t : {TwistChoice::Balanced, TwistChoice::K, TwistChoice::L}) {
    EvalOptions o;
    o.twist = t;
    Evaluator ev(o);
    auto mu = ev.mu(to_cx(x));
    Cx right = invariant(ev, solve_closed<Qi>(parse("cupR ; capR"), {x})).value;
    Cx left = invariant(ev, solve_closed<Qi>(parse("cupL ; capL"), {x})).value;
    EXPECT_NEAR(std::abs(right - mu.trace()), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(left - mu.inverse().trace()), 0.0, 1e-12);
  }
  Evaluator ev;
  auto rep = ev.rep(to_cx(x));
  Cx s = 0.0;
  for (int n = 0; n < 3; ++n) s += rep.kappa * rep.rd.pow(2 * n);
  EXPECT_NEAR(std::abs(s), 0.0, 1e-12);
}

TEST(Contract, SliceOrderOracle) {
  std::mt19937_64 rng(54);
  Evaluator ev;
  auto x = generic_colour(rng);
  auto col = to_cx(propagate<Qi>(close_braid(braid_word({1, 1, 1}, 2), 1), {{+1, x}}, meridian_seed(x)));
  auto whole = ev.contract(col);
  // multiply the slice operators from the top down
  CMat acc = ev.slice_operator(col, col.diagram.slices.size() - 1).matrix;
  for (size_t k = col.diagram.slices.size() - 1; k-- > 0;) acc = acc * ev.slice_operator(col, k).matrix;
  EXPECT_LT(max_abs(acc - whole.matrix) / max_abs(whole.matrix), 1e-9);
  auto closed = solve_closed<Qi>(close_braid(braid_word({1, 1, 1}, 2)), {x, curl_partner(x)});
  auto cc = to_cx(closed);
  CMat top = ev.slice_operator(cc, cc.diagram.slices.size() - 1).matrix;
  for (size_t k = cc.diagram.slices.size() - 1; k-- > 0;) top = top * ev.slice_operator(cc, k).matrix;
  EXPECT_NEAR(std::abs(top(0, 0) - ev.contract(cc).matrix(0, 0)), 0.0, 1e-9);
}

TEST(Functor, ComposeAndTensor) {
  std::mt19937_64 rng(55);
  Evaluator ev;
  auto a = braid_word({1, -1, 1}, 2), b = braid_word({-1, 1}, 2);
  int checked = 0;
  for (int i = 0; i < 6; ++i) {
    Boundary<Qi> bot{{+1, generic_colour(rng)}, {+1, generic_colour(rng)}};
    try {
      auto ca = propagate<Qi>(a, bot);
      auto cb = propagate<Qi>(b, ca.top());
      auto whole = ev.contract(propagate<Qi>(compose(b, a), bot));
      auto parts = compose(ev.contract(cb), ev.contract(ca));
      EXPECT_LT(max_abs(whole.matrix - parts.matrix), 1e-9);
      EXPECT_THROW(compose(ev.contract(ca), ev.contract(ca)), Error);

      Boundary<Qi> four = bot;
      four.insert(four.end(), ca.top().begin(), ca.top().end());
      auto t = ev.contract(propagate<Qi>(tensor(a, b), four));
      auto cb2 = propagate<Qi>(b, ca.top());
      CMat k = kron(ev.contract(ca).matrix, ev.contract(cb2).matrix);
      EXPECT_LT(max_abs(t.matrix - k), 1e-9);
      ++checked;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::NotFactorizable || e.code() == Errc::NonGenericCharacter) << e.what();
    }
  }
  EXPECT_GT(checked, 2);
}

TEST(Reidemeister, R2IsExact) {
  std::mt19937_64 rng(56);
  Evaluator ev;
  Boundary<Qi> bot{{+1, generic_colour(rng)}, {+1, generic_colour(rng)}};
  auto id = ev.contract(propagate<Qi>(identity_diagram({1, 1}), bot));
  auto r2 = ev.contract(propagate<Qi>(parse("x+ ; x-"), bot));
  EXPECT_LT(max_abs(r2.matrix - id.matrix), 1e-10);
}

TEST(Reidemeister, R3UpToScalar) {
  std::mt19937_64 rng(57);
  Evaluator ev;
  Boundary<Qi> bot{{+1, generic_colour(rng)}, {+1, generic_colour(rng)}, {+1, generic_colour(rng)}};
  for (auto [w1, w2] : {std::pair<std::vector<int>, std::vector<int>>{{1, 2, 1}, {2, 1, 2}},
                        {{1, 2, -1}, {-2, 1, 2}}}) {
    auto l = ev.contract(propagate<Qi>(braid_word(w1, 3), bot)).matrix;
    auto r = ev.contract(propagate<Qi>(braid_word(w2, 3), bot)).matrix;
    Cx s = (r.adjoint() * l).trace() / (r.adjoint() * r).trace();
    EXPECT_LT((l - s * r).norm() / l.norm(), 1e-8);
    EXPECT_NEAR(std::abs(s), 1.0, 1e-8);
  }
}

TEST(Reidemeister, AllMovesOnLongTrefoil) {
  std::mt19937_64 rng(58);
  Evaluator ev;
  auto x = generic_colour(rng);
  auto d = close_braid(braid_word({1, 1, 1}, 2), 1);
  auto col = propagate<Qi>(d, {{+1, x}}, meridian_seed(x));
  std::vector<Site> sites;
  for (auto k : {MoveKind::R2, MoveKind::FramedR1, MoveKind::SlideCupCap, MoveKind::R3}) {
    auto s = find_sites(d, k);
    sites.insert(sites.end(), s.begin(), s.end());
  }
  auto rows = reidemeister_report<Qi>(ev, d, {{+1, x}}, col.seed_log, sites);
  int ok = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      // inserted crossings may leave the generic locus
      EXPECT_TRUE(r.error.rfind("NonGenericCharacter", 0) == 0 || r.error.rfind("NotFactorizable", 0) == 0)
          << r.move << " " << r.error;
      continue;
    }
    EXPECT_TRUE(r.ok) << r.move << " defect " << r.magnitude_defect;
    ++ok;
  }
  EXPECT_GT(ok, 10);
}

TEST(Invariant, MarkovPresentationsAgree) {
  std::mt19937_64 rng(59);
  Evaluator ev;
  auto x = generic_colour(rng);
  double base = std::abs(long_value(ev, close_braid(braid_word({1, 1, 1}, 2), 1), x));
  for (auto w : {std::vector<int>{1, 2, 1, 2}, {2, 1, 2, 2}, {1, 1, 1, 2}})
    EXPECT_NEAR(std::abs(long_value(ev, close_braid(braid_word(w, 3), 1), x)), base, 1e-8 * std::max(1.0, base));
}

TEST(Invariant, TrefoilDiffersFromUnknot) {
  std::mt19937_64 rng(60);
  Evaluator ev;
  bool separated = false;
  for (int i = 0; i < 5; ++i) {
    auto x = generic_colour(rng);
    Cx unknot = long_value(ev, identity_diagram({1}), x);
    Cx tref = long_value(ev, close_braid(braid_word({1, 1, 1}, 2), 1), x);
    EXPECT_EQ(unknot, Cx(1.0));
    separated |= std::abs(std::abs(tref) - std::abs(unknot)) > 1e-6;
  }
  EXPECT_TRUE(separated);
}

TEST(Invariant, ClosedTrefoilVanishes) {
  std::mt19937_64 rng(61);
  Evaluator ev;
  auto x = generic_colour(rng);
  auto r = invariant(ev, solve_closed<Qi>(close_braid(braid_word({1, 1, 1}, 2)), {x, curl_partner(x)}));
  EXPECT_TRUE(r.scalar);
  EXPECT_LT(std::abs(r.value), 1e-9);
  EXPECT_EQ(r.writhe, 3);
  EXPECT_EQ(r.block.phase_log.size(), 3u);
}

TEST(Invariant, ResultJson) {
  std::mt19937_64 rng(62);
  Evaluator ev;
  auto x = generic_colour(rng);
  auto r = invariant(ev, propagate<Qi>(close_braid(braid_word({1, 1, 1}, 2), 1), {{+1, x}}, meridian_seed(x)));
  auto j = result_json(r, ev.options(), {CentralCharacter::of(x)});
  for (const char* k : {"invariant", "magnitude", "phase_log", "ell", "character", "branch_policy", "writhe",
                        "residuals", "normalization"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["ell"], 3);
  EXPECT_EQ(j["phase_log"].size(), 3u);
  EXPECT_LT(j["residuals"]["off_scalar"].get<double>(), 1e-9);
}
