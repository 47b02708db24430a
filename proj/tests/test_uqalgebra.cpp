#include <gtest/gtest.h>

#include "support.hpp"
#include "tanglev/uqalgebra.hpp"

using namespace tanglev;
using tanglev::testing::random_generic;

namespace {

CentralCharacter random_char(std::mt19937_64& rng) { return CentralCharacter::of(random_generic(rng)); }

AlgebraElement random_element(std::mt19937_64& rng, const CentralCharacter& x, const RootData& rd) {
  auto u = AlgebraElement::zero(x, rd);
  for (auto& c : u.coef) c = tanglev::testing::random_cx(rng);
  return u;
}

}  // namespace

TEST(RootData, OddOnly) {
  EXPECT_THROW(RootData::make(4), Error);
  EXPECT_THROW(RootData::make(1), Error);
  auto rd = RootData::make(5);
  EXPECT_NEAR(std::abs(std::pow(rd.eps, 5) - 1.0), 0.0, 1e-14);
  for (int k = 1; k < 5; ++k) EXPECT_GT(std::abs(rd.pow(k) - 1.0), 0.1);
  EXPECT_NEAR(std::abs(rd.pow(-3) - rd.pow(2)), 0.0, 1e-15);
}

TEST(RootData, PrincipalRoot) {
  for (Cx z : {Cx(2, 0), Cx(-1, 0), Cx(0, -3), Cx(1, 1)}) {
    Cx r = principal_root(z, 3);
    EXPECT_NEAR(std::abs(std::pow(r, 3) - z), 0.0, 1e-12);
    double th = std::arg(r);
    if (th < 0) th += 2 * std::numbers::pi;
    EXPECT_LT(th, 2 * std::numbers::pi / 3 + 1e-12);
  }
}

TEST(Generic, Predicate) {
  auto rd = RootData::make(3);
  EXPECT_FALSE(is_generic({1.0, 0.0, 1.0, 0.0}, rd));
  EXPECT_FALSE(is_generic({0.0, 1.0, 3.0, 5.0}, rd));
  EXPECT_TRUE(is_generic({2.0, 1.0, 3.0, 5.0}, rd));
  EXPECT_THROW(build_irrep({1.0, 0.0, 1.0, 0.0}, rd), Error);
}

TEST(Generic, WorkedCharacterRoots) {
  // numpy companion roots of the same central relation, sorted by (Re, Im)
  auto c = c_roots({2.0, 1.0, 3.0, 5.0}, RootData::make(3), 0);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(std::abs(c[0] - Cx(-1.47240156232473, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c[1] - Cx(-0.261179098149755, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c[2] - Cx(1.73358066047449, 0)), 0.0, 1e-12);
  auto c1 = c_roots({2.0, 1.0, 3.0, 5.0}, RootData::make(3), 1);
  EXPECT_NEAR(std::abs(c1[0] - Cx(-0.866790330237244, 1.50132489148031)), 0.0, 1e-12);
}

TEST(Irrep, RelationsAndCentralValues) {
  std::mt19937_64 rng(31);
  for (int ell : {3, 5, 7}) {
    auto rd = RootData::make(ell);
    for (int i = 0; i < 20; ++i) {
      auto x = random_char(rng);
      auto rep = build_irrep(x, {i % ell, (i / ell) % ell}, rd);
      auto r = check_irrep(rep);
      for (double v : r.relations) EXPECT_LT(v, 1e-10);
      for (double v : r.central) EXPECT_LT(v, 1e-9);
      EXPECT_LT(r.casimir, 1e-9);
    }
  }
}

TEST(Irrep, CentralRelationPerBasisVector) {
  std::mt19937_64 rng(32);
  auto rd = RootData::make(5);
  for (int i = 0; i < 10; ++i) {
    auto x = random_char(rng);
    auto rep = build_irrep(x, {1, 2}, rd);
    for (int n = 0; n < rd.ell; ++n) {
      Cx p = 1.0;
      for (int j = 0; j < rd.ell; ++j)
        p *= rep.cval - rep.kappa * rd.pow(2L * n) * rd.pow(j + 1) - rd.pow(-2L * n) * rd.pow(-j - 1) / rep.lambda;
      EXPECT_NEAR(std::abs(p - x.beta * x.f_power()), 0.0, 1e-8 * std::max(1.0, std::abs(p)));
    }
  }
}

TEST(Irrep, BranchesAreDistinct) {
  std::mt19937_64 rng(33);
  auto rd = RootData::make(3);
  auto x = random_char(rng);
  std::vector<std::pair<Cx, Cx>> seen;
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      auto rep = build_irrep(x, {r, s}, rd);
      std::pair<Cx, Cx> key{rep.kappa / rep.lambda, rep.cval};
      for (auto& k : seen)
        EXPECT_GT(std::abs(k.first - key.first) + std::abs(k.second - key.second), 1e-6);
      seen.push_back(key);
    }
}

TEST(Pbw, UnitAndCommutation) {
  auto rd = RootData::make(3);
  CentralCharacter x{2.0, 1.0, 3.0, 5.0};
  std::mt19937_64 rng(34);
  auto v = random_element(rng, x, rd);
  auto one = AlgebraElement::unit(x, rd);
  EXPECT_LT((one * v - v).norm_inf(), 1e-14);
  EXPECT_LT((v * one - v).norm_inf(), 1e-12);
  auto K = AlgebraElement::generator(x, rd, Gen::K), E = AlgebraElement::generator(x, rd, Gen::E);
  auto KE = K * E;
  auto expect = AlgebraElement::monomial(x, rd, 1, 0, 1, 0, rd.pow(2));
  EXPECT_LT((KE - expect).norm_inf(), 1e-15);
  // E^l reduces to beta
  auto Ep = one;
  for (int i = 0; i < 3; ++i) Ep = E * Ep;
  EXPECT_LT((Ep - Cx(1.0) * one).norm_inf(), 1e-15);
}

TEST(Pbw, RepresentationOracle) {
  std::mt19937_64 rng(35);
  for (int ell : {3, 5}) {
    auto rd = RootData::make(ell);
    auto x = random_char(rng);
    std::vector<CyclicRep> reps{build_irrep(x, {0, 0}, rd), build_irrep(x, {1, 2}, rd), build_irrep(x, {2, 1}, rd)};
    for (int t = 0; t < 4; ++t) {
      auto u = random_element(rng, x, rd), v = random_element(rng, x, rd);
      auto uv = u * v;
      for (const auto& rep : reps) {
        CMat lhs = evaluate(uv, rep), rhs = evaluate(u, rep) * evaluate(v, rep);
        EXPECT_LT(max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)), 1e-10);
      }
    }
  }
}

TEST(Pbw, Associative) {
  std::mt19937_64 rng(36);
  auto rd = RootData::make(3);
  auto x = random_char(rng);
  for (int t = 0; t < 5; ++t) {
    auto a = random_element(rng, x, rd), b = random_element(rng, x, rd), c = random_element(rng, x, rd);
    auto l = (a * b) * c, r = a * (b * c);
    EXPECT_LT((l - r).norm_inf() / std::max(1.0, l.norm_inf()), 1e-10);
  }
}

TEST(Hopf, Coproduct) {
  std::mt19937_64 rng(37);
  auto rd = RootData::make(3);
  auto A = build_irrep(random_char(rng), rd), B = build_irrep(random_char(rng), rd),
       C = build_irrep(random_char(rng), rd);
  EXPECT_LT(max_abs(coproduct_matrix(A, B, Gen::K) - kron(A.K, B.K)), 1e-15);
  // Delta is an algebra map: the relations hold on V_A (x) V_B
  auto rel = relation_residuals(coproduct_matrix(A, B, Gen::K), coproduct_matrix(A, B, Gen::L),
                                coproduct_matrix(A, B, Gen::E), coproduct_matrix(A, B, Gen::F), rd);
  for (double v : rel) EXPECT_LT(v, 1e-9);
  // Delta(c) is central
  CMat dE = coproduct_matrix(A, B, Gen::E), dF = coproduct_matrix(A, B, Gen::F);
  CMat dc = dE * dF + coproduct_matrix(A, B, Gen::K) / rd.eps + coproduct_matrix(A, B, Gen::L).inverse() * rd.eps;
  for (Gen g : kGens) {
    CMat dg = coproduct_matrix(A, B, g);
    EXPECT_LT(max_abs(dc * dg - dg * dc), 1e-9);
  }
  // coassociativity on generators
  for (Gen g : kGens) {
    CMat I = A.id();
    CMat left, right;
    switch (g) {
      case Gen::K:
        left = right = kron(kron(A.K, B.K), C.K);
        break;
      case Gen::L:
        left = right = kron(kron(A.L, B.L), C.L);
        break;
      case Gen::E:
        left = kron(coproduct_matrix(A, B, Gen::E), C.K) + kron(kron(I, I), C.E);
        right = kron(A.E, coproduct_matrix(B, C, Gen::K)) + kron(I, coproduct_matrix(B, C, Gen::E));
        break;
      case Gen::F:
        left = kron(coproduct_matrix(A, B, Gen::F), I) + kron(coproduct_matrix(A, B, Gen::L).inverse(), C.F);
        right = kron(A.F, kron(I, I)) + kron(A.Linv(), coproduct_matrix(B, C, Gen::F));
        break;
    }
    EXPECT_LT(max_abs(left - right), 1e-10) << gen_name(g);
  }
}

TEST(Hopf, AntipodeAxiom) {
  std::mt19937_64 rng(38);
  auto rd = RootData::make(3);
  auto x = random_char(rng);
  auto rep = build_irrep(x, {1, 1}, rd);
  auto one = AlgebraElement::unit(x, rd);
  for (Gen g : kGens) {
    auto acc = AlgebraElement::zero(x, rd);
    CMat mat = CMat::Zero(3, 3);
    for (auto& [s1, c2] : antipode_coproduct_terms(g, x, rd)) {
      acc += s1 * c2;
      mat += evaluate(s1, rep) * evaluate(c2, rep);
    }
    EXPECT_LT((acc - counit(g) * one).norm_inf(), 1e-12) << gen_name(g);
    EXPECT_LT(max_abs(mat - counit(g) * rep.id()), 1e-10) << gen_name(g);
    EXPECT_LT(max_abs(evaluate(antipode(g, x, rd), rep) - antipode_matrix(rep, g)), 1e-10);
  }
  // S^2(E) = e^2 E, realised by conjugation with K
  CMat s2 = rep.K * rep.E * rep.Kinv();
  EXPECT_LT(max_abs(s2 - rd.pow(2) * rep.E), 1e-12);
}

TEST(TraceForm, UnitGramAndInvariance) {
  std::mt19937_64 rng(39);
  auto rd = RootData::make(3);
  auto x = random_char(rng);
  TraceForm t(x, rd);
  EXPECT_NEAR(std::abs(t(AlgebraElement::unit(x, rd)) - 27.0), 0.0, 1e-9);
  CMat G = t.gram();
  Eigen::FullPivLU<CMat> lu(G);
  EXPECT_EQ(lu.rank(), 81);
  auto cp = t.copairing();
  for (size_t p = 0; p < cp.size(); p += 7)
    for (size_t q = 0; q < cp.size(); q += 5)
      EXPECT_NEAR(std::abs(t.pairing(cp[p].first, cp[q].second) - (p == q ? 1.0 : 0.0)), 0.0, 1e-8);
}

TEST(TraceForm, HopfInvariance) {
  std::mt19937_64 rng(40);
  auto rd = RootData::make(3);
  auto x = random_char(rng);
  TraceForm t(x, rd);
  for (int k = 0; k < 5; ++k) {
    auto a = random_element(rng, x, rd), b = random_element(rng, x, rd);
    Cx tab = t(a * b);
    for (Gen g : kGens) {
      Cx acc = 0.0;
      for (auto& [s1, c2] : antipode_coproduct_terms(g, x, rd)) acc += t(a * s1 * c2 * b);
      EXPECT_LT(std::abs(acc - counit(g) * tab) / std::max(1.0, std::abs(tab)), 1e-8) << gen_name(g);
    }
  }
}
