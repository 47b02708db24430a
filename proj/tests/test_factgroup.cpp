#include <gtest/gtest.h>

#include "support.hpp"
#include "tanglev/factgroup.hpp"

using namespace tanglev;
using tanglev::testing::random_factorizable;

namespace {

Mat2<Qi> q(long a, long b, long c, long d) { return {Qi(a), Qi(b), Qi(c), Qi(d)}; }

}  // namespace

TEST(Factorize, WorkedExample) {
  Mat2<Qi> g{Qi::frac(-4, 3), Qi(1), Qi::frac(-10, 3), Qi(2)};
  auto f = factorize(g);
  EXPECT_EQ(f.alpha, Qi(2));
  EXPECT_EQ(f.beta, Qi(1));
  EXPECT_EQ(f.a, Qi(3));
  EXPECT_EQ(f.b, Qi(5));
  // multiply back: [[1,1],[0,2]] * [[3,0],[5,1]]^-1
  Mat2<Qi> minus_inv{Qi::frac(1, 3), Qi(0), Qi::frac(-5, 3), Qi(1)};
  EXPECT_EQ(q(1, 1, 0, 2) * minus_inv, g);
}

TEST(Factorize, Identity) {
  auto f = factorize(Mat2<Qi>::identity());
  EXPECT_EQ(f.alpha, Qi(1));
  EXPECT_EQ(f.beta, Qi(0));
  EXPECT_EQ(f.a, Qi(1));
  EXPECT_EQ(f.b, Qi(0));
}

TEST(Factorize, Boundary) {
  try {
    factorize(q(0, 1, -1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotFactorizable);
  }
  EXPECT_THROW(factorize(q(1, 2, 2, 4)), Error);
}

TEST(Factorize, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto g = random_factorizable(rng);
    auto f = factorize(g);
    EXPECT_EQ(f.assemble(), g);
    EXPECT_EQ(f.plus().m11, Qi(1));
    EXPECT_EQ(f.minus().m22, Qi(1));
  }
}

TEST(Star, HandExamples) {
  EXPECT_EQ(star_mul(q(1, 0, 1, 1), q(2, 0, 0, 1)), q(2, 0, 1, 1));
  EXPECT_EQ(star_inv(q(1, 0, 1, 1)), q(1, 0, -1, 1));
  EXPECT_EQ(star_inv(Mat2<Qi>::identity()), Mat2<Qi>::identity());
}

TEST(Star, GroupAxioms) {
  std::mt19937_64 rng(12);
  auto e = Mat2<Qi>::identity();
  for (int i = 0; i < 200; ++i) {
    auto g = random_factorizable(rng), h = random_factorizable(rng), k = random_factorizable(rng);
    EXPECT_EQ(star_mul(e, g), g);
    EXPECT_EQ(star_mul(g, e), g);
    EXPECT_EQ(star_mul(g, star_inv(g)), e);
    EXPECT_EQ(star_mul(star_inv(g), g), e);
    EXPECT_EQ(star_inv(star_inv(g)), g);
    try {
      EXPECT_EQ(star_mul(star_mul(g, h), k), star_mul(g, star_mul(h, k)));
    } catch (const Error&) {
    }
  }
}

TEST(Star, BorelPartsMultiply) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    auto g = random_factorizable(rng), h = random_factorizable(rng);
    auto fg = factorize(g), fh = factorize(h), fp = factorize(star_mul(g, h));
    EXPECT_EQ(fp.plus(), fg.plus() * fh.plus());
    EXPECT_EQ(fp.minus(), fg.minus() * fh.minus());
  }
}

TEST(Crossing, HandExample) {
  auto x = q(1, 0, 1, 1), y = q(2, 0, 0, 1);
  EXPECT_EQ(x_left(x, y), q(2, 0, -1, 1));
  EXPECT_EQ(x_right(x, y), q(1, 0, 1, 1));
  EXPECT_EQ(star_mul(x_left(x, y), x_right(x, y)), star_mul(x, y));
}

TEST(Crossing, TrivialCases) {
  std::mt19937_64 rng(14);
  auto e = Mat2<Qi>::identity();
  for (int i = 0; i < 50; ++i) {
    auto x = random_factorizable(rng);
    EXPECT_EQ(x_left(e, x), x);
    EXPECT_EQ(x_right(e, x), e);
    EXPECT_EQ(x_left(x, e), e);
    EXPECT_EQ(x_right(x, e), x);
  }
  auto [u, v] = yb_map(e, e);
  EXPECT_EQ(u, e);
  EXPECT_EQ(v, e);
}

TEST(Crossing, ConservationAndInverse) {
  std::mt19937_64 rng(15);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto x = random_factorizable(rng), y = random_factorizable(rng);
    try {
      auto [u, v] = b_map(x, y);
      EXPECT_EQ(star_mul(u, v), star_mul(x, y));
      auto [x2, y2] = b_inv(u, v);
      EXPECT_EQ(x2, x);
      EXPECT_EQ(y2, y);
      auto [p, r] = yb_map(x, y);
      EXPECT_EQ(star_mul(p, r), star_mul(y, x));
      auto [x3, y3] = yb_inv(p, r);
      EXPECT_EQ(x3, x);
      EXPECT_EQ(y3, y);
      ++checked;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NotFactorizable);
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Crossing, CurlPartnerIsFixed) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 50; ++i) {
    auto x = random_factorizable(rng);
    try {
      auto z = curl_partner(x);
      auto [u, v] = b_map(x, z);
      EXPECT_EQ(u, x);
      EXPECT_EQ(v, z);
    } catch (const Error&) {
    }
  }
}

TEST(YangBaxter, ExactOnRandomTriples) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    std::array<Mat2<Qi>, 3> t{random_factorizable(rng), random_factorizable(rng), random_factorizable(rng)};
    try {
      auto l = yb_lhs(t), r = yb_rhs(t);
      for (int k = 0; k < 3; ++k) EXPECT_EQ(l[k], r[k]);
      ++checked;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(checked, 150);
}

TEST(YangBaxter, FloatBackendAgrees) {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 50; ++i) {
    std::array<Mat2<Qi>, 3> t{random_factorizable(rng), random_factorizable(rng), random_factorizable(rng)};
    try {
      auto l = yb_lhs(t);
      std::array<Mat2<Cx>, 3> tc{to_cx(t[0]), to_cx(t[1]), to_cx(t[2])};
      auto lc = yb_lhs(tc, 1e-12), rc = yb_rhs(tc, 1e-12);
      for (int k = 0; k < 3; ++k) {
        EXPECT_TRUE(same(lc[k], to_cx(l[k]), 1e-8));
        EXPECT_TRUE(same(lc[k], rc[k], 1e-8));
      }
    } catch (const Error&) {
    }
  }
}

TEST(Scalar, RationalText) {
  for (const char* s : {"3/4", "-5/2+1/3 i", "7 i", "-2-1/4 i", "0"}) {
    Qi z = parse_qi(s);
    EXPECT_EQ(parse_qi(to_string(z)), z) << s;
  }
  EXPECT_EQ(parse_qi("-5/2+1/3 i"), Qi(mpq_class(-5, 2), mpq_class(1, 3)));
  EXPECT_THROW(parse_qi("1/0"), Error);
}
