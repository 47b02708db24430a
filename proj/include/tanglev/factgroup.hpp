#pragma once

#include <array>
#include <utility>

#include "scalar.hpp"

namespace tanglev {

inline constexpr double kDefaultTol = 1e-10;

template <class S>
struct Mat2 {
  S m11{0}, m12{0}, m21{0}, m22{0};

  static Mat2 identity() { return {S(1), S(0), S(0), S(1)}; }

  S det() const { return m11 * m22 - m12 * m21; }
  S trace() const { return m11 + m22; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
            x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.m11 == y.m11 && x.m12 == y.m12 && x.m21 == y.m21 && x.m22 == y.m22;
  }
};

template <class S>
bool same(const Mat2<S>& x, const Mat2<S>& y, double tol = kDefaultTol) {
  return same(x.m11, y.m11, tol) && same(x.m12, y.m12, tol) && same(x.m21, y.m21, tol) &&
         same(x.m22, y.m22, tol);
}

template <class S>
Mat2<S> inverse(const Mat2<S>& g, double tol = kDefaultTol) {
  S d = g.det();
  if (is_zero(d, tol)) throw Error(Errc::NotFactorizable, "singular matrix");
  return {g.m22 / d, -g.m12 / d, -g.m21 / d, g.m11 / d};
}

template <class S>
Mat2<Cx> to_cx(const Mat2<S>& g) {
  return {to_cx(g.m11), to_cx(g.m12), to_cx(g.m21), to_cx(g.m22)};
}

// g = g+ g-^{-1} with g+ = [[1,beta],[0,alpha]], g- = [[a,0],[b,1]].
template <class S>
struct Factorization {
  S alpha, beta, a, b;

  Mat2<S> plus() const { return {S(1), beta, S(0), alpha}; }
  Mat2<S> minus() const { return {a, S(0), b, S(1)}; }
  Mat2<S> plus_inv() const { return {S(1), -beta / alpha, S(0), S(1) / alpha}; }
  Mat2<S> minus_inv() const { return {S(1) / a, S(0), -b / a, S(1)}; }
  Mat2<S> assemble() const { return plus() * minus_inv(); }
};

template <class S>
bool is_factorizable(const Mat2<S>& g, double tol = kDefaultTol) {
  return !is_zero(g.m22, tol) && !is_zero(g.det(), tol);
}

template <class S>
Factorization<S> factorize(const Mat2<S>& g, double tol = kDefaultTol) {
  S d = g.det();
  if (is_zero(g.m22, tol) || is_zero(d, tol)) throw Error(Errc::NotFactorizable, "g22 = 0 or det = 0");
  return {g.m22, g.m12, g.m22 / d, -g.m21 / d};
}

template <class S>
Mat2<S> from_borel(const Mat2<S>& plus, const Mat2<S>& minus, double tol = kDefaultTol) {
  return plus * inverse(minus, tol);
}

template <class S>
Mat2<S> star_mul(const Mat2<S>& g, const Mat2<S>& h, double tol = kDefaultTol) {
  auto fg = factorize(g, tol);
  auto fh = factorize(h, tol);
  return (fg.plus() * fh.plus()) * inverse(fg.minus() * fh.minus(), tol);
}

template <class S>
Mat2<S> star_inv(const Mat2<S>& g, double tol = kDefaultTol) {
  auto f = factorize(g, tol);
  return f.plus_inv() * f.minus();
}

template <class S>
Mat2<S> x_left(const Mat2<S>& x, const Mat2<S>& y, double tol = kDefaultTol) {
  auto f = factorize(x, tol);
  return f.minus() * y * f.minus_inv();
}

template <class S>
Mat2<S> x_right(const Mat2<S>& x, const Mat2<S>& y, double tol = kDefaultTol) {
  auto fl = factorize(x_left(x, y, tol), tol);
  return fl.plus_inv() * x * fl.plus();
}

// Crossing map b(x,y) = (x_L(x,y), x_R(x,y)).
template <class S>
std::pair<Mat2<S>, Mat2<S>> b_map(const Mat2<S>& x, const Mat2<S>& y, double tol = kDefaultTol) {
  Mat2<S> u = x_left(x, y, tol);
  auto fu = factorize(u, tol);
  return {u, fu.plus_inv() * x * fu.plus()};
}

template <class S>
std::pair<Mat2<S>, Mat2<S>> b_inv(const Mat2<S>& u, const Mat2<S>& v, double tol = kDefaultTol) {
  auto fu = factorize(u, tol);
  Mat2<S> x = fu.plus() * v * fu.plus_inv();
  auto fx = factorize(x, tol);
  return {x, fx.minus_inv() * u * fx.minus()};
}

// Set-theoretic Yang-Baxter map (x,y) -> (x_L(y,x), x_R(y,x)).
template <class S>
std::pair<Mat2<S>, Mat2<S>> yb_map(const Mat2<S>& x, const Mat2<S>& y, double tol = kDefaultTol) {
  return b_map(y, x, tol);
}

template <class S>
std::pair<Mat2<S>, Mat2<S>> yb_inv(const Mat2<S>& u, const Mat2<S>& v, double tol = kDefaultTol) {
  auto [y, x] = b_inv(u, v, tol);
  return {x, y};
}

// R12 R13 R23 and R23 R13 R12 on a triple.
template <class S>
std::array<Mat2<S>, 3> yb_lhs(std::array<Mat2<S>, 3> t, double tol = kDefaultTol) {
  std::tie(t[1], t[2]) = yb_map(t[1], t[2], tol);
  std::tie(t[0], t[2]) = yb_map(t[0], t[2], tol);
  std::tie(t[0], t[1]) = yb_map(t[0], t[1], tol);
  return t;
}

template <class S>
std::array<Mat2<S>, 3> yb_rhs(std::array<Mat2<S>, 3> t, double tol = kDefaultTol) {
  std::tie(t[0], t[1]) = yb_map(t[0], t[1], tol);
  std::tie(t[0], t[2]) = yb_map(t[0], t[2], tol);
  std::tie(t[1], t[2]) = yb_map(t[1], t[2], tol);
  return t;
}

// Curl colour: the fixed point of b paired with x.
template <class S>
Mat2<S> curl_partner(const Mat2<S>& x, double tol = kDefaultTol) {
  auto f = factorize(x, tol);
  return f.minus_inv() * f.plus();
}

}  // namespace tanglev
