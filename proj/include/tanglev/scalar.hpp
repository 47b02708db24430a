#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "error.hpp"

namespace tanglev {

using Cx = std::complex<double>;

// Exact complex rational: re + im*i with GMP rationals.
struct Qi {
  mpq_class re{0}, im{0};

  Qi() = default;
  Qi(long v) : re(v), im(0) {}
  Qi(mpq_class r) : re(std::move(r)), im(0) { re.canonicalize(); }
  Qi(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static Qi frac(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return Qi(q);
  }

  Qi& operator+=(const Qi& o) { re += o.re; im += o.im; return *this; }
  Qi& operator-=(const Qi& o) { re -= o.re; im -= o.im; return *this; }
  Qi& operator*=(const Qi& o) { return *this = *this * o; }
  Qi& operator/=(const Qi& o) { return *this = *this / o; }

  friend Qi operator+(Qi a, const Qi& b) { return a += b; }
  friend Qi operator-(Qi a, const Qi& b) { return a -= b; }
  friend Qi operator-(const Qi& a) { return Qi(mpq_class(-a.re), mpq_class(-a.im)); }
  friend Qi operator*(const Qi& a, const Qi& b) {
    if (sgn(a.im) == 0 && sgn(b.im) == 0) return Qi(mpq_class(a.re * b.re));
    return Qi(mpq_class(a.re * b.re - a.im * b.im), mpq_class(a.re * b.im + a.im * b.re));
  }
  friend Qi operator/(const Qi& a, const Qi& b) {
    if (sgn(b.re) == 0 && sgn(b.im) == 0) throw Error(Errc::InvalidArgument, "division by zero");
    if (sgn(a.im) == 0 && sgn(b.im) == 0) return Qi(mpq_class(a.re / b.re));
    mpq_class n = b.re * b.re + b.im * b.im;
    return Qi(mpq_class((a.re * b.re + a.im * b.im) / n), mpq_class((a.im * b.re - a.re * b.im) / n));
  }
  friend bool operator==(const Qi& a, const Qi& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Qi& a, const Qi& b) { return !(a == b); }
};

inline bool is_zero(const Qi& z, double = 0) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
inline bool is_zero(const Cx& z, double tol) { return std::abs(z) <= tol; }

// Exact for Qi; mixed absolute/relative tolerance for Cx.
inline bool same(const Qi& a, const Qi& b, double = 0) { return a == b; }
inline bool same(const Cx& a, const Cx& b, double tol) {
  double s = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * s;
}

inline Cx to_cx(const Cx& z) { return z; }
inline Cx to_cx(const Qi& z) { return {z.re.get_d(), z.im.get_d()}; }

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Qi> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
};

template <>
struct scalar_traits<Cx> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

inline std::string to_string(const Qi& z) {
  std::string s = z.re.get_str();
  if (sgn(z.im) != 0) {
    if (sgn(z.im) > 0) s += "+";
    s += z.im.get_str() + " i";
  }
  return s;
}

// Accepts "p/q", "p/q+r/s i", "r/s i" (whitespace insensitive).
inline Qi parse_qi(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(Errc::SyntaxError, "empty rational");
  auto rat = [&](const std::string& p) {
    if (p.empty() || p == "+") return mpq_class(1);
    if (p == "-") return mpq_class(-1);
    mpq_class q;
    std::string u = p[0] == '+' ? p.substr(1) : p;
    if (q.set_str(u, 10) != 0 || q.get_den() == 0) throw Error(Errc::SyntaxError, "bad rational '" + p + "'");
    q.canonicalize();
    return q;
  };
  if (t.back() != 'i') return Qi(rat(t));
  t.pop_back();
  size_t split = std::string::npos;
  for (size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/') { split = k; break; }
  if (split == std::string::npos) return Qi(mpq_class(0), rat(t));
  return Qi(rat(t.substr(0, split)), rat(t.substr(split)));
}

}  // namespace tanglev
