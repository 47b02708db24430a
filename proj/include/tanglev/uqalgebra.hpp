#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "factgroup.hpp"

namespace tanglev {

using CMat = Eigen::MatrixXcd;

struct RootData {
  int ell = 3;
  Cx eps{1.0, 0.0};

  static RootData make(int ell) {
    if (ell < 3 || ell % 2 == 0) throw Error(Errc::InvalidArgument, "ell must be odd and at least 3");
    return {ell, std::polar(1.0, 2.0 * std::numbers::pi / ell)};
  }
  // eps^k for any integer k
  Cx pow(long k) const {
    long m = ((k % ell) + ell) % ell;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / ell);
  }
};

// Values of K^l, E^l, L^l and the lower Borel coordinate b; F^l acts as -b/a.
struct CentralCharacter {
  Cx alpha, beta, a, b;

  Cx f_power() const { return -b / a; }

  template <class S>
  static CentralCharacter of(const Mat2<S>& g, double tol = kDefaultTol) {
    auto f = factorize(g, tol);
    return {to_cx(f.alpha), to_cx(f.beta), to_cx(f.a), to_cx(f.b)};
  }
  Mat2<Cx> group_element() const { return Factorization<Cx>{alpha, beta, a, b}.assemble(); }
};

struct Branch {
  int r = 0;  // shift of the K/L eigenvalue ratio
  int s = 0;  // index of the c-root
  friend bool operator==(const Branch&, const Branch&) = default;
};

// l-th root with argument in [0, 2pi/l).
inline Cx principal_root(Cx z, int ell) {
  double th = std::arg(z);
  if (th < 0) th += 2.0 * std::numbers::pi;
  return std::polar(std::pow(std::abs(z), 1.0 / ell), th / ell);
}

namespace detail {

inline Cx kappa_of(const CentralCharacter& x, const RootData& rd) { return principal_root(x.alpha, rd.ell); }

// The K/L ratio is tied to alpha/a, so that it is determined by the determinant of the colour.
inline Cx lambda_of(const CentralCharacter& x, const RootData& rd, int r) {
  return kappa_of(x, rd) / (principal_root(x.alpha / x.a, rd.ell) * rd.pow(2L * r));
}

inline bool cx_less(Cx p, Cx q) {
  long pr = std::llround(p.real() * 1e9), qr = std::llround(q.real() * 1e9);
  if (pr != qr) return pr < qr;
  return p.imag() < q.imag();
}

// Coefficients, lowest degree first, of prod_n (C - kappa eps^(2n-1) - lambda^-1 eps^(1-2n)) - beta F^l.
inline std::vector<Cx> c_polynomial(const CentralCharacter& x, const RootData& rd, int r) {
  Cx kap = kappa_of(x, rd), lam = lambda_of(x, rd, r);
  std::vector<Cx> p{Cx(1.0)};
  for (int n = 0; n < rd.ell; ++n) {
    Cx t = kap * rd.pow(2L * n - 1) + rd.pow(1L - 2 * n) / lam;
    std::vector<Cx> q(p.size() + 1, Cx(0.0));
    for (size_t k = 0; k < p.size(); ++k) {
      q[k + 1] += p[k];
      q[k] -= t * p[k];
    }
    p = std::move(q);
  }
  p[0] -= x.beta * x.f_power();
  return p;
}

inline Cx poly_eval(const std::vector<Cx>& p, Cx z) {
  Cx v(0.0);
  for (size_t k = p.size(); k-- > 0;) v = v * z + p[k];
  return v;
}

inline std::vector<Cx> monic_roots(const std::vector<Cx>& p) {
  size_t n = p.size() - 1;
  CMat comp = CMat::Zero(n, n);
  for (size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (size_t i = 0; i < n; ++i) comp(i, n - 1) = -p[i] / p[n];
  Eigen::ComplexEigenSolver<CMat> es(comp, false);
  std::vector<Cx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<Cx> dp(n);
  for (size_t k = 1; k <= n; ++k) dp[k - 1] = p[k] * static_cast<double>(k);
  for (auto& z : roots)
    for (int it = 0; it < 3; ++it) {
      Cx d = poly_eval(dp, z);
      if (std::abs(d) < 1e-300) break;
      z -= poly_eval(p, z) / d;
    }
  return roots;
}

inline bool distinct(const std::vector<Cx>& v, double tol) {
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (std::abs(v[i] - v[j]) <= tol * std::max({1.0, std::abs(v[i]), std::abs(v[j])})) return false;
  return true;
}

}  // namespace detail

// Roots of the central relation for ratio branch r, in the fixed (Re, Im) order.
inline std::vector<Cx> c_roots(const CentralCharacter& x, const RootData& rd, int r) {
  auto roots = detail::monic_roots(detail::c_polynomial(x, rd, r));
  std::sort(roots.begin(), roots.end(), detail::cx_less);
  return roots;
}

inline bool is_generic(const CentralCharacter& x, const RootData& rd, double tol = 1e-8) {
  double scale = std::max({1.0, std::abs(x.alpha), std::abs(x.beta), std::abs(x.a), std::abs(x.b)});
  double eps = 1e-12 * scale;
  if (std::abs(x.alpha) <= eps || std::abs(x.a) <= eps || std::abs(x.beta) <= eps || std::abs(x.b) <= eps)
    return false;
  std::vector<Cx> all;
  for (int r = 0; r < rd.ell; ++r) {
    auto c = c_roots(x, rd, r);
    all.insert(all.end(), c.begin(), c.end());
  }
  return detail::distinct(all, tol);
}

struct CyclicRep {
  RootData rd;
  CentralCharacter chi;
  Branch branch;
  CMat K, L, E, F;
  Cx kappa, lambda, cval;

  int dim() const { return rd.ell; }
  CMat id() const { return CMat::Identity(rd.ell, rd.ell); }
  CMat Kinv() const { return K.inverse(); }
  CMat Linv() const { return L.inverse(); }
};

inline CyclicRep build_irrep(const CentralCharacter& x, Branch branch, const RootData& rd) {
  if (!is_generic(x, rd)) throw Error(Errc::NonGenericCharacter, "character is not generic");
  const int l = rd.ell;
  int r = ((branch.r % l) + l) % l, s = ((branch.s % l) + l) % l;
  auto roots = c_roots(x, rd, r);
  if (!detail::distinct(roots, 1e-8)) throw Error(Errc::BranchDegenerate, "repeated c-roots");

  CyclicRep rep;
  rep.rd = rd;
  rep.chi = x;
  rep.branch = {r, s};
  rep.kappa = detail::kappa_of(x, rd);
  rep.lambda = detail::lambda_of(x, rd, r);
  rep.cval = roots[s];
  rep.K = rep.L = rep.E = rep.F = CMat::Zero(l, l);
  for (int n = 0; n < l; ++n) {
    rep.K(n, n) = rep.kappa * rd.pow(2L * n);
    rep.L(n, n) = rep.lambda * rd.pow(2L * n);
  }
  for (int n = 0; n + 1 < l; ++n) rep.E(n + 1, n) = 1.0;
  rep.E(0, l - 1) = x.beta;
  auto phi = [&](int n) { return rep.cval - rep.kappa * rd.pow(2L * n - 1) - rd.pow(1L - 2 * n) / rep.lambda; };
  for (int n = 1; n < l; ++n) rep.F(n - 1, n) = phi(n);
  rep.F(l - 1, 0) = phi(0) / x.beta;
  return rep;
}

inline CyclicRep build_irrep(const CentralCharacter& x, const RootData& rd) { return build_irrep(x, Branch{}, rd); }

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double off_scalar(const CMat& m) {
  Cx d = m.trace() / static_cast<double>(m.rows());
  return max_abs(m - d * CMat::Identity(m.rows(), m.cols()));
}

enum class Gen { K, L, E, F };
inline constexpr std::array<Gen, 4> kGens{Gen::K, Gen::L, Gen::E, Gen::F};
inline const char* gen_name(Gen g) {
  switch (g) {
    case Gen::K: return "K";
    case Gen::L: return "L";
    case Gen::E: return "E";
    case Gen::F: return "F";
  }
  return "?";
}

// Residuals of KL=LK, KE=e^2EK, KF=e^-2FK, LE=e^2EL, LF=e^-2FL, EF-FE=(e-e^-1)(K-L^-1).
inline std::array<double, 6> relation_residuals(const CMat& K, const CMat& L, const CMat& E, const CMat& F,
                                                const RootData& rd) {
  Cx e2 = rd.pow(2), em2 = rd.pow(-2), d = rd.eps - 1.0 / rd.eps;
  return {max_abs(K * L - L * K),
          max_abs(K * E - e2 * E * K),
          max_abs(K * F - em2 * F * K),
          max_abs(L * E - e2 * E * L),
          max_abs(L * F - em2 * F * L),
          max_abs(E * F - F * E - d * (K - L.inverse()))};
}

inline CMat mat_pow(const CMat& m, int k) {
  CMat r = CMat::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

struct RepReport {
  std::array<double, 6> relations{};
  std::array<double, 4> central{};  // K^l, L^l, E^l, F^l against the character
  double casimir = 0;               // c - cval Id
  double max() const {
    double m = casimir;
    for (double v : relations) m = std::max(m, v);
    for (double v : central) m = std::max(m, v);
    return m;
  }
};

inline RepReport check_irrep(const CyclicRep& rep) {
  RepReport out;
  out.relations = relation_residuals(rep.K, rep.L, rep.E, rep.F, rep.rd);
  int l = rep.rd.ell;
  CMat I = rep.id();
  out.central = {max_abs(mat_pow(rep.K, l) - rep.chi.alpha * I), max_abs(mat_pow(rep.L, l) - rep.chi.a * I),
                 max_abs(mat_pow(rep.E, l) - rep.chi.beta * I), max_abs(mat_pow(rep.F, l) - rep.chi.f_power() * I)};
  CMat c = rep.E * rep.F + rep.K / rep.rd.eps + rep.Linv() * rep.rd.eps;
  out.casimir = max_abs(c - rep.cval * I);
  return out;
}

inline CMat kron(const CMat& a, const CMat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline const CMat& gen_matrix(const CyclicRep& r, Gen g) {
  switch (g) {
    case Gen::K: return r.K;
    case Gen::L: return r.L;
    case Gen::E: return r.E;
    default: return r.F;
  }
}

// Delta(K)=K(x)K, Delta(L)=L(x)L, Delta(E)=E(x)K+1(x)E, Delta(F)=F(x)1+L^-1(x)F.
inline CMat coproduct_matrix(const CyclicRep& ra, const CyclicRep& rb, Gen g) {
  switch (g) {
    case Gen::K: return kron(ra.K, rb.K);
    case Gen::L: return kron(ra.L, rb.L);
    case Gen::E: return kron(ra.E, rb.K) + kron(ra.id(), rb.E);
    default: return kron(ra.F, rb.id()) + kron(ra.Linv(), rb.F);
  }
}

inline Cx counit(Gen g) { return (g == Gen::K || g == Gen::L) ? Cx(1.0) : Cx(0.0); }

// S(K)=K^-1, S(L)=L^-1, S(E)=-EK^-1, S(F)=-LF.
inline CMat antipode_matrix(const CyclicRep& r, Gen g) {
  switch (g) {
    case Gen::K: return r.Kinv();
    case Gen::L: return r.Linv();
    case Gen::E: return -r.E * r.Kinv();
    default: return -r.L * r.F;
  }
}

// ---------------------------------------------------------------------------------------------
// PBW normal form on A_x = U / (central character): basis E^i F^j K^m L^n, 0 <= i,j,m,n < l.

struct AlgebraElement {
  RootData rd;
  CentralCharacter chi;
  std::vector<Cx> coef;

  static size_t size_for(int ell) { return static_cast<size_t>(ell) * ell * ell * ell; }
  size_t index(int i, int j, int m, int n) const {
    const size_t l = rd.ell;
    return ((i * l + j) * l + m) * l + n;
  }
  std::array<int, 4> exponents(size_t idx) const {
    const size_t l = rd.ell;
    return {static_cast<int>(idx / (l * l * l)), static_cast<int>(idx / (l * l) % l), static_cast<int>(idx / l % l),
            static_cast<int>(idx % l)};
  }

  static AlgebraElement zero(const CentralCharacter& x, const RootData& rd) {
    return {rd, x, std::vector<Cx>(size_for(rd.ell), Cx(0.0))};
  }
  static AlgebraElement monomial(const CentralCharacter& x, const RootData& rd, int i, int j, int m, int n,
                                 Cx c = 1.0) {
    auto u = zero(x, rd);
    u.coef[u.index(i, j, m, n)] = c;
    return u;
  }
  static AlgebraElement unit(const CentralCharacter& x, const RootData& rd) { return monomial(x, rd, 0, 0, 0, 0); }
  static AlgebraElement generator(const CentralCharacter& x, const RootData& rd, Gen g) {
    switch (g) {
      case Gen::K: return monomial(x, rd, 0, 0, 1, 0);
      case Gen::L: return monomial(x, rd, 0, 0, 0, 1);
      case Gen::E: return monomial(x, rd, 1, 0, 0, 0);
      default: return monomial(x, rd, 0, 1, 0, 0);
    }
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (size_t k = 0; k < coef.size(); ++k) coef[k] += o.coef[k];
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    for (size_t k = 0; k < a.coef.size(); ++k) a.coef[k] -= b.coef[k];
    return a;
  }
  friend AlgebraElement operator*(Cx s, AlgebraElement a) {
    for (auto& c : a.coef) c *= s;
    return a;
  }
  double norm_inf() const {
    double m = 0;
    for (auto c : coef) m = std::max(m, std::abs(c));
    return m;
  }
};

namespace detail {

// Adds c * E^i F^j K^m L^n with exponents reduced by the central character.
inline void add_reduced(AlgebraElement& out, long i, long j, long m, long n, Cx c) {
  const long l = out.rd.ell;
  const auto& x = out.chi;
  auto wrap = [&](long& e, Cx v) {
    while (e >= l) { e -= l; c *= v; }
    while (e < 0) { e += l; c /= v; }
  };
  wrap(i, x.beta);
  wrap(j, x.f_power());
  wrap(m, x.alpha);
  wrap(n, x.a);
  out.coef[out.index(i, j, m, n)] += c;
}

}  // namespace detail

// g * v in normal form.
inline AlgebraElement left_mul(Gen g, const AlgebraElement& v) {
  auto out = AlgebraElement::zero(v.chi, v.rd);
  const auto& rd = v.rd;
  const Cx d = rd.eps - 1.0 / rd.eps;
  for (size_t idx = 0; idx < v.coef.size(); ++idx) {
    Cx c = v.coef[idx];
    if (c == Cx(0.0)) continue;
    auto [i, j, m, n] = v.exponents(idx);
    switch (g) {
      case Gen::E: detail::add_reduced(out, i + 1, j, m, n, c); break;
      case Gen::K: detail::add_reduced(out, i, j, m + 1, n, c * rd.pow(2L * (i - j))); break;
      case Gen::L: detail::add_reduced(out, i, j, m, n + 1, c * rd.pow(2L * (i - j))); break;
      case Gen::F: {
        // F E^i = E^i F - (e-e^-1) sum_k E^(i-1) (e^(2(i-1-k)) K - e^(-2(i-1-k)) L^-1)
        detail::add_reduced(out, i, j + 1, m, n, c);
        for (int k = 0; k < i; ++k) {
          long p = i - 1 - k;
          // K F^j = e^(-2j) F^j K ; L^-1 F^j = e^(2j) F^j L^-1
          detail::add_reduced(out, i - 1, j, m + 1, n, -d * c * rd.pow(2 * p) * rd.pow(-2L * j));
          detail::add_reduced(out, i - 1, j, m, n - 1, d * c * rd.pow(-2 * p) * rd.pow(2L * j));
        }
        break;
      }
    }
  }
  return out;
}

inline AlgebraElement pbw_multiply(const AlgebraElement& u, const AlgebraElement& v) {
  if (u.rd.ell != v.rd.ell) throw Error(Errc::InvalidArgument, "pbw_multiply: different root data");
  auto out = AlgebraElement::zero(v.chi, v.rd);
  for (size_t idx = 0; idx < u.coef.size(); ++idx) {
    Cx c = u.coef[idx];
    if (c == Cx(0.0)) continue;
    auto [i, j, m, n] = u.exponents(idx);
    AlgebraElement w = v;
    for (int t = 0; t < n; ++t) w = left_mul(Gen::L, w);
    for (int t = 0; t < m; ++t) w = left_mul(Gen::K, w);
    for (int t = 0; t < j; ++t) w = left_mul(Gen::F, w);
    for (int t = 0; t < i; ++t) w = left_mul(Gen::E, w);
    for (size_t k = 0; k < w.coef.size(); ++k) out.coef[k] += c * w.coef[k];
  }
  return out;
}

inline AlgebraElement operator*(const AlgebraElement& u, const AlgebraElement& v) { return pbw_multiply(u, v); }

inline CMat evaluate(const AlgebraElement& u, const CyclicRep& rep) {
  const int l = rep.rd.ell;
  std::vector<CMat> Ep{rep.id()}, Fp{rep.id()}, Kp{rep.id()}, Lp{rep.id()};
  for (int k = 1; k < l; ++k) {
    Ep.push_back(Ep.back() * rep.E);
    Fp.push_back(Fp.back() * rep.F);
    Kp.push_back(Kp.back() * rep.K);
    Lp.push_back(Lp.back() * rep.L);
  }
  CMat out = CMat::Zero(l, l);
  for (size_t idx = 0; idx < u.coef.size(); ++idx) {
    if (u.coef[idx] == Cx(0.0)) continue;
    auto [i, j, m, n] = u.exponents(idx);
    out += u.coef[idx] * Ep[i] * Fp[j] * Kp[m] * Lp[n];
  }
  return out;
}

// S(g) as an element of A_x.
inline AlgebraElement antipode(Gen g, const CentralCharacter& x, const RootData& rd) {
  const int l = rd.ell;
  switch (g) {
    case Gen::K: return AlgebraElement::monomial(x, rd, 0, 0, l - 1, 0, 1.0 / x.alpha);
    case Gen::L: return AlgebraElement::monomial(x, rd, 0, 0, 0, l - 1, 1.0 / x.a);
    case Gen::E: return AlgebraElement::monomial(x, rd, 1, 0, l - 1, 0, -1.0 / x.alpha);
    default: return AlgebraElement::monomial(x, rd, 0, 1, 0, 1, -rd.pow(-2));  // -LF = -e^-2 F L
  }
}

// Delta(g) as a list of simple tensors.
inline std::vector<std::pair<AlgebraElement, AlgebraElement>> coproduct_terms(Gen g, const CentralCharacter& x,
                                                                             const RootData& rd) {
  auto one = AlgebraElement::unit(x, rd);
  auto gen = [&](Gen h) { return AlgebraElement::generator(x, rd, h); };
  switch (g) {
    case Gen::K: return {{gen(Gen::K), gen(Gen::K)}};
    case Gen::L: return {{gen(Gen::L), gen(Gen::L)}};
    case Gen::E: return {{gen(Gen::E), gen(Gen::K)}, {one, gen(Gen::E)}};
    default: return {{gen(Gen::F), one}, {antipode(Gen::L, x, rd), gen(Gen::F)}};
  }
}

// Terms S(c') (x) c'' of Delta(g), with S applied in U before reducing to A_x.
// (S does not preserve the character ideal, so it has no meaning on A_x itself.)
inline std::vector<std::pair<AlgebraElement, AlgebraElement>> antipode_coproduct_terms(Gen g,
                                                                                       const CentralCharacter& x,
                                                                                       const RootData& rd) {
  auto one = AlgebraElement::unit(x, rd);
  auto gen = [&](Gen h) { return AlgebraElement::generator(x, rd, h); };
  auto S = [&](Gen h) { return antipode(h, x, rd); };
  switch (g) {
    case Gen::K: return {{S(Gen::K), gen(Gen::K)}};
    case Gen::L: return {{S(Gen::L), gen(Gen::L)}};
    case Gen::E: return {{S(Gen::E), gen(Gen::K)}, {one, gen(Gen::E)}};
    default: return {{S(Gen::F), one}, {gen(Gen::L), gen(Gen::F)}};
  }
}

// t(u) = sum over the l^2 irreps with this central character of Tr(rho(u)); unit weights.
class TraceForm {
 public:
  TraceForm(const CentralCharacter& x, const RootData& rd) : chi_(x), rd_(rd) {
    if (!is_generic(x, rd)) throw Error(Errc::NonGenericCharacter, "trace form needs a generic character");
    tau_.assign(AlgebraElement::size_for(rd.ell), Cx(0.0));
    auto probe = AlgebraElement::zero(x, rd);
    for (int r = 0; r < rd.ell; ++r)
      for (int s = 0; s < rd.ell; ++s) {
        auto rep = build_irrep(x, {r, s}, rd);
        reps_.push_back(rep);
        std::vector<CMat> Ep{rep.id()}, Fp{rep.id()}, Kp{rep.id()}, Lp{rep.id()};
        for (int k = 1; k < rd.ell; ++k) {
          Ep.push_back(Ep.back() * rep.E);
          Fp.push_back(Fp.back() * rep.F);
          Kp.push_back(Kp.back() * rep.K);
          Lp.push_back(Lp.back() * rep.L);
        }
        for (size_t idx = 0; idx < tau_.size(); ++idx) {
          auto [i, j, m, n] = probe.exponents(idx);
          tau_[idx] += (Ep[i] * Fp[j] * Kp[m] * Lp[n]).trace();
        }
      }
  }

  Cx operator()(const AlgebraElement& u) const {
    Cx t(0.0);
    for (size_t k = 0; k < tau_.size(); ++k) t += tau_[k] * u.coef[k];
    return t;
  }
  Cx pairing(const AlgebraElement& u, const AlgebraElement& v) const { return (*this)(pbw_multiply(u, v)); }

  // G(p, q) = t(e_p e_q) over the PBW basis.
  CMat gram() const {
    const size_t N = tau_.size();
    CMat G(N, N);
    for (size_t p = 0; p < N; ++p) {
      auto ep = basis(p);
      for (size_t q = 0; q < N; ++q) G(p, q) = pairing(ep, basis(q));
    }
    return G;
  }

  // Pairs (e_p, e^p) with t(e_p e^q) = delta_pq.
  std::vector<std::pair<AlgebraElement, AlgebraElement>> copairing() const {
    CMat G = gram();
    Eigen::FullPivLU<CMat> lu(G);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) throw Error(Errc::SingularGram, "pairing is degenerate for this character");
    CMat Gi = lu.inverse();
    std::vector<std::pair<AlgebraElement, AlgebraElement>> out;
    for (size_t p = 0; p < tau_.size(); ++p) {
      auto dual = AlgebraElement::zero(chi_, rd_);
      for (size_t q = 0; q < tau_.size(); ++q) dual.coef[q] = Gi(q, p);
      out.emplace_back(basis(p), dual);
    }
    return out;
  }

  AlgebraElement basis(size_t p) const {
    auto e = AlgebraElement::zero(chi_, rd_);
    e.coef[p] = 1.0;
    return e;
  }
  const std::vector<CyclicRep>& irreps() const { return reps_; }
  const CentralCharacter& character() const { return chi_; }
  const RootData& root_data() const { return rd_; }

 private:
  CentralCharacter chi_;
  RootData rd_;
  std::vector<Cx> tau_;
  std::vector<CyclicRep> reps_;
};

}  // namespace tanglev
