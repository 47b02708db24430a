#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "uqalgebra.hpp"

namespace tanglev {

inline constexpr const char* kNormalizationVersion = "det1-phase-v1";

// K(x)1, L(x)1, E(x)1, F(x)1, 1(x)K, 1(x)L, 1(x)E, 1(x)F
enum class Slot { K1, L1, E1, F1, K2, L2, E2, F2 };
inline constexpr int kSlots = 8;
inline const char* slot_name(int s) {
  static const char* names[] = {"K1", "L1", "E1", "F1", "1K", "1L", "1E", "1F"};
  return names[s];
}

// Images of the eight tensor generators under the R-automorphism, as operators on V_P (x) V_Q.
// They realise the central character b(Q, P) = (x_L(Q,P), x_R(Q,P)) slot-wise.
struct RImages {
  CentralCharacter first, second;  // characters of P and Q
  std::array<CMat, kSlots> m;
  const CMat& operator[](Slot s) const { return m[static_cast<int>(s)]; }
};

inline RImages r_images(const CyclicRep& P, const CyclicRep& Q) {
  const int l = P.rd.ell;
  const Cx e = P.rd.eps;
  CMat I = CMat::Identity(l, l);
  CMat N = CMat::Identity(l * l, l * l) - e * kron(P.Kinv() * P.E, Q.F * Q.L);
  Eigen::FullPivLU<CMat> lu(N);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw Error(Errc::SingularN, "1 - e K^-1E (x) FL is singular");
  CMat Ni = lu.inverse();
  RImages im;
  im.first = P.chi;
  im.second = Q.chi;
  auto& m = im.m;
  m[4] = kron(I, Q.K) * Ni;
  m[5] = kron(I, Q.L) * Ni;
  m[2] = kron(P.E, Q.L);
  m[7] = kron(P.Kinv(), Q.F);
  m[0] = kron(P.K, Q.K) * m[4].inverse();
  m[1] = kron(P.L, Q.L) * m[5].inverse();
  m[6] = kron(P.K, Q.E) + kron(P.E, I) - m[2] * m[4];
  m[3] = kron(I, Q.F) + kron(P.F, Q.Linv()) - m[1].inverse() * m[7];
  return im;
}

// Relations inside each slot and commutation between slots.
inline double automorphism_residual(const RImages& im, const RootData& rd) {
  double r = 0;
  for (int s : {0, 4}) {
    auto rel = relation_residuals(im.m[s], im.m[s + 1], im.m[s + 2], im.m[s + 3], rd);
    for (double v : rel) r = std::max(r, v);
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 4; b < 8; ++b) r = std::max(r, max_abs(im.m[a] * im.m[b] - im.m[b] * im.m[a]));
  return r;
}

// Images of Delta(g) against sigma Delta(g) evaluated in (P, Q).
inline double sigma_delta_residual(const RImages& im, const CyclicRep& P, const CyclicRep& Q) {
  const auto& m = im.m;
  CMat I = P.id();
  double r = 0;
  r = std::max(r, max_abs(m[0] * m[4] - kron(P.K, Q.K)));
  r = std::max(r, max_abs(m[1] * m[5] - kron(P.L, Q.L)));
  r = std::max(r, max_abs(m[2] * m[4] + m[6] - (kron(P.K, Q.E) + kron(P.E, I))));
  r = std::max(r, max_abs(m[3] + m[1].inverse() * m[7] - (kron(I, Q.F) + kron(P.F, Q.Linv()))));
  return r;
}

struct PullbackReport {
  double max_deviation = 0;   // relative, over the eight central coordinates
  double max_off_scalar = 0;  // how far the l-th powers are from scalars
  std::array<Cx, kSlots> observed{};
  std::array<Cx, kSlots> expected{};
};

// l-th powers of the images for the pair (x, y), evaluated on V_y (x) V_x, against b(x, y).
template <class S>
PullbackReport z0_pullback_check(const Mat2<S>& x, const Mat2<S>& y, const RootData& rd, double tol = kDefaultTol) {
  auto xc = to_cx(x), yc = to_cx(y);
  auto [u, v] = b_map(xc, yc, tol);
  auto P = build_irrep(CentralCharacter::of(yc, tol), rd);
  auto Q = build_irrep(CentralCharacter::of(xc, tol), rd);
  auto im = r_images(P, Q);
  auto cu = CentralCharacter::of(u, tol), cv = CentralCharacter::of(v, tol);
  PullbackReport rep;
  rep.expected = {cu.alpha, cu.a, cu.beta, cu.f_power(), cv.alpha, cv.a, cv.beta, cv.f_power()};
  for (int s = 0; s < kSlots; ++s) {
    CMat p = mat_pow(im.m[s], rd.ell);
    Cx d = p.trace() / static_cast<double>(p.rows());
    rep.observed[s] = d;
    double scale = std::max(1.0, std::abs(rep.expected[s]));
    rep.max_off_scalar = std::max(rep.max_off_scalar, off_scalar(p) / scale);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(d - rep.expected[s]) / scale);
  }
  return rep;
}

// Principal branches everywhere unless a retry was needed.
struct BraidingBlock {
  CMat M;  // V_x (x) V_y -> V_u (x) V_v, row-major tensor indices
  Mat2<Cx> x, y, u, v;
  Branch bx, by, bu, bv;
  int nullity = 0;
  double residual = 0;
  double smallest_sv = 0, next_sv = 0;
  bool retried = false;
  bool inverted = false;
  std::string normalization = kNormalizationVersion;
};

namespace detail {

inline CMat flip(int l) {
  CMat P = CMat::Zero(l * l, l * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) P(j * l + i, i * l + j) = 1.0;
  return P;
}

inline std::array<CMat, kSlots> plain_slots(const CyclicRep& X, const CyclicRep& Y) {
  CMat I = X.id();
  return {kron(X.K, I), kron(X.L, I), kron(X.E, I), kron(X.F, I),
          kron(I, Y.K), kron(I, Y.L), kron(I, Y.E), kron(I, Y.F)};
}

// det 1, then the l^2-th root of unity that brings the first largest entry closest to the positive axis.
inline void normalize(CMat& B) {
  const int n = static_cast<int>(B.rows());
  Cx det = B.partialPivLu().determinant();
  if (std::abs(det) < 1e-300) throw Error(Errc::SingularM, "braiding block is singular");
  B *= std::exp(-std::log(det) / static_cast<double>(n));
  double mx = B.cwiseAbs().maxCoeff();
  Cx pick = 0.0;
  for (int i = 0; i < n && pick == Cx(0.0); ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(B(i, j)) >= mx * (1 - 1e-9)) {
        pick = B(i, j);
        break;
      }
  double k = std::round(std::arg(pick) * n / (2.0 * std::numbers::pi));
  B *= std::polar(1.0, -2.0 * std::numbers::pi * k / n);
}

struct Nullspace {
  CMat basis;
  int nullity;
  double smallest, next;
};

// Solves B T_w = S_w B for all w.
inline Nullspace intertwiners(const std::array<CMat, kSlots>& T, const std::array<CMat, kSlots>& S) {
  const Eigen::Index n = T[0].rows(), n2 = n * n;
  CMat A(kSlots * n2, n2);
  CMat I = CMat::Identity(n, n);
  for (int w = 0; w < kSlots; ++w) A.middleRows(w * n2, n2) = kron(T[w].transpose(), I) - kron(I, S[w]);
  Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double top = sv(0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-8 * top) ++rank;
  Nullspace ns;
  ns.nullity = static_cast<int>(n2 - rank);
  ns.basis = svd.matrixV().rightCols(ns.nullity);
  ns.smallest = sv(sv.size() - 1) / top;
  ns.next = sv.size() > 1 ? sv(sv.size() - 2) / top : 0.0;
  return ns;
}

}  // namespace detail

inline double intertwining_residual(const CMat& B, const std::array<CMat, kSlots>& T,
                                    const std::array<CMat, kSlots>& S) {
  double r = 0;
  for (int w = 0; w < kSlots; ++w) r = std::max(r, max_abs(B * T[w] - S[w] * B));
  return r / std::max(1.0, max_abs(B));
}

// Twisted intertwiner for the positive crossing coloured (x, y) from below.
inline BraidingBlock solve_braiding_with(const CyclicRep& X, const CyclicRep& Y, const CyclicRep& U,
                                         const CyclicRep& V) {
  const int l = X.rd.ell;
  auto im = r_images(Y, X);
  CMat P = detail::flip(l);
  std::array<CMat, kSlots> T;
  for (int w = 0; w < kSlots; ++w) T[w] = P.transpose() * im.m[w] * P;
  auto S = detail::plain_slots(U, V);
  auto ns = detail::intertwiners(T, S);
  BraidingBlock blk;
  blk.bx = X.branch;
  blk.by = Y.branch;
  blk.bu = U.branch;
  blk.bv = V.branch;
  blk.nullity = ns.nullity;
  blk.smallest_sv = ns.smallest;
  blk.next_sv = ns.next;
  if (ns.nullity == 0) throw Error(Errc::NoIntertwiner, "no twisted intertwiner for this branch choice");
  if (ns.nullity > 1) throw Error(Errc::AmbiguousIntertwiner, "intertwiner space has dimension " +
                                                                  std::to_string(ns.nullity));
  const Eigen::Index n = l * l;
  blk.M = Eigen::Map<const CMat>(ns.basis.data(), n, n);
  detail::normalize(blk.M);
  blk.residual = intertwining_residual(blk.M, T, S);
  return blk;
}

template <class S>
BraidingBlock solve_braiding(const Mat2<S>& x, const Mat2<S>& y, const RootData& rd, double tol = kDefaultTol) {
  auto xc = to_cx(x), yc = to_cx(y);
  auto [u, v] = b_map(xc, yc, tol);
  auto X = build_irrep(CentralCharacter::of(xc, tol), rd);
  auto Y = build_irrep(CentralCharacter::of(yc, tol), rd);
  auto cu = CentralCharacter::of(u, tol), cv = CentralCharacter::of(v, tol);
  BraidingBlock blk;
  try {
    blk = solve_braiding_with(X, Y, build_irrep(cu, rd), build_irrep(cv, rd));
  } catch (const Error& e) {
    if (e.code() != Errc::NoIntertwiner) throw;
    bool found = false;
    for (int k = 1; k < rd.ell * rd.ell * rd.ell * rd.ell && !found; ++k) {
      int l = rd.ell;
      Branch bu{k % l, k / l % l}, bv{k / (l * l) % l, k / (l * l * l)};
      try {
        blk = solve_braiding_with(X, Y, build_irrep(cu, bu, rd), build_irrep(cv, bv, rd));
        blk.retried = true;
        found = true;
      } catch (const Error& inner) {
        if (inner.code() != Errc::NoIntertwiner) throw;
      }
    }
    if (!found) throw;
  }
  blk.x = xc;
  blk.y = yc;
  blk.u = u;
  blk.v = v;
  return blk;
}

inline BraidingBlock braiding_inverse(const BraidingBlock& blk) {
  Eigen::FullPivLU<CMat> lu(blk.M);
  if (!lu.isInvertible()) throw Error(Errc::SingularM, "braiding block is singular");
  BraidingBlock inv = blk;
  inv.M = lu.inverse();
  std::swap(inv.x, inv.u);
  std::swap(inv.y, inv.v);
  std::swap(inv.bx, inv.bu);
  std::swap(inv.by, inv.bv);
  inv.inverted = !blk.inverted;
  return inv;
}

// Negative crossing coloured (c, d) from below: inverse of the positive block on b^-1(c, d).
template <class S>
BraidingBlock solve_negative(const Mat2<S>& c, const Mat2<S>& d, const RootData& rd, double tol = kDefaultTol) {
  auto [p, q] = b_inv(to_cx(c), to_cx(d), tol);
  return braiding_inverse(solve_braiding(p, q, rd, tol));
}

// Ribbon twist on V_x. Balanced = (KL)^((1-l)/2); all three choices implement S^2.
enum class TwistChoice { Balanced, K, L };

inline const char* twist_name(TwistChoice t) {
  switch (t) {
    case TwistChoice::Balanced: return "balanced";
    case TwistChoice::K: return "K";
    case TwistChoice::L: return "L";
  }
  return "?";
}

inline TwistChoice parse_twist(const std::string& s) {
  if (s == "balanced") return TwistChoice::Balanced;
  if (s == "K") return TwistChoice::K;
  if (s == "L") return TwistChoice::L;
  throw Error(Errc::InvalidArgument, "unknown twist '" + s + "' (expected balanced, K or L)");
}

inline CMat twist_mu(const CyclicRep& rep, TwistChoice choice = TwistChoice::Balanced) {
  switch (choice) {
    case TwistChoice::K: return rep.K;
    case TwistChoice::L: return rep.L;
    default: return mat_pow((rep.K * rep.L).inverse(), (rep.rd.ell - 1) / 2);
  }
}

// Triple composites B12 B23 B12 and B23 B12 B23 on V_x (x) V_y (x) V_z.
struct YBReport {
  double defect = 0;
  Cx scalar{1.0, 0.0};
};

template <class S>
YBReport yb_check(const Mat2<S>& x, const Mat2<S>& y, const Mat2<S>& z, const RootData& rd,
                  double tol = kDefaultTol) {
  const int l = rd.ell;
  CMat I = CMat::Identity(l, l);
  auto c1 = solve_braiding(x, y, rd, tol);
  auto c2 = solve_braiding(c1.v, to_cx(z), rd, tol);
  auto c3 = solve_braiding(c1.u, c2.u, rd, tol);
  CMat lhs = kron(c3.M, I) * kron(I, c2.M) * kron(c1.M, I);
  auto d1 = solve_braiding(to_cx(y), to_cx(z), rd, tol);
  auto d2 = solve_braiding(to_cx(x), d1.u, rd, tol);
  auto d3 = solve_braiding(d2.v, d1.v, rd, tol);
  CMat rhs = kron(I, d3.M) * kron(d2.M, I) * kron(I, d1.M);
  YBReport rep;
  Cx num = (rhs.adjoint() * lhs).trace(), den = (rhs.adjoint() * rhs).trace();
  rep.scalar = num / den;
  rep.defect = (lhs - rep.scalar * rhs).norm() / lhs.norm();
  return rep;
}

// Solved blocks keyed by root data, rounded characters, branches and normalization version.
class BlockCache {
 public:
  explicit BlockCache(std::optional<std::filesystem::path> dir = std::nullopt) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
  }

  static std::string key(const RootData& rd, const Mat2<Cx>& x, const Mat2<Cx>& y, bool negative) {
    auto cx = CentralCharacter::of(x), cy = CentralCharacter::of(y);
    std::string k = "l" + std::to_string(rd.ell) + (negative ? "-neg" : "-pos");
    char buf[64];
    for (Cx c : {cx.alpha, cx.beta, cx.a, cx.b, cy.alpha, cy.beta, cy.a, cy.b}) {
      std::snprintf(buf, sizeof buf, "_%.12g_%.12g", c.real() == 0 ? 0.0 : c.real(), c.imag() == 0 ? 0.0 : c.imag());
      k += buf;
    }
    return k + "_b00_" + kNormalizationVersion;
  }

  // Block for a crossing coloured (x, y) from below.
  BraidingBlock get(const RootData& rd, const Mat2<Cx>& x, const Mat2<Cx>& y, bool negative,
                    double tol = kDefaultTol) {
    std::string k = key(rd, x, y, negative);
    {
      std::lock_guard<std::mutex> g(mu_);
      if (auto it = mem_.find(k); it != mem_.end()) {
        ++hits_;
        return it->second;
      }
    }
    std::optional<BraidingBlock> blk;
    if (dir_) blk = load(file_for(k), k);
    if (!blk) {
      blk = negative ? solve_negative(x, y, rd, tol) : solve_braiding(x, y, rd, tol);
      if (dir_) store(file_for(k), k, *blk);
    }
    std::lock_guard<std::mutex> g(mu_);
    ++misses_;
    mem_[k] = *blk;
    return *blk;
  }

  size_t hits() const { return hits_; }
  size_t misses() const { return misses_; }

  static nlohmann::json to_json(const BraidingBlock& b) {
    using nlohmann::json;
    auto mat2 = [](const Mat2<Cx>& m) {
      json a = json::array();
      for (Cx c : {m.m11, m.m12, m.m21, m.m22}) a.push_back({c.real(), c.imag()});
      return a;
    };
    json M = json::array();
    for (Eigen::Index i = 0; i < b.M.rows(); ++i)
      for (Eigen::Index j = 0; j < b.M.cols(); ++j) M.push_back({b.M(i, j).real(), b.M(i, j).imag()});
    return {{"dim", b.M.rows()}, {"M", M},           {"x", mat2(b.x)},
            {"y", mat2(b.y)},    {"u", mat2(b.u)},   {"v", mat2(b.v)},
            {"branches", {b.bx.r, b.bx.s, b.by.r, b.by.s, b.bu.r, b.bu.s, b.bv.r, b.bv.s}},
            {"nullity", b.nullity}, {"residual", b.residual}, {"smallest_sv", b.smallest_sv},
            {"next_sv", b.next_sv}, {"retried", b.retried}, {"inverted", b.inverted},
            {"normalization", b.normalization}};
  }

  static BraidingBlock from_json(const nlohmann::json& j) {
    auto mat2 = [](const nlohmann::json& a) {
      auto c = [&](int k) { return Cx(a[k][0].get<double>(), a[k][1].get<double>()); };
      return Mat2<Cx>{c(0), c(1), c(2), c(3)};
    };
    BraidingBlock b;
    Eigen::Index n = j.at("dim").get<Eigen::Index>();
    b.M.resize(n, n);
    const auto& M = j.at("M");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k)
        b.M(i, k) = Cx(M[i * n + k][0].get<double>(), M[i * n + k][1].get<double>());
    b.x = mat2(j.at("x"));
    b.y = mat2(j.at("y"));
    b.u = mat2(j.at("u"));
    b.v = mat2(j.at("v"));
    auto br = j.at("branches");
    b.bx = {br[0], br[1]};
    b.by = {br[2], br[3]};
    b.bu = {br[4], br[5]};
    b.bv = {br[6], br[7]};
    b.nullity = j.at("nullity");
    b.residual = j.at("residual");
    b.smallest_sv = j.at("smallest_sv");
    b.next_sv = j.at("next_sv");
    b.retried = j.at("retried");
    b.inverted = j.at("inverted");
    b.normalization = j.at("normalization");
    return b;
  }

 private:
  // FNV-1a of the key; the key itself is stored in the file and checked on load.
  std::filesystem::path file_for(const std::string& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : k) h = (h ^ c) * 1099511628211ull;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx.json", static_cast<unsigned long long>(h));
    return *dir_ / buf;
  }

  static std::optional<BraidingBlock> load(const std::filesystem::path& p, const std::string& k) {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    try {
      auto j = nlohmann::json::parse(in);
      if (j.at("key") != k || j.at("normalization") != kNormalizationVersion) return std::nullopt;
      return from_json(j);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  static void store(const std::filesystem::path& p, const std::string& k, const BraidingBlock& b) {
    auto tmp = p;
    tmp += ".tmp";
    {
      auto j = to_json(b);
      j["key"] = k;
      std::ofstream out(tmp);
      out << j.dump();
    }
    std::filesystem::rename(tmp, p);
  }

  std::optional<std::filesystem::path> dir_;
  std::mutex mu_;
  std::map<std::string, BraidingBlock> mem_;
  size_t hits_ = 0, misses_ = 0;
};

}  // namespace tanglev
