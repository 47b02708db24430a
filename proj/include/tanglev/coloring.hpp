#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "diagram.hpp"
#include "factgroup.hpp"

namespace tanglev {

template <class S>
struct Entry {
  int sign;
  Mat2<S> color;  // raw edge colour
};

template <class S>
using Boundary = std::vector<Entry<S>>;

// epsilon-twisted colour: x for upward edges, i(x) for downward ones.
template <class S>
Mat2<S> twisted(const Entry<S>& e, double tol = kDefaultTol) {
  return e.sign > 0 ? e.color : star_inv(e.color, tol);
}

// g_i = (x1)+^e1 ... (xi)+^ei (xi)-^-ei ... (x1)-^-e1, i = 0..n.
template <class S>
std::vector<Mat2<S>> holonomies(const Boundary<S>& b, double tol = kDefaultTol) {
  std::vector<Mat2<S>> out{Mat2<S>::identity()};
  Mat2<S> left = Mat2<S>::identity(), right = Mat2<S>::identity();
  for (const auto& e : b) {
    auto f = factorize(e.color, tol);
    left = left * (e.sign > 0 ? f.plus() : f.plus_inv());
    right = (e.sign > 0 ? f.minus_inv() : f.minus()) * right;
    out.push_back(left * right);
  }
  return out;
}

template <class S>
Mat2<S> holonomy(const Boundary<S>& b, size_t i, double tol = kDefaultTol) {
  if (i > b.size()) throw Error(Errc::IndexOutOfRange, "holonomy index");
  return holonomies(b, tol)[i];
}

// Inverse of the holonomy map: colours from (sign, g_i) pairs.
template <class S>
Boundary<S> functor_f_object(const std::vector<std::pair<int, Mat2<S>>>& sh, double tol = kDefaultTol) {
  Boundary<S> out;
  Mat2<S> prev = Mat2<S>::identity();
  for (const auto& [sign, g] : sh) {
    Mat2<S> t = star_mul(star_inv(prev, tol), g, tol);
    out.push_back({sign, sign > 0 ? t : star_inv(t, tol)});
    prev = g;
  }
  return out;
}

template <class S>
struct GColoring {
  Diagram diagram;
  std::vector<Boundary<S>> levels;  // levels[k] sits below slice k
  size_t seeds_used = 0;
  std::vector<Mat2<S>> seed_log;  // seeds actually consumed, in order

  const Boundary<S>& bottom() const { return levels.front(); }
  const Boundary<S>& top() const { return levels.back(); }
  const Mat2<S>& color(const EdgeId& e) const { return levels[e.level][e.pos].color; }

  std::map<EdgeId, Mat2<S>> edge_map() const {
    std::map<EdgeId, Mat2<S>> m;
    auto ids = edge_ids(diagram);
    for (size_t k = 0; k < levels.size(); ++k)
      for (size_t p = 0; p < levels[k].size(); ++p) m.emplace(ids[k][p], levels[k][p].color);
    return m;
  }
};

template <class S>
bool same(const Boundary<S>& a, const Boundary<S>& b, double tol = kDefaultTol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].sign != b[i].sign || !same(a[i].color, b[i].color, tol)) return false;
  return true;
}

namespace detail {

// Meridians of Wirtinger arcs with union-find; crossings add conjugation relations.
template <class S>
class ArcSystem {
 public:
  explicit ArcSystem(double tol) : tol_(tol) {}

  size_t fresh() {
    parent_.push_back(parent_.size());
    value_.emplace_back();
    return parent_.size() - 1;
  }
  size_t find(size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  bool known(size_t a) { return value_[find(a)].has_value(); }
  const Mat2<S>& value(size_t a) { return *value_[find(a)]; }

  // Returns true when something changed.
  bool unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (value_[a] && value_[b] && !same(*value_[a], *value_[b], tol_))
      throw Error(Errc::CapMismatch, "meridian conflict between arcs");
    if (!value_[a]) value_[a] = value_[b];
    parent_[b] = a;
    return true;
  }
  bool assign(size_t a, const Mat2<S>& m) {
    a = find(a);
    if (value_[a]) {
      if (!same(*value_[a], m, tol_)) throw Error(Errc::CapMismatch, "meridian conflict");
      return false;
    }
    value_[a] = m;
    return true;
  }

  struct Relation {
    size_t over, under, out;
    bool positive;  // positive: out = over^-1 under over; negative: out = over under over^-1
  };
  void relate(size_t over, size_t under, size_t out, bool positive) { rel_.push_back({over, under, out, positive}); }

  void solve() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rel_) {
        size_t c = find(r.over), u = find(r.under), n = find(r.out);
        if (n == c && u != c) { changed |= unite(u, c); continue; }
        if (u == c && n != c) { changed |= unite(n, c); continue; }
        if (!known(c)) continue;
        const Mat2<S> cm = value(c);
        Mat2<S> ci = inverse(cm, tol_);
        if (known(u)) {
          Mat2<S> m = r.positive ? ci * value(u) * cm : cm * value(u) * ci;
          changed |= assign(n, m);
        } else if (known(n)) {
          Mat2<S> m = r.positive ? cm * value(n) * ci : ci * value(n) * cm;
          changed |= assign(u, m);
        }
      }
    }
  }

 private:
  double tol_;
  std::vector<size_t> parent_;
  std::vector<std::optional<Mat2<S>>> value_;
  std::vector<Relation> rel_;
};

}  // namespace detail

// An unforced cup: where it sits and the star holonomy G of the slice output to its left.
template <class S>
struct CupSite {
  size_t slice, pos;
  int sign;  // sign of the left leg
  Mat2<S> G;
};

// Supplies the raw colour of an unforced cup.
template <class S>
using SeedFn = std::function<Mat2<S>(const CupSite<S>&)>;

// Raw colour of a cup whose arc has meridian m, given the holonomy G to its left.
template <class S>
Mat2<S> cup_color(const Mat2<S>& G, int sign, const Mat2<S>& m, double tol = kDefaultTol) {
  Mat2<S> g1 = G * (sign > 0 ? m : inverse(m, tol));
  Mat2<S> t = star_mul(star_inv(G, tol), g1, tol);
  return sign > 0 ? t : star_inv(t, tol);
}

// Seeds every unforced cup with meridian m (the abelian colouring when m is a bottom meridian).
template <class S>
SeedFn<S> meridian_seed(const Mat2<S>& m, double tol = kDefaultTol) {
  return [m, tol](const CupSite<S>& c) { return cup_color(c.G, c.sign, m, tol); };
}

// Colours every edge from the bottom boundary; unforced cups ask `seed`.
template <class S>
GColoring<S> propagate(const Diagram& d, const Boundary<S>& bottom, const SeedFn<S>& seed, double tol = kDefaultTol) {
  if (bottom.size() != d.bottom.size()) throw Error(Errc::ArityMismatch, "bottom boundary size");
  for (size_t i = 0; i < bottom.size(); ++i)
    if (bottom[i].sign != d.bottom[i]) throw Error(Errc::OrientationMismatch, "bottom boundary signs");

  detail::ArcSystem<S> arcs(tol);
  std::vector<std::vector<size_t>> arc_at(d.levels());
  {
    auto g = holonomies(bottom, tol);
    for (size_t i = 0; i < bottom.size(); ++i) {
      size_t a = arcs.fresh();
      Mat2<S> mu = inverse(g[i], tol) * g[i + 1];
      arcs.assign(a, bottom[i].sign > 0 ? mu : inverse(mu, tol));
      arc_at[0].push_back(a);
    }
  }
  for (size_t k = 0; k < d.slices.size(); ++k) {
    size_t b = 0;
    auto& in = arc_at[k];
    auto& out = arc_at[k + 1];
    for (Piece p : d.slices[k]) {
      switch (p) {
        case Piece::IdUp:
        case Piece::IdDown: out.push_back(in[b]); b += 1; break;
        case Piece::CrossPos: {
          size_t n = arcs.fresh();
          arcs.relate(in[b + 1], in[b], n, true);
          out.push_back(in[b + 1]);
          out.push_back(n);
          b += 2;
          break;
        }
        case Piece::CrossNeg: {
          size_t n = arcs.fresh();
          arcs.relate(in[b], in[b + 1], n, false);
          out.push_back(n);
          out.push_back(in[b]);
          b += 2;
          break;
        }
        case Piece::CupL:
        case Piece::CupR: {
          size_t c = arcs.fresh();
          out.push_back(c);
          out.push_back(c);
          break;
        }
        case Piece::CapL:
        case Piece::CapR: arcs.unite(in[b], in[b + 1]); b += 2; break;
      }
    }
  }
  arcs.solve();

  GColoring<S> col;
  col.diagram = d;
  col.levels.push_back(bottom);
  for (size_t k = 0; k < d.slices.size(); ++k) {
    const auto& in = col.levels[k];
    Boundary<S> out;
    Mat2<S> G = Mat2<S>::identity();
    size_t b = 0;
    auto push = [&](const Entry<S>& e) {
      G = star_mul(G, twisted(e, tol), tol);
      out.push_back(e);
    };
    for (Piece p : d.slices[k]) {
      switch (p) {
        case Piece::IdUp:
        case Piece::IdDown: push(in[b]); b += 1; break;
        case Piece::CrossPos: {
          auto [u, v] = b_map(in[b].color, in[b + 1].color, tol);
          push({+1, u});
          push({+1, v});
          b += 2;
          break;
        }
        case Piece::CrossNeg: {
          auto [u, v] = b_inv(in[b].color, in[b + 1].color, tol);
          push({+1, u});
          push({+1, v});
          b += 2;
          break;
        }
        case Piece::CupL:
        case Piece::CupR: {
          int s1 = p == Piece::CupR ? +1 : -1;
          size_t arc = arc_at[k + 1][out.size()];
          if (!arcs.known(arc)) {
            Entry<S> e{s1, seed(CupSite<S>{k, out.size(), s1, G})};
            col.seed_log.push_back(e.color);
            Mat2<S> mu = inverse(G, tol) * star_mul(G, twisted(e, tol), tol);
            arcs.assign(arc, s1 > 0 ? mu : inverse(mu, tol));
            arcs.solve();
          }
          Mat2<S> x = cup_color(G, s1, arcs.value(arc), tol);
          push({s1, x});
          push({-s1, x});
          break;
        }
        case Piece::CapL:
        case Piece::CapR:
          if (!same(in[b].color, in[b + 1].color, tol))
            throw Error(Errc::CapMismatch, "cap in slice " + std::to_string(k) + " joins different colours");
          b += 2;
          break;
      }
    }
    col.levels.push_back(std::move(out));
  }
  col.seeds_used = col.seed_log.size();
  return col;
}

// Sequential form: unforced cups consume `seeds` in slice order.
template <class S>
GColoring<S> propagate(const Diagram& d, const Boundary<S>& bottom, const std::vector<Mat2<S>>& seeds = {},
                       double tol = kDefaultTol) {
  size_t next = 0;
  SeedFn<S> fn = [&](const CupSite<S>& c) {
    if (next >= seeds.size())
      throw Error(Errc::MissingSeed, "cup in slice " + std::to_string(c.slice) + " needs a seed colour");
    return seeds[next++];
  };
  return propagate<S>(d, bottom, fn, tol);
}

template <class S>
GColoring<S> solve_closed(const Diagram& d, const std::vector<Mat2<S>>& seeds, double tol = kDefaultTol) {
  if (!d.closed()) throw Error(Errc::ArityMismatch, "solve_closed needs a closed diagram");
  try {
    return propagate<S>(d, {}, seeds, tol);
  } catch (const Error& e) {
    if (e.code() == Errc::CapMismatch) throw Error(Errc::Inconsistent, e.what());
    throw;
  }
}

enum class Side { Bottom, Top };

template <class S>
const Boundary<S>& boundary_object(const GColoring<S>& c, Side side) {
  return side == Side::Bottom ? c.bottom() : c.top();
}

template <class S>
Boundary<Cx> to_cx(const Boundary<S>& b) {
  Boundary<Cx> out;
  for (const auto& e : b) out.push_back({e.sign, to_cx(e.color)});
  return out;
}

template <class S>
GColoring<Cx> to_cx(const GColoring<S>& c) {
  GColoring<Cx> out;
  out.diagram = c.diagram;
  out.seeds_used = c.seeds_used;
  for (const auto& l : c.levels) out.levels.push_back(to_cx(l));
  return out;
}

}  // namespace tanglev
