#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diagram.hpp"

namespace tanglev {

enum class MoveKind { R2, R3, FramedR1, SlideCupCap };

inline const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::R2: return "R2";
    case MoveKind::R3: return "R3";
    case MoveKind::FramedR1: return "FramedR1";
    case MoveKind::SlideCupCap: return "SlideCupCap";
  }
  return "?";
}

// insert: new slices go between slice level-1 and slice level (level in [0, slices]).
// remove / rewrite: the pattern starts at slice `level`.
struct Site {
  MoveKind kind;
  bool insert;
  size_t level;
  size_t pos;
  int variant;
};

inline std::string describe(const Site& s) {
  return std::string(move_name(s.kind)) + (s.insert ? " insert" : " rewrite") + " level=" +
         std::to_string(s.level) + " pos=" + std::to_string(s.pos) + " variant=" + std::to_string(s.variant);
}

namespace detail {

// One active piece at a bottom offset, every other piece an identity.
struct Active {
  Piece piece;
  size_t offset;
};

inline std::optional<Active> active_piece(const Slice& s) {
  std::optional<Active> a;
  size_t off = 0;
  for (Piece p : s) {
    if (!is_identity(p)) {
      if (a) return std::nullopt;
      a = Active{p, off};
    }
    off += piece_bottom(p).size();
  }
  return a;
}

inline Slice single(const Signs& below, Piece p, size_t offset) {
  Slice s;
  size_t nb = piece_bottom(p).size();
  for (size_t i = 0; i < offset; ++i) s.push_back(id_for(below[i]));
  s.push_back(p);
  for (size_t i = offset + nb; i < below.size(); ++i) s.push_back(id_for(below[i]));
  return s;
}

struct Step {
  Piece piece;
  int shift;  // offset relative to the base strand position
};
using Pattern = std::vector<Step>;

inline Pattern curl(bool right, bool positive) {
  Piece x = positive ? Piece::CrossPos : Piece::CrossNeg;
  if (right) return {{Piece::CupR, 1}, {x, 0}, {Piece::CapR, 1}};
  return {{Piece::CupL, 0}, {x, 1}, {Piece::CapL, 0}};
}

inline std::vector<Pattern> framed_r1_patterns() {
  auto cat = [](Pattern a, const Pattern& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return {cat(curl(true, true), curl(false, false)), cat(curl(false, true), curl(true, false)),
          cat(curl(true, true), curl(true, false)), cat(curl(false, true), curl(false, false))};
}

// Zigzags; the first two act on upward strands, the last two on downward strands.
inline std::vector<Pattern> zigzag_patterns() {
  return {{{Piece::CupL, 1}, {Piece::CapR, 0}},
          {{Piece::CupR, 0}, {Piece::CapL, 1}},
          {{Piece::CupL, 0}, {Piece::CapR, 1}},
          {{Piece::CupR, 1}, {Piece::CapL, 0}}};
}

inline int zigzag_sign(int variant) { return variant < 2 ? +1 : -1; }

inline std::vector<Pattern> r2_patterns() {
  return {{{Piece::CrossPos, 0}, {Piece::CrossNeg, 0}}, {{Piece::CrossNeg, 0}, {Piece::CrossPos, 0}}};
}

inline std::vector<Slice> realize(const Signs& below, size_t pos, const Pattern& pat) {
  std::vector<Slice> out;
  Signs cur = below;
  for (const Step& st : pat) {
    Slice s = single(cur, st.piece, pos + st.shift);
    cur = slice_top(s);
    out.push_back(s);
  }
  return out;
}

inline bool matches(const Diagram& d, size_t level, size_t pos, const Pattern& pat) {
  if (level + pat.size() > d.slices.size()) return false;
  for (size_t j = 0; j < pat.size(); ++j) {
    auto a = active_piece(d.slices[level + j]);
    if (!a || a->piece != pat[j].piece || a->offset != pos + pat[j].shift) return false;
  }
  return true;
}

inline int sign_of(Piece p) { return p == Piece::CrossPos ? 1 : -1; }
inline Piece crossing_of(int s) { return s > 0 ? Piece::CrossPos : Piece::CrossNeg; }

inline bool r3_valid(int a, int b, int c) { return (a == b && b == c) || c == -a; }

}  // namespace detail

inline std::vector<Site> find_sites(const Diagram& d, MoveKind kind) {
  using namespace detail;
  std::vector<Site> out;
  size_t n = d.slices.size();
  for (size_t level = 0; level <= n; ++level) {
    Signs s = d.signs_at(level);
    for (size_t p = 0; p < s.size(); ++p) {
      switch (kind) {
        case MoveKind::R2:
          if (p + 1 < s.size() && s[p] > 0 && s[p + 1] > 0)
            for (int v = 0; v < 2; ++v) out.push_back({kind, true, level, p, v});
          break;
        case MoveKind::FramedR1:
          if (s[p] > 0)
            for (int v = 0; v < 4; ++v) out.push_back({kind, true, level, p, v});
          break;
        case MoveKind::SlideCupCap:
          for (int v = 0; v < 4; ++v)
            if (zigzag_sign(v) == s[p]) out.push_back({kind, true, level, p, v});
          break;
        case MoveKind::R3:
          break;
      }
    }
  }
  for (size_t level = 0; level < n; ++level) {
    auto a = active_piece(d.slices[level]);
    if (!a) continue;
    auto try_patterns = [&](const std::vector<Pattern>& pats) {
      for (size_t v = 0; v < pats.size(); ++v) {
        int base = static_cast<int>(a->offset) - pats[v][0].shift;
        if (base < 0) continue;
        if (matches(d, level, base, pats[v])) out.push_back({kind, false, level, size_t(base), int(v)});
      }
    };
    switch (kind) {
      case MoveKind::R2: try_patterns(r2_patterns()); break;
      case MoveKind::FramedR1: try_patterns(framed_r1_patterns()); break;
      case MoveKind::SlideCupCap: try_patterns(zigzag_patterns()); break;
      case MoveKind::R3: {
        if (level + 3 > n || !is_crossing(a->piece)) break;
        auto b = active_piece(d.slices[level + 1]);
        auto c = active_piece(d.slices[level + 2]);
        if (!b || !c || !is_crossing(b->piece) || !is_crossing(c->piece)) break;
        size_t p = a->offset;
        if (!r3_valid(sign_of(a->piece), sign_of(b->piece), sign_of(c->piece))) break;
        if (c->offset == p && b->offset == p + 1) out.push_back({kind, false, level, p, 0});
        if (c->offset == p && p > 0 && b->offset == p - 1) out.push_back({kind, false, level, p - 1, 1});
        break;
      }
    }
  }
  return out;
}

inline Diagram apply_move(const Diagram& d, const Site& site) {
  using namespace detail;
  size_t n = d.slices.size();
  if (site.level > n) throw Error(Errc::PatternNotFound, describe(site));
  std::vector<Slice> slices = d.slices;
  if (site.insert) {
    Signs s = d.signs_at(site.level);
    if (site.pos >= s.size()) throw Error(Errc::PatternNotFound, describe(site));
    Pattern pat;
    switch (site.kind) {
      case MoveKind::R2:
        if (site.pos + 1 >= s.size() || s[site.pos] < 0 || s[site.pos + 1] < 0 || site.variant < 0 || site.variant > 1)
          throw Error(Errc::PatternNotFound, describe(site));
        pat = r2_patterns()[site.variant];
        break;
      case MoveKind::FramedR1:
        if (s[site.pos] < 0 || site.variant < 0 || site.variant > 3) throw Error(Errc::PatternNotFound, describe(site));
        pat = framed_r1_patterns()[site.variant];
        break;
      case MoveKind::SlideCupCap:
        if (site.variant < 0 || site.variant > 3 || zigzag_sign(site.variant) != s[site.pos])
          throw Error(Errc::PatternNotFound, describe(site));
        pat = zigzag_patterns()[site.variant];
        break;
      case MoveKind::R3:
        throw Error(Errc::PatternNotFound, "R3 has no insertion form");
    }
    auto add = realize(s, site.pos, pat);
    slices.insert(slices.begin() + site.level, add.begin(), add.end());
    Diagram out = make_diagram(std::move(slices));
    if (out.slices.empty()) out.bottom = out.top = d.bottom;
    return out;
  }
  auto erase = [&](size_t len) {
    slices.erase(slices.begin() + site.level, slices.begin() + site.level + len);
    if (slices.empty()) return identity_diagram(d.bottom);
    return make_diagram(std::move(slices));
  };
  switch (site.kind) {
    case MoveKind::R2: {
      auto pats = r2_patterns();
      if (site.variant < 0 || site.variant > 1 || !matches(d, site.level, site.pos, pats[site.variant]))
        throw Error(Errc::PatternNotFound, describe(site));
      return erase(2);
    }
    case MoveKind::FramedR1: {
      auto pats = framed_r1_patterns();
      if (site.variant < 0 || site.variant > 3 || !matches(d, site.level, site.pos, pats[site.variant]))
        throw Error(Errc::PatternNotFound, describe(site));
      return erase(6);
    }
    case MoveKind::SlideCupCap: {
      auto pats = zigzag_patterns();
      if (site.variant < 0 || site.variant > 3 || !matches(d, site.level, site.pos, pats[site.variant]))
        throw Error(Errc::PatternNotFound, describe(site));
      return erase(2);
    }
    case MoveKind::R3: {
      if (site.level + 3 > n) throw Error(Errc::PatternNotFound, describe(site));
      auto a = active_piece(d.slices[site.level]);
      auto b = active_piece(d.slices[site.level + 1]);
      auto c = active_piece(d.slices[site.level + 2]);
      if (!a || !b || !c || !is_crossing(a->piece) || !is_crossing(b->piece) || !is_crossing(c->piece))
        throw Error(Errc::PatternNotFound, describe(site));
      size_t p = site.pos;
      size_t outer = site.variant == 0 ? p : p + 1, inner = site.variant == 0 ? p + 1 : p;
      if (a->offset != outer || b->offset != inner || c->offset != outer)
        throw Error(Errc::PatternNotFound, describe(site));
      int sa = sign_of(a->piece), sb = sign_of(b->piece), sc = sign_of(c->piece);
      if (!r3_valid(sa, sb, sc)) throw Error(Errc::PatternNotFound, describe(site));
      Signs s = d.signs_at(site.level);
      Pattern pat = {{crossing_of(sc), int(inner) - int(p)},
                     {crossing_of(sb), int(outer) - int(p)},
                     {crossing_of(sa), int(inner) - int(p)}};
      auto rep = realize(s, p, pat);
      for (size_t j = 0; j < 3; ++j) slices[site.level + j] = rep[j];
      return make_diagram(std::move(slices));
    }
  }
  throw Error(Errc::PatternNotFound, describe(site));
}

}  // namespace tanglev
