#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace tanglev {

enum class Piece { IdUp, IdDown, CapL, CapR, CupL, CupR, CrossPos, CrossNeg };

using Signs = std::vector<int>;

inline const char* token(Piece p) {
  switch (p) {
    case Piece::IdUp: return "id+";
    case Piece::IdDown: return "id-";
    case Piece::CapL: return "capL";
    case Piece::CapR: return "capR";
    case Piece::CupL: return "cupL";
    case Piece::CupR: return "cupR";
    case Piece::CrossPos: return "x+";
    case Piece::CrossNeg: return "x-";
  }
  return "?";
}

inline std::optional<Piece> piece_from_token(const std::string& t) {
  for (Piece p : {Piece::IdUp, Piece::IdDown, Piece::CapL, Piece::CapR, Piece::CupL, Piece::CupR,
                  Piece::CrossPos, Piece::CrossNeg})
    if (t == token(p)) return p;
  return std::nullopt;
}

// cupL = i^l : 0 -> (-,+), cupR = i^r : 0 -> (+,-),
// capL = e^l : (-,+) -> 0, capR = e^r : (+,-) -> 0.
inline Signs piece_bottom(Piece p) {
  switch (p) {
    case Piece::IdUp: return {+1};
    case Piece::IdDown: return {-1};
    case Piece::CapL: return {-1, +1};
    case Piece::CapR: return {+1, -1};
    case Piece::CupL:
    case Piece::CupR: return {};
    case Piece::CrossPos:
    case Piece::CrossNeg: return {+1, +1};
  }
  return {};
}

inline Signs piece_top(Piece p) {
  switch (p) {
    case Piece::IdUp: return {+1};
    case Piece::IdDown: return {-1};
    case Piece::CapL:
    case Piece::CapR: return {};
    case Piece::CupL: return {-1, +1};
    case Piece::CupR: return {+1, -1};
    case Piece::CrossPos:
    case Piece::CrossNeg: return {+1, +1};
  }
  return {};
}

inline bool is_identity(Piece p) { return p == Piece::IdUp || p == Piece::IdDown; }
inline bool is_crossing(Piece p) { return p == Piece::CrossPos || p == Piece::CrossNeg; }
inline bool is_cup(Piece p) { return p == Piece::CupL || p == Piece::CupR; }
inline bool is_cap(Piece p) { return p == Piece::CapL || p == Piece::CapR; }
inline Piece id_for(int sign) { return sign > 0 ? Piece::IdUp : Piece::IdDown; }

using Slice = std::vector<Piece>;

inline Signs slice_bottom(const Slice& s) {
  Signs out;
  for (Piece p : s) {
    auto b = piece_bottom(p);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

inline Signs slice_top(const Slice& s) {
  Signs out;
  for (Piece p : s) {
    auto t = piece_top(p);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

inline Slice identity_slice(const Signs& signs) {
  Slice s;
  for (int e : signs) s.push_back(id_for(e));
  return s;
}

struct Diagram {
  std::vector<Slice> slices;  // bottom to top
  Signs bottom, top;

  size_t levels() const { return slices.size() + 1; }
  // Boundary signature at level k (k = 0 bottom, k = slices.size() top).
  Signs signs_at(size_t k) const { return k < slices.size() ? slice_bottom(slices[k]) : top; }
  bool closed() const { return bottom.empty() && top.empty(); }
  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.slices == b.slices && a.bottom == b.bottom && a.top == b.top;
  }
};

inline std::string signs_str(const Signs& s) {
  std::string r = "(";
  for (size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::string(s[i] > 0 ? "+" : "-");
  return r + ")";
}

inline void check_chain(const std::vector<Slice>& slices) {
  for (size_t k = 1; k < slices.size(); ++k) {
    Signs below = slice_top(slices[k - 1]);
    Signs above = slice_bottom(slices[k]);
    if (below.size() != above.size())
      throw Error(Errc::ArityMismatch, "slice " + std::to_string(k) + " expects " +
                                           std::to_string(above.size()) + " strands, got " +
                                           std::to_string(below.size()));
    if (below != above)
      throw Error(Errc::OrientationMismatch, "slice " + std::to_string(k) + " expects " +
                                                 signs_str(above) + ", got " + signs_str(below));
  }
}

inline Diagram make_diagram(std::vector<Slice> slices) {
  check_chain(slices);
  Diagram d;
  if (!slices.empty()) {
    d.bottom = slice_bottom(slices.front());
    d.top = slice_top(slices.back());
  }
  d.slices = std::move(slices);
  return d;
}

inline Diagram identity_diagram(const Signs& signs) {
  if (signs.empty()) return {};
  return make_diagram({identity_slice(signs)});
}

inline Diagram parse(const std::string& text) {
  std::vector<Slice> slices;
  Slice cur;
  bool any = false;
  size_t i = 0;
  auto close_slice = [&](size_t at) {
    if (cur.empty()) throw Error(Errc::SyntaxError, "empty slice at offset " + std::to_string(at));
    slices.push_back(cur);
    cur.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == ';') { close_slice(i); ++i; continue; }
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ';' &&
           text[j] != '#')
      ++j;
    std::string tok = text.substr(i, j - i);
    auto p = piece_from_token(tok);
    if (!p) throw Error(Errc::SyntaxError, "unknown piece '" + tok + "' at offset " + std::to_string(i));
    cur.push_back(*p);
    any = true;
    i = j;
  }
  if (!cur.empty()) slices.push_back(cur);
  else if (any) throw Error(Errc::SyntaxError, "trailing ';' at offset " + std::to_string(text.size()));
  return make_diagram(std::move(slices));
}

inline std::string print(const Diagram& d) {
  std::string out;
  for (size_t k = 0; k < d.slices.size(); ++k) {
    if (k) out += " ; ";
    for (size_t j = 0; j < d.slices[k].size(); ++j) out += (j ? " " : "") + std::string(token(d.slices[k][j]));
  }
  return out;
}

inline Diagram braid_word(const std::vector<int>& word, int strands) {
  if (strands < 1) throw Error(Errc::IndexOutOfRange, "need at least one strand");
  if (word.empty()) return identity_diagram(Signs(strands, +1));
  std::vector<Slice> slices;
  for (int g : word) {
    int i = g > 0 ? g : -g;
    if (g == 0 || i > strands - 1)
      throw Error(Errc::IndexOutOfRange, "generator " + std::to_string(g) + " on " + std::to_string(strands) + " strands");
    Slice s;
    for (int k = 1; k < i; ++k) s.push_back(Piece::IdUp);
    s.push_back(g > 0 ? Piece::CrossPos : Piece::CrossNeg);
    for (int k = i + 2; k <= strands; ++k) s.push_back(Piece::IdUp);
    slices.push_back(s);
  }
  return make_diagram(std::move(slices));
}

// Right trace closure of strands open+1..n; the first `open` strands stay open.
inline Diagram close_braid(const Diagram& d, size_t open = 0) {
  if (d.bottom != d.top) throw Error(Errc::ArityMismatch, "closure needs equal boundaries");
  for (int e : d.bottom)
    if (e < 0) throw Error(Errc::ArityMismatch, "closure needs upward strands");
  size_t n = d.bottom.size();
  if (open > n) throw Error(Errc::ArityMismatch, "more open strands than strands");
  size_t m = n - open;
  std::vector<Slice> slices;
  for (size_t j = 1; j <= m; ++j) {
    Slice s(open + j - 1, Piece::IdUp);
    s.push_back(Piece::CupR);
    s.insert(s.end(), j - 1, Piece::IdDown);
    slices.push_back(s);
  }
  for (const Slice& b : d.slices) {
    Slice s = b;
    s.insert(s.end(), m, Piece::IdDown);
    slices.push_back(s);
  }
  for (size_t j = m; j >= 1; --j) {
    Slice s(open + j - 1, Piece::IdUp);
    s.push_back(Piece::CapR);
    s.insert(s.end(), j - 1, Piece::IdDown);
    slices.push_back(s);
  }
  std::vector<Slice> kept;
  for (auto& s : slices)
    if (!s.empty()) kept.push_back(s);
  return make_diagram(std::move(kept));
}

inline Diagram compose(const Diagram& top, const Diagram& bottom) {
  if (bottom.top.size() != top.bottom.size())
    throw Error(Errc::ArityMismatch, "compose: " + std::to_string(bottom.top.size()) + " vs " +
                                         std::to_string(top.bottom.size()));
  if (bottom.top != top.bottom) throw Error(Errc::OrientationMismatch, "compose: signatures differ");
  Diagram d;
  d.slices = bottom.slices;
  d.slices.insert(d.slices.end(), top.slices.begin(), top.slices.end());
  d.bottom = bottom.slices.empty() ? top.bottom : bottom.bottom;
  d.top = top.slices.empty() ? bottom.top : top.top;
  return d;
}

inline Diagram tensor(const Diagram& l, const Diagram& r) {
  size_t h = std::max(l.slices.size(), r.slices.size());
  std::vector<Slice> slices;
  for (size_t k = 0; k < h; ++k) {
    Slice s = k < l.slices.size() ? l.slices[k] : identity_slice(l.top);
    Slice t = k < r.slices.size() ? r.slices[k] : identity_slice(r.top);
    s.insert(s.end(), t.begin(), t.end());
    slices.push_back(s);
  }
  Diagram d;
  std::vector<Slice> kept;
  for (auto& s : slices)
    if (!s.empty()) kept.push_back(s);
  if (kept.empty()) return d;
  d = make_diagram(std::move(kept));
  return d;
}

inline int writhe(const Diagram& d) {
  int w = 0;
  for (const auto& s : d.slices)
    for (Piece p : s) w += p == Piece::CrossPos ? 1 : p == Piece::CrossNeg ? -1 : 0;
  return w;
}

inline size_t crossing_count(const Diagram& d) {
  size_t n = 0;
  for (const auto& s : d.slices)
    for (Piece p : s) n += is_crossing(p);
  return n;
}

// Canonical edge id: the lowest (level, position) reached by following identity pieces downward.
struct EdgeId {
  size_t level, pos;
  friend bool operator==(const EdgeId& a, const EdgeId& b) { return a.level == b.level && a.pos == b.pos; }
  friend bool operator<(const EdgeId& a, const EdgeId& b) {
    return a.level != b.level ? a.level < b.level : a.pos < b.pos;
  }
};

inline std::vector<std::vector<EdgeId>> edge_ids(const Diagram& d) {
  std::vector<std::vector<EdgeId>> ids(d.levels());
  Signs s0 = d.signs_at(0);
  for (size_t p = 0; p < s0.size(); ++p) ids[0].push_back({0, p});
  for (size_t k = 0; k < d.slices.size(); ++k) {
    size_t bpos = 0, tpos = 0;
    for (Piece pc : d.slices[k]) {
      size_t nb = piece_bottom(pc).size(), nt = piece_top(pc).size();
      for (size_t j = 0; j < nt; ++j)
        ids[k + 1].push_back(is_identity(pc) ? ids[k][bpos] : EdgeId{k + 1, tpos + j});
      bpos += nb;
      tpos += nt;
    }
  }
  return ids;
}

}  // namespace tanglev
