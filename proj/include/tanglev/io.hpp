#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "diagram.hpp"

namespace tanglev {

inline std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// .braid: "strands N", "word g1 g2 ...", optional "open K"; '#' comments.
struct BraidSpec {
  int strands = 0;
  std::vector<int> word;
  size_t open = 0;
  Diagram diagram() const { return close_braid(braid_word(word, strands), open); }
};

inline BraidSpec parse_braid(const std::string& text) {
  BraidSpec b;
  bool have_strands = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto bad = [&] { return Error(Errc::SyntaxError, "braid line " + std::to_string(lineno) + ": " + line); };
    if (key == "strands") {
      if (!(ls >> b.strands)) throw bad();
      have_strands = true;
    } else if (key == "word") {
      int g;
      while (ls >> g) b.word.push_back(g);
      if (!ls.eof()) throw bad();
    } else if (key == "open") {
      if (!(ls >> b.open)) throw bad();
    } else {
      throw bad();
    }
  }
  if (!have_strands) throw Error(Errc::SyntaxError, "braid file needs a 'strands' line");
  return b;
}

// Diagram JSON mirrors the DSL: {"slices": [["id+", "x+"], ...]}.
inline nlohmann::json diagram_to_json(const Diagram& d) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& sl : d.slices) {
    nlohmann::json row = nlohmann::json::array();
    for (Piece p : sl) row.push_back(token(p));
    s.push_back(row);
  }
  return {{"slices", s}, {"dsl", print(d)}};
}

inline Diagram diagram_from_json(const nlohmann::json& j) {
  std::vector<Slice> slices;
  for (const auto& row : j.at("slices")) {
    Slice sl;
    for (const auto& t : row) {
      auto p = piece_from_token(t.get<std::string>());
      if (!p) throw Error(Errc::SyntaxError, "unknown piece '" + t.get<std::string>() + "'");
      sl.push_back(*p);
    }
    slices.push_back(sl);
  }
  return make_diagram(std::move(slices));
}

// Loads .tgl (DSL), .braid, or .json (diagram JSON).
inline Diagram load_diagram(const std::string& path, std::optional<size_t> open = std::nullopt) {
  std::string text = read_text(path);
  auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".braid") {
    auto b = parse_braid(text);
    if (open) b.open = *open;
    return b.diagram();
  }
  if (ext == ".json") return diagram_from_json(nlohmann::json::parse(text));
  return parse(text);
}

inline nlohmann::json scalar_json(const Qi& z) { return to_string(z); }
inline nlohmann::json scalar_json(const Cx& z) { return nlohmann::json::array({z.real(), z.imag()}); }

template <class S>
nlohmann::json matrix_json(const Mat2<S>& g) {
  return nlohmann::json::array({nlohmann::json::array({scalar_json(g.m11), scalar_json(g.m12)}),
                                nlohmann::json::array({scalar_json(g.m21), scalar_json(g.m22)})});
}

inline Qi qi_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_qi(j.get<std::string>());
  if (j.is_number_integer()) return Qi(j.get<long>());
  throw Error(Errc::SyntaxError, "matrix entries must be integers or rational strings, got " + j.dump());
}

// Accepts [[a,b],[c,d]] or [a,b,c,d].
inline Mat2<Qi> matrix_from_json(const nlohmann::json& j) {
  std::vector<Qi> e;
  if (j.is_array() && j.size() == 2 && j[0].is_array()) {
    for (const auto& row : j) {
      if (row.size() != 2) throw Error(Errc::SyntaxError, "matrix rows need two entries");
      for (const auto& v : row) e.push_back(qi_from_json(v));
    }
  } else if (j.is_array() && j.size() == 4) {
    for (const auto& v : j) e.push_back(qi_from_json(v));
  } else {
    throw Error(Errc::SyntaxError, "bad matrix " + j.dump());
  }
  return {e[0], e[1], e[2], e[3]};
}

// .coloring: {"bottom": [{"sign": 1, "color": M}, ...], "seeds": [M, ...]}.
struct ColoringInput {
  Boundary<Qi> bottom;
  std::vector<Mat2<Qi>> seeds;
};

inline ColoringInput parse_coloring(const nlohmann::json& j) {
  ColoringInput c;
  if (j.contains("bottom"))
    for (const auto& e : j.at("bottom")) {
      int s = e.at("sign").get<int>();
      if (s != 1 && s != -1) throw Error(Errc::SyntaxError, "sign must be 1 or -1");
      c.bottom.push_back({s, matrix_from_json(e.at("color"))});
    }
  if (j.contains("seeds"))
    for (const auto& m : j.at("seeds")) c.seeds.push_back(matrix_from_json(m));
  return c;
}

// edgeId "level:pos" -> colour, one entry per distinct edge.
template <class S>
nlohmann::json coloring_json(const GColoring<S>& c) {
  auto ids = edge_ids(c.diagram);
  nlohmann::json edges = nlohmann::json::object();
  for (size_t k = 0; k < c.levels.size() && k < ids.size(); ++k)
    for (size_t p = 0; p < c.levels[k].size(); ++p) {
      auto key = std::to_string(ids[k][p].level) + ":" + std::to_string(ids[k][p].pos);
      if (!edges.contains(key)) edges[key] = {{"sign", c.levels[k][p].sign}, {"color", matrix_json(c.levels[k][p].color)}};
    }
  return edges;
}

template <class S>
nlohmann::json boundary_json(const Boundary<S>& b) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : b) a.push_back({{"sign", e.sign}, {"color", matrix_json(e.color)}});
  return a;
}

}  // namespace tanglev
