// Copyright 2026 The densesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"

// Text format: a header line "n m" (or "n m directed"), then m lines "u v".
// Writers emit canonical lexicographic order, LF line endings.
namespace densesim {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_count(std::string_view tok, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("malformed integer '" + std::string(tok) + "'", line);
  }
  return value;
}

struct RawEdgeList {
  std::size_t n = 0;
  bool directed = false;
  std::vector<std::pair<Vertex, Vertex>> pairs;
};

inline RawEdgeList parse_raw(std::string_view text) {
  RawEdgeList raw;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  bool have_header = false;
  std::set<std::pair<Vertex, Vertex>> seen;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (toks.size() < 2 || toks.size() > 3) throw ParseError("malformed header", line_no);
      raw.n = parse_count(toks[0], line_no);
      expected = parse_count(toks[1], line_no);
      if (toks.size() == 3) {
        if (toks[2] != "directed") throw ParseError("unknown header flag '" + std::string(toks[2]) + "'", line_no);
        raw.directed = true;
      }
      have_header = true;
      continue;
    }
    if (toks.size() != 2) throw ParseError("malformed edge line", line_no);
    auto a = parse_count(toks[0], line_no);
    auto b = parse_count(toks[1], line_no);
    if (a >= raw.n || b >= raw.n) throw ParseError("vertex id out of range", line_no);
    if (a == b) throw ParseError("self-loop", line_no);
    auto key = raw.directed ? std::pair<Vertex, Vertex>(a, b)
                            : std::pair<Vertex, Vertex>(std::min(a, b), std::max(a, b));
    if (!seen.insert(key).second) throw ParseError("duplicate edge", line_no);
    raw.pairs.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    if (end == text.size()) break;
  }
  if (!have_header) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
  if (raw.pairs.size() != expected) {
    throw ParseError("header announces " + std::to_string(expected) + " edges but " +
                         std::to_string(raw.pairs.size()) + " were read",
                     line_no);
  }
  return raw;
}

}  // namespace detail

inline Graph read_edge_list(std::string_view text) {
  auto raw = detail::parse_raw(text);
  if (raw.directed) throw ParseError("expected an undirected edge list", 1);
  std::vector<Edge> edges;
  edges.reserve(raw.pairs.size());
  for (auto [a, b] : raw.pairs) edges.push_back({a, b});
  return Graph(raw.n, std::move(edges));
}

inline DirectedGraph read_directed_edge_list(std::string_view text) {
  auto raw = detail::parse_raw(text);
  if (!raw.directed) throw ParseError("expected a directed edge list", 1);
  std::vector<Arc> arcs;
  arcs.reserve(raw.pairs.size());
  for (auto [a, b] : raw.pairs) arcs.push_back({a, b});
  return DirectedGraph(raw.n, std::move(arcs));
}

// Either kind, dispatching on the header.
inline std::variant<Graph, DirectedGraph> read_any_edge_list(std::string_view text) {
  auto raw = detail::parse_raw(text);
  if (raw.directed) return read_directed_edge_list(text);
  return read_edge_list(text);
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

inline std::string write_edge_list(const DirectedGraph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_arcs() << " directed\n";
  for (const auto& a : g.arcs()) out << a.from << ' ' << a.to << '\n';
  return out.str();
}

}  // namespace densesim
