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

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "densesim/decompose.hpp"
#include "densesim/detect_congest.hpp"
#include "densesim/detect_local.hpp"
#include "densesim/graph.hpp"
#include "densesim/mwu.hpp"
#include "densesim/oracle.hpp"
#include "densesim/orient/paths.hpp"
#include "densesim/orient/rounding.hpp"
#include "densesim/orient/weak.hpp"
#include "densesim/orientation.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"

namespace densesim::report {

using Json = nlohmann::ordered_json;

inline std::string exact(const Rational& r) { return to_string(r); }

inline Json ids(const Subset& s) {
  Json a = Json::array();
  for (auto v : s.members()) a.push_back(v);
  return a;
}

inline Json trace(const sim::RoundTrace& t) {
  Json j;
  j["rounds"] = t.rounds_executed;
  j["max_message_bits"] = t.max_message_bits;
  j["total_bits"] = t.total_bits;
  j["messages"] = t.messages;
  Json v = Json::array();
  for (const auto& x : t.violations) v.push_back({{"round", x.round}, {"link", x.link}, {"bits", x.bits}});
  j["violations"] = std::move(v);
  return j;
}

inline Json dual(const DualSolution& s) {
  Json j;
  j["z"] = exact(s.z);
  j["eps"] = exact(s.eps);
  j["T"] = s.T;
  Json a = Json::array();
  for (std::size_t e = 0; e < s.alpha.size(); ++e)
    for (int side = 0; side < 2; ++side) a.push_back(Json::array({e, side, exact(s.alpha[e][side])}));
  j["alpha"] = std::move(a);
  j["feasible"] = s.feasible;
  j["bit_width"] = s.bit_width;
  return j;
}

inline Json local(const LocalDetection& r) {
  return {{"marked", ids(r.marked)}, {"density", exact(r.density)}, {"rounds", r.trace.rounds_executed},
          {"black", r.black}, {"radius", r.radius}};
}

inline Json congest(const CongestDetection& r) {
  return {{"marked", ids(r.marked)}, {"density", exact(r.density)}, {"trials", r.trials},
          {"rounds", r.trace.rounds_executed}, {"marked_per_trial", r.marked_per_trial}};
}

inline Json approx(const ApproxResult& r) {
  Json phases = Json::array();
  for (const auto& p : r.phases) phases.push_back(exact(p));
  return {{"marked", ids(r.output)}, {"density", exact(r.D_hat)}, {"phases", std::move(phases)},
          {"rounds", r.trace.rounds_executed}};
}

inline Json oracle(const OracleResult& r) { return {{"D", exact(r.D)}, {"witness", ids(r.best_subset)}}; }

inline Json clustering(const Clustering& c) {
  return {{"cluster_of", c.cluster_of}, {"centers", c.centers}, {"cut_edges", c.cut_edges}, {"delta", c.delta}};
}

inline Json orientation_stats(const Graph& g, const Orientation& o) {
  auto out = o.outdegrees(g);
  auto in = o.indegrees(g);
  std::int64_t disc = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    disc = std::max<std::int64_t>(disc, std::abs(static_cast<std::int64_t>(out[v]) - static_cast<std::int64_t>(in[v])));
  return {{"max_outdeg", o.max_outdegree(g)}, {"max_discrepancy", disc}};
}

inline Json low_outdegree(const LowOutdegreeResult& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"k", s.k},
                     {"split_edges", s.split_edges},
                     {"bound", exact(s.bound)},
                     {"max_load", exact(s.max_load)},
                     {"low_bits_zero", s.low_bits_zero},
                     {"edge_constraint", s.edge_constraint},
                     {"within_bound", s.within_bound}});
  return {{"max_outdeg", r.max_outdeg},    {"bound", exact(r.target)}, {"pass", r.pass},
          {"rounds", r.trace.rounds_executed}, {"dual_T", r.dual_T},  {"B", r.B},
          {"t", r.t},                      {"eps3", exact(r.eps3)},   {"integral", r.integral},
          {"steps", std::move(steps)}};
}

// "u v ->" when the edge points from u to v, "u v <-" otherwise, in edge order.
inline std::string orientation_lines(const Graph& g, const Orientation& o) {
  std::ostringstream os;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    os << g.edge(e).u << ' ' << g.edge(e).v << (o.toward_larger[e] ? " ->" : " <-") << '\n';
  return os.str();
}

inline Orientation parse_orientation_lines(const Graph& g, const std::string& text) {
  std::istringstream is(text);
  Orientation o(g.num_edges());
  std::size_t u = 0, v = 0;
  std::string arrow;
  EdgeId e = 0;
  while (is >> u >> v >> arrow) {
    if (e >= g.num_edges() || g.edge(e).u != u || g.edge(e).v != v)
      throw ParseError("orientation does not match the edge list", e + 1);
    if (arrow != "->" && arrow != "<-") throw ParseError("bad arrow", e + 1);
    o.toward_larger[e] = arrow == "->";
    ++e;
  }
  if (e != g.num_edges()) throw ParseError("orientation is missing edges", e + 1);
  return o;
}

}  // namespace densesim::report
