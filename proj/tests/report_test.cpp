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

#include <gtest/gtest.h>

#include "densesim/generate.hpp"
#include "densesim/report.hpp"

namespace densesim {
namespace {

TEST(Report, TraceFields) {
  sim::RoundTrace t;
  t.rounds_executed = 7;
  t.max_message_bits = 16;
  t.total_bits = 64;
  t.messages = 4;
  t.violations.push_back({3, 1, 24});
  auto j = report::trace(t);
  EXPECT_EQ(j["rounds"], 7);
  EXPECT_EQ(j["violations"][0]["bits"], 24);
  EXPECT_EQ(j.dump(), R"({"rounds":7,"max_message_bits":16,"total_bits":64,"messages":4,"violations":[{"round":3,"link":1,"bits":24}]})");
}

TEST(Report, DualSolutionUsesStrings) {
  sim::Engine engine;
  auto r = fractional_dual(Graph(2, {{0, 1}}), make_rational(1), make_rational(1, 4), 16, engine);
  auto j = report::dual(r.solution);
  EXPECT_EQ(j["z"], "1/1");
  EXPECT_EQ(j["eps"], "1/4");
  EXPECT_EQ(j["alpha"][0][2], "3/2");
  EXPECT_EQ(j["alpha"].size(), 2u);
  EXPECT_TRUE(j["feasible"].get<bool>());
}

TEST(Report, OracleK5) {
  auto j = report::oracle(exact_densest(gen::complete(5)));
  EXPECT_EQ(j.dump(), R"({"D":"2/1","witness":[0,1,2,3,4]})");
}

TEST(Report, OrientationLinesRoundTrip) {
  Graph g = gen::cycle(5);
  Orientation o(g.num_edges());
  o.flip(1);
  o.flip(4);
  std::string text = report::orientation_lines(g, o);
  EXPECT_EQ(text.substr(0, 14), "0 1 ->\n0 4 <-\n");
  EXPECT_EQ(report::parse_orientation_lines(g, text), o);
  EXPECT_THROW(report::parse_orientation_lines(g, "0 2 ->\n"), ParseError);
}

TEST(Report, CongestDeterministic) {
  Graph g = gen::planted_dense(24, 6, 3);
  CongestOptions opt;
  opt.primal_T = 16;
  auto run = [&] {
    sim::Engine engine(sim::SimConfig::congest());
    auto r = congest_detect(g, make_rational(2), make_rational(1, 8), 5, engine, opt);
    auto j = report::congest(r);
    j["trace"] = report::trace(r.trace);
    return j.dump();
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace densesim
