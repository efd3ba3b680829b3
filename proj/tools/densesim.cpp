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

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>

#include "densesim/decompose.hpp"
#include "densesim/detect_congest.hpp"
#include "densesim/detect_local.hpp"
#include "densesim/edge_list.hpp"
#include "densesim/generate.hpp"
#include "densesim/mwu.hpp"
#include "densesim/oracle.hpp"
#include "densesim/orient/paths.hpp"
#include "densesim/orient/rounding.hpp"
#include "densesim/orient/weak.hpp"
#include "densesim/report.hpp"

namespace {

using namespace densesim;
using report::Json;

struct Common {
  std::string in;
  std::string out;
  std::string model;
  bool strict = false;
  unsigned threads = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + out);
  f << text;
}

Graph load_graph(const Common& c) {
  auto any = read_any_edge_list(slurp(c.in));
  if (auto* g = std::get_if<Graph>(&any)) return *g;
  throw PreconditionError("this command needs an undirected graph");
}

sim::Engine make_engine(const Common& c, sim::Model fallback) {
  sim::SimConfig cfg;
  cfg.model = c.model.empty() ? fallback : (c.model == "local" ? sim::Model::local : sim::Model::congest);
  if (!c.model.empty() && c.model != "local" && c.model != "congest")
    throw PreconditionError("model must be local or congest");
  cfg.enforcement = c.strict ? sim::Enforcement::strict : sim::Enforcement::permissive;
  cfg.threads = std::max(1u, c.threads);
  return sim::Engine(cfg);
}

Json graph_stats(const Graph& g) {
  std::size_t maxdeg = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) maxdeg = std::max(maxdeg, g.degree(v));
  Json j{{"n", g.num_vertices()}, {"m", g.num_edges()}, {"max_degree", maxdeg}};
  if (g.num_edges() > 0) j["D"] = report::exact(exact_densest(g).D);
  return j;
}

Rational oracle_D(const Graph& g) { return g.num_edges() ? exact_densest(g).D : Rational(0); }

// Every command fills `result` and returns whether its checks passed.
struct Outcome {
  Json result;
  bool pass = true;
};

void add_common(CLI::App* app, Common& c, bool input = true) {
  if (input) app->add_option("--in", c.in, "edge-list file")->required();
  app->add_option("--out", c.out, "write the report here instead of stdout");
  app->add_option("--model", c.model, "local or congest");
  app->add_flag("--strict", c.strict, "abort on CONGEST cap violations");
  app->add_option("--threads", c.threads, "engine worker threads");
}

Rational rat(const std::string& s) { return parse_rational(s); }

Outcome cmd_gen(const std::string& kind, const std::vector<std::string>& params, std::uint64_t seed,
                const std::string& out) {
  std::map<std::string, std::string> p;
  for (const auto& kv : params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw PreconditionError("params are key=value, got " + kv);
    p[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  auto num = [&](const char* key) -> std::size_t {
    if (!p.count(key)) throw PreconditionError(std::string("missing param ") + key);
    return std::stoull(p[key]);
  };
  auto real = [&](const char* key, double dflt) { return p.count(key) ? std::stod(p[key]) : dflt; };
  std::string text;
  if (kind == "path") text = write_edge_list(gen::path(num("n")));
  else if (kind == "cycle") text = write_edge_list(gen::cycle(num("n")));
  else if (kind == "complete") text = write_edge_list(gen::complete(num("n")));
  else if (kind == "star") text = write_edge_list(gen::star(num("leaves")));
  else if (kind == "gnp") text = write_edge_list(gen::erdos_renyi(num("n"), real("p", 0.1), seed));
  else if (kind == "connected") text = write_edge_list(gen::connected_random(num("n"), real("p", 0.1), seed));
  else if (kind == "planted") text = write_edge_list(gen::planted_dense(num("n"), num("k"), seed, real("p", 0.05)));
  else if (kind == "regular") text = write_edge_list(gen::random_regular(num("n"), num("d"), seed));
  else if (kind == "barbell") text = write_edge_list(gen::barbell(num("k"), num("path")));
  else if (kind == "two-stars") text = write_edge_list(gen::two_stars(num("x")));
  else if (kind == "lowerbound-cycle" || kind == "lowerbound-path") {
    auto pair = gen::lowerbound_pair(rat(p.count("eps") ? p["eps"] : "1/10"));
    text = write_edge_list(kind == "lowerbound-cycle" ? pair.first : pair.second);
  } else {
    throw PreconditionError("unknown kind " + kind);
  }
  emit(text, out);
  return {Json(), true};
}

Outcome cmd_exact(const Common& c, bool brute) {
  auto any = read_any_edge_list(slurp(c.in));
  Outcome o;
  if (auto* d = std::get_if<DirectedGraph>(&any)) {
    auto r = brute_directed_densest(*d);
    o.result = {{"density_squared", report::exact(r.density.squared())}, {"S", report::ids(r.s)}, {"T", report::ids(r.t)}};
    return o;
  }
  const Graph& g = std::get<Graph>(any);
  if (g.num_edges() == 0) {
    o.result = {{"D", "0/1"}, {"witness", Json::array()}};
    return o;
  }
  auto r = brute ? brute_densest(g) : exact_densest(g);
  o.result = report::oracle(r);
  o.result["method"] = brute ? "brute" : "flow";
  auto mo = min_max_outdegree(g);
  o.result["min_max_outdegree"] = mo.value;
  o.pass = mo.witness.max_outdegree(g) == mo.value && Rational(static_cast<std::int64_t>(mo.value)) == Rational(ceil_of(r.D));
  return o;
}

Outcome cmd_detect_local(const Common& c, const std::string& dt, const std::string& ep) {
  Rational dtilde = rat(dt), eps = rat(ep);
  auto engine = make_engine(c, sim::Model::local);
  auto any = read_any_edge_list(slurp(c.in));
  Outcome o;
  if (auto* d = std::get_if<DirectedGraph>(&any)) {
    auto r = local_detect_directed(*d, dtilde, eps, engine);
    Json groups = Json::array();
    Rational need = (1 - eps) * (1 - eps) * dtilde * dtilde;
    for (const auto& [label, st] : r.groups()) {
      auto dd = directed_density(*d, st.first, st.second);
      groups.push_back({{"S", report::ids(st.first)}, {"T", report::ids(st.second)}, {"density_squared", report::exact(dd.squared())}});
      o.pass = o.pass && dd.squared() >= need;
    }
    o.result = {{"groups", groups}, {"black", r.black}, {"rounds", r.trace.rounds_executed}};
    return o;
  }
  const Graph& g = std::get<Graph>(any);
  auto r = local_detect(g, dtilde, eps, engine);
  o.result = report::local(r);
  bool sound = r.marked.empty() || r.density >= (1 - eps) * dtilde;
  bool complete = oracle_D(g) < dtilde || !r.marked.empty();
  o.result["check"] = {{"bound", report::exact((1 - eps) * dtilde)}, {"sound", sound}, {"complete", complete}};
  o.pass = sound && complete;
  return o;
}

Outcome cmd_detect_congest(const Common& c, const std::string& dt, const std::string& ep, std::uint64_t seed,
                           CongestOptions opt) {
  Graph g = load_graph(c);
  Rational dtilde = rat(dt), eps = rat(ep);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = congest_detect(g, dtilde, eps, seed, engine, opt);
  Outcome o;
  o.result = report::congest(r);
  bool sound = r.marked.empty() || r.density >= (1 - eps) * dtilde;
  o.result["check"] = {{"bound", report::exact((1 - eps) * dtilde)}, {"sound", sound},
                       {"violations", r.trace.violations.size()}};
  o.pass = sound;
  return o;
}

Outcome cmd_approx(const Common& c, const std::string& ep, std::uint64_t seed, CongestOptions opt) {
  Graph g = load_graph(c);
  Rational eps = rat(ep);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = approx_densest(g, eps, seed, engine, opt);
  Outcome o;
  o.result = report::approx(r);
  Rational need = (1 - eps) * oracle_D(g) / (1 + eps);
  o.pass = r.D_hat >= need;
  o.result["check"] = {{"bound", report::exact(need)}, {"pass", o.pass}};
  return o;
}

Outcome cmd_mwu(const Common& c, bool primal_first, const std::string& zs, const std::string& ep,
                std::optional<std::uint64_t> T) {
  Graph g = load_graph(c);
  Rational z = rat(zs), eps = rat(ep);
  auto engine = make_engine(c, sim::Model::congest);
  auto d = fractional_dual(g, z, eps, T, engine);
  sim::Engine pe(engine.config());
  auto p = integral_primal(g, z, eps, T, pe);
  Outcome o;
  bool primal_ok = p.subset && density(g, *p.subset) >= (1 - 3 * eps) * z;
  if (primal_first) {
    o.result = {{"subset", p.subset ? report::ids(*p.subset) : Json()},
                {"density", p.subset ? Json(report::exact(density(g, *p.subset))) : Json()},
                {"iteration", p.iteration},
                {"rounds", p.trace.rounds_executed}};
  } else {
    o.result = report::dual(d.solution);
    o.result["rounds"] = d.trace.rounds_executed;
  }
  o.pass = d.solution.feasible || primal_ok;
  o.result["check"] = {{"dual_feasible", d.solution.feasible}, {"primal_dense", primal_ok}, {"disjunction", o.pass}};
  return o;
}

Outcome cmd_orient(const Common& c, std::int64_t dtilde, const std::string& ep, const std::string& lines) {
  Graph g = load_graph(c);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = orient_low_outdegree(g, dtilde, rat(ep), engine);
  Outcome o;
  o.result = report::low_outdegree(r);
  o.pass = r.pass;
  if (!lines.empty()) emit(report::orientation_lines(g, r.orientation), lines);
  return o;
}

Outcome cmd_split(const Common& c, const std::string& ep, const std::string& lines) {
  Graph g = load_graph(c);
  Rational eps = rat(ep);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = directed_split(g, eps, engine);
  Outcome o;
  o.result = report::orientation_stats(g, r.orientation);
  auto out = r.orientation.outdegrees(g), in = r.orientation.indegrees(g);
  bool ok = is_path_partition(g, r.decomposition) && r.decomposition.max_length() <= (std::size_t{1} << r.decomposition.iterations);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto diff = static_cast<std::int64_t>(out[v]) - static_cast<std::int64_t>(in[v]);
    ok = ok && Rational(std::abs(diff)) <= eps * static_cast<std::int64_t>(g.degree(v)) + 12;
  }
  o.result["iterations"] = r.decomposition.iterations;
  o.result["paths"] = r.decomposition.paths.size();
  o.result["max_path_length"] = r.decomposition.max_length();
  o.result["rounds"] = r.trace.rounds_executed;
  o.result["pass"] = ok;
  o.pass = ok;
  if (!lines.empty()) emit(report::orientation_lines(g, r.orientation), lines);
  return o;
}

Outcome cmd_weak(const Common& c, const std::string& lines) {
  Graph g = load_graph(c);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = weak_orientation(g, engine);
  Outcome o;
  auto out = r.orientation.outdegrees(g);
  for (Vertex v = 0; v < g.num_vertices(); ++v) o.pass = o.pass && out[v] >= g.degree(v) / 3;
  o.result = report::orientation_stats(g, r.orientation);
  o.result["phases"] = r.phases;
  o.result["sinks"] = r.sinks;
  o.result["rounds"] = r.trace.rounds_executed;
  o.result["pass"] = o.pass;
  if (!lines.empty()) emit(report::orientation_lines(g, r.orientation), lines);
  return o;
}

Outcome cmd_ldd(const Common& c, const std::string& ep, std::uint64_t seed) {
  Graph g = load_graph(c);
  auto engine = make_engine(c, sim::Model::congest);
  auto r = ldd(g, rat(ep), seed, engine);
  Outcome o;
  o.result = report::clustering(r);
  o.result["rounds"] = engine.trace().rounds_executed;
  return o;
}

Outcome cmd_bench(const std::string& suite, const std::string& out, std::uint64_t seeds, unsigned threads) {
  std::ostringstream csv;
  csv << "algorithm,n,eps,seed,rounds,max_message_bits,pass\n";
  bool all = true;
  auto row = [&](const char* alg, std::size_t n, const Rational& eps, std::uint64_t seed, const sim::RoundTrace& t,
                 bool pass) {
    csv << alg << ',' << n << ',' << report::exact(eps) << ',' << seed << ',' << t.rounds_executed << ','
        << t.max_message_bits << ',' << (pass ? "true" : "false") << '\n';
    all = all && pass;
  };
  sim::SimConfig cfg = sim::SimConfig::congest();
  cfg.threads = std::max(1u, threads);
  const std::vector<Rational> eps_list{make_rational(1, 4), make_rational(1, 8), make_rational(1, 16)};
  if (suite == "detect-local") {
    sim::SimConfig lc;
    lc.threads = cfg.threads;
    for (std::size_t n : {32, 64, 128})
      for (const auto& eps : eps_list)
        for (std::uint64_t s = 0; s < seeds; ++s) {
          Graph g = gen::planted_dense(n, 8, s);
          Rational D = exact_densest(g).D;
          sim::Engine e(lc);
          auto r = local_detect(g, D, eps, e);
          row("detect-local", n, eps, s, r.trace, !r.marked.empty() && r.density >= (1 - eps) * D);
        }
  } else if (suite == "mwu") {
    for (std::size_t n : {32, 64, 128})
      for (const auto& eps : eps_list)
        for (std::uint64_t s = 0; s < seeds; ++s) {
          Graph g = gen::planted_dense(n, 8, s);
          Rational z(ceil_of(exact_densest(g).D));
          sim::Engine e(cfg);
          auto d = fractional_dual(g, z, eps, 256, e);
          row("dual", n, eps, s, d.trace, d.solution.feasible);
        }
  } else if (suite == "ldd") {
    for (std::size_t n : {64, 256, 1024})
      for (const auto& eps : eps_list)
        for (std::uint64_t s = 0; s < seeds; ++s) {
          Graph g = gen::connected_random(n, 4.0 / static_cast<double>(n), s);
          sim::Engine e(cfg);
          auto c = ldd(g, eps, s, e);
          row("ldd", n, eps, s, e.trace(), true);
          (void)c;
        }
  } else if (suite == "orient") {
    for (std::size_t n : {64, 128, 256})
      for (std::uint64_t s = 0; s < seeds; ++s) {
        Graph g = gen::erdos_renyi(n, 0.5, s);
        std::int64_t dt = static_cast<std::int64_t>(ceil_of(exact_densest(g).D));
        dt = std::max<std::int64_t>(dt, 128);
        sim::Engine e(cfg);
        auto r = orient_low_outdegree(g, dt, make_rational(1, 4), e);
        row("orient", n, make_rational(1, 4), s, r.trace, r.pass);
      }
  } else {
    throw PreconditionError("unknown suite " + suite + " (detect-local, mwu, ldd, orient)");
  }
  emit(csv.str(), out);
  Outcome o;
  o.pass = all;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densesim: distributed densest subgraph simulator"};
  app.require_subcommand(1);
  Common c;
  std::string dtilde, eps, z, kind, suite, lines;
  std::vector<std::string> params;
  std::uint64_t seed = 0, bench_seeds = 3;
  std::optional<std::uint64_t> trials, T;
  std::int64_t dt_int = 0;
  bool brute = false;

  auto* gen_cmd = app.add_subcommand("gen", "write a generated instance");
  gen_cmd->add_option("--kind", kind)->required();
  gen_cmd->add_option("--params", params, "key=value pairs");
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--out", c.out);

  auto* exact_cmd = app.add_subcommand("exact", "exact densest subgraph");
  add_common(exact_cmd, c);
  exact_cmd->add_flag("--brute", brute);

  auto* local_cmd = app.add_subcommand("detect-local", "LOCAL dense subgraph detection");
  add_common(local_cmd, c);
  local_cmd->add_option("--dtilde", dtilde)->required();
  local_cmd->add_option("--eps", eps)->required();

  auto* congest_cmd = app.add_subcommand("detect-congest", "CONGEST dense subgraph detection");
  add_common(congest_cmd, c);
  congest_cmd->add_option("--dtilde", dtilde)->required();
  congest_cmd->add_option("--eps", eps)->required();
  congest_cmd->add_option("--seed", seed);
  congest_cmd->add_option("--trials", trials);
  congest_cmd->add_option("--T", T, "primal iterations per cluster");

  auto* approx_cmd = app.add_subcommand("approx", "approximate densest subgraph");
  add_common(approx_cmd, c);
  approx_cmd->add_option("--eps", eps)->required();
  approx_cmd->add_option("--seed", seed);
  approx_cmd->add_option("--trials", trials);
  approx_cmd->add_option("--T", T, "primal iterations per cluster");

  auto* dual_cmd = app.add_subcommand("dual", "fractional dual solver");
  auto* primal_cmd = app.add_subcommand("primal", "integral primal solver");
  for (auto* s : {dual_cmd, primal_cmd}) {
    add_common(s, c);
    s->add_option("--z", z)->required();
    s->add_option("--eps", eps)->required();
    s->add_option("--T", T);
  }

  auto* orient_cmd = app.add_subcommand("orient", "low outdegree orientation");
  add_common(orient_cmd, c);
  orient_cmd->add_option("--dtilde", dt_int)->required();
  orient_cmd->add_option("--eps", eps)->required();
  orient_cmd->add_option("--lines", lines, "write the orientation as edge lines");

  auto* split_cmd = app.add_subcommand("split", "directed splitting");
  add_common(split_cmd, c);
  split_cmd->add_option("--eps", eps)->required();
  split_cmd->add_option("--lines", lines);

  auto* weak_cmd = app.add_subcommand("weak-orient", "weak deg/3 orientation");
  add_common(weak_cmd, c);
  weak_cmd->add_option("--lines", lines);

  auto* ldd_cmd = app.add_subcommand("ldd", "low diameter decomposition");
  add_common(ldd_cmd, c);
  ldd_cmd->add_option("--eps", eps)->required();
  ldd_cmd->add_option("--seed", seed);

  auto* bench_cmd = app.add_subcommand("bench", "round scaling tables as CSV");
  bench_cmd->add_option("--suite", suite)->required();
  bench_cmd->add_option("--out", c.out);
  bench_cmd->add_option("--seeds", bench_seeds);
  bench_cmd->add_option("--threads", c.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    CongestOptions copt;
    copt.trials = trials;
    copt.primal_T = T;
    Outcome o;
    std::string name = app.get_subcommands().front()->get_name();
    if (name == "gen") return cmd_gen(kind, params, seed, c.out).pass ? 0 : 1;
    if (name == "bench") return cmd_bench(suite, c.out, bench_seeds, c.threads).pass ? 0 : 1;
    if (name == "exact") o = cmd_exact(c, brute);
    else if (name == "detect-local") o = cmd_detect_local(c, dtilde, eps);
    else if (name == "detect-congest") o = cmd_detect_congest(c, dtilde, eps, seed, copt);
    else if (name == "approx") o = cmd_approx(c, eps, seed, copt);
    else if (name == "dual") o = cmd_mwu(c, false, z, eps, T);
    else if (name == "primal") o = cmd_mwu(c, true, z, eps, T);
    else if (name == "orient") o = cmd_orient(c, dt_int, eps, lines);
    else if (name == "split") o = cmd_split(c, eps, lines);
    else if (name == "weak-orient") o = cmd_weak(c, lines);
    else if (name == "ldd") o = cmd_ldd(c, eps, seed);
    Json rep;
    std::vector<std::string> echo(argv, argv + argc);
    rep["command"] = echo;
    if (name != "exact") rep["graph"] = graph_stats(load_graph(c));
    rep["result"] = o.result;
    rep["pass"] = o.pass;
    rep["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Flatten the headline fields for quick reading.
    for (auto it = o.result.begin(); it != o.result.end(); ++it)
      if (!rep.contains(it.key())) rep[it.key()] = it.value();
    emit(rep.dump(2) + "\n", c.out);
    return o.pass ? 0 : 1;
  } catch (const Error& e) {
    Json err{{"error", {{"type", typeid(e).name()}, {"message", e.what()}}}};
    if (dynamic_cast<const PreconditionError*>(&e)) err["error"]["type"] = "precondition";
    else if (dynamic_cast<const ParseError*>(&e)) err["error"]["type"] = "parse";
    else if (dynamic_cast<const CongestViolation*>(&e)) err["error"]["type"] = "congest_violation";
    else if (dynamic_cast<const RoundLimitExceeded*>(&e)) err["error"]["type"] = "round_limit";
    else if (dynamic_cast<const InvariantViolation*>(&e)) err["error"]["type"] = "invariant";
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    return 2;
  }
}
