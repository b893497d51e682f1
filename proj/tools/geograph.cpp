// Command-line front door: every operation is a pure function of the config
// file plus seeds, and re-runs are byte-identical.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geograph/back_and_forth.hpp"
#include "geograph/euclid.hpp"
#include "geograph/gec.hpp"
#include "geograph/oracle.hpp"
#include "geograph/step_isometry.hpp"
#include "geograph/universe.hpp"

using nlohmann::json;
using nlohmann::ordered_json;
using namespace geograph;

namespace {

int log_level() {
  const char* v = std::getenv("GEOGRAPH_LOG");
  return v ? std::atoi(v) : 0;
}

void logln(const std::string& msg) {
  if (log_level() > 0) std::cerr << "geograph: " << msg << "\n";
}

struct RunConfig {
  size_t dimension = 1;
  Metric metric = Metric::ProductLinf;
  Rat delta = Rat(1);
  Rat gamma = Rat(1);
  Rat p = Rat(1, 2);
  uint64_t seed = 0;
  uint64_t seed2 = 1;
  uint64_t steps = 10;
  uint64_t budget = 100000;
  uint64_t trials = 1000;
  std::optional<std::vector<std::pair<Rat, Rat>>> region;
  std::optional<std::vector<std::pair<Rat, Rat>>> region2;
  std::string output_path = "out.json";
  json raw;  // command-specific extras
};

Metric parse_metric(const std::string& s) {
  if (s == "linf" || s == "product") return Metric::ProductLinf;
  if (s == "l2" || s == "euclidean") return Metric::EuclideanL2;
  throw std::invalid_argument("unknown metric tag: " + s);
}

std::vector<std::pair<Rat, Rat>> parse_region(const json& j) {
  std::vector<std::pair<Rat, Rat>> out;
  for (const auto& side : j)
    out.emplace_back(parse_rat(side.at(0).get<std::string>()),
                     parse_rat(side.at(1).get<std::string>()));
  return out;
}

Point parse_point(const json& j) {
  Point p;
  for (const auto& x : j) p.c.push_back(parse_rat(x.get<std::string>()));
  return p;
}

ordered_json point_json(const Point& p) {
  ordered_json a = ordered_json::array();
  for (const auto& x : p.c) a.push_back(rat_str(x));
  return a;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  json j = json::parse(in);
  RunConfig c;
  c.raw = j;
  if (j.contains("dimension")) c.dimension = j["dimension"].get<size_t>();
  if (j.contains("metric")) c.metric = parse_metric(j["metric"]);
  if (j.contains("delta")) c.delta = parse_rat(j["delta"]);
  if (j.contains("gamma")) c.gamma = parse_rat(j["gamma"]);
  if (j.contains("p")) c.p = parse_rat(j["p"]);
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("seed2")) c.seed2 = j["seed2"].get<uint64_t>();
  if (j.contains("steps")) c.steps = j["steps"].get<uint64_t>();
  if (j.contains("budget")) c.budget = j["budget"].get<uint64_t>();
  if (j.contains("trials")) c.trials = j["trials"].get<uint64_t>();
  if (j.contains("region")) c.region = parse_region(j["region"]);
  if (j.contains("region2")) c.region2 = parse_region(j["region2"]);
  if (j.contains("output_path")) c.output_path = j["output_path"];
  if (c.delta <= 0 || c.gamma <= 0)
    throw std::invalid_argument("config: delta, gamma must be positive");
  if (c.p < 0 || c.p > 1) throw std::invalid_argument("config: p outside [0,1]");
  return c;
}

Universe make_universe(const RunConfig& c,
                       const std::optional<std::vector<std::pair<Rat, Rat>>>&
                           region) {
  if (region) return Universe::box(*region);
  return Universe::rationals(c.dimension);
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output: " + path);
  out << text;
  logln("wrote " + path);
}

int cmd_generate(const RunConfig& c) {
  Universe u = make_universe(c, c.region);
  std::vector<Point> pts;
  if (c.raw.contains("points"))
    for (const auto& pj : c.raw["points"]) pts.push_back(parse_point(pj));
  else if (c.raw.contains("indices"))
    for (const auto& ij : c.raw["indices"])
      pts.push_back(u.point_at(ij.get<uint64_t>()));
  else
    for (uint64_t i = 0; i < c.steps; ++i) pts.push_back(u.point_at(i));
  Snapshot snap = sample_larg(pts, c.delta, c.p, c.seed, c.metric);
  write_out(c.output_path, snap.to_json());
  return 0;
}

int cmd_build_gr(const RunConfig& c) {
  Universe u = make_universe(c, c.region);
  BuildOptions opts;
  opts.witness_budget = c.budget;
  if (c.raw.contains("max_pairs_per_stage"))
    opts.max_pairs_per_stage = c.raw["max_pairs_per_stage"].get<size_t>();
  Construction built =
      build_gr(u, c.delta, static_cast<uint32_t>(c.steps), c.metric, opts);
  ordered_json out;
  out["snapshot"] = ordered_json::parse(built.snapshot.to_json());
  out["stages"] = built.stages;
  out["stage_sizes"] = built.stage_sizes;
  out["sigma_keys"] = built.sigma_keys;
  out["log"] = ordered_json::array();
  for (const auto& rec : built.log) {
    ordered_json e;
    e["stage"] = rec.stage;
    e["x"] = rec.x;
    e["A"] = rec.A;
    e["z"] = rec.z;
    e["trials"] = rec.trials;
    out["log"].push_back(std::move(e));
  }
  write_out(c.output_path, out.dump(2));
  return 0;
}

int cmd_witness(const RunConfig& c) {
  Universe u = make_universe(c, c.region);
  Oracle oracle(c.seed, c.delta, c.p, c.metric);
  WitnessRequest req;
  req.x = parse_point(c.raw.at("x"));
  for (const auto& pj : c.raw.value("A", json::array()))
    req.A.push_back(parse_point(pj));
  for (const auto& pj : c.raw.value("B", json::array()))
    req.B.push_back(parse_point(pj));
  req.delta = c.delta;
  if (c.raw.contains("delta_prime"))
    req.delta_prime = parse_rat(c.raw["delta_prime"]);
  req.budget = c.budget;
  WitnessResult res = find_witness(oracle, u, req);
  ordered_json out;
  out["status"] = res.status == SearchStatus::Found          ? "Found"
                  : res.status == SearchStatus::PoolExhausted ? "PoolExhausted"
                                                              : "BudgetExhausted";
  out["trials"] = res.trials;
  if (res.witness) out["witness"] = point_json(*res.witness);
  write_out(c.output_path, out.dump(2));
  return 0;
}

int cmd_distance_check(const RunConfig& c) {
  Universe u = make_universe(c, c.region);
  Oracle oracle(c.seed, c.delta, c.p, c.metric);
  Point a = parse_point(c.raw.at("u"));
  Point b = parse_point(c.raw.at("v"));
  DistanceForecast fc = expected_graph_distance(a, b, c.delta, c.metric);
  std::vector<Point> path = construct_path(oracle, u, a, b, c.budget);
  ordered_json out;
  out["expected_length"] = fc.distance.get_str();
  out["at_boundary"] = fc.at_boundary;
  out["path"] = ordered_json::array();
  for (const auto& p : path) out["path"].push_back(point_json(p));
  out["hops"] = path.size() - 1;
  // lower-bound certificate (k-1) * delta <= d(u,v), by squared comparison
  // under L2 and directly under the product metric
  Rat lower = Rat(fc.distance - 1) * c.delta;
  bool cert = c.metric == Metric::ProductLinf
                  ? distance_linf(a, b) >= lower
                  : compare_l2(a, b, lower) >= 0;
  out["metric_lower_bound_certified"] = cert;
  write_out(c.output_path, out.dump(2));
  return 0;
}

int cmd_back_and_forth(const RunConfig& c) {
  Universe us = make_universe(c, c.region);
  Universe ut = make_universe(c, c.region2 ? c.region2 : c.region);
  Rat p2 = c.raw.contains("p2") ? parse_rat(c.raw["p2"]) : c.p;
  InfiniteGraphHandle G{Oracle(c.seed, c.delta, c.p, c.metric), &us};
  InfiniteGraphHandle H{Oracle(c.seed2, c.gamma, p2, c.metric), &ut};
  RunResult res = run_back_and_forth(G, H, c.steps, c.budget);
  VerifyReport rep = verify_partial(res.state, G, H);
  ordered_json out;
  out["steps"] = res.log.size();
  out["pairs_checked"] = rep.pairs_checked;
  out["adjacency_violations"] = rep.adjacency_violations;
  out["floor_violations"] = rep.floor_violations;
  out["certified"] = rep.ok();
  out["transcript"] = transcript_jsonl(res.log);
  write_out(c.output_path, out.dump(2));
  return rep.ok() ? 0 : 1;
}

int cmd_guided(const RunConfig& c) {
  if (!c.region || !c.region2 || c.region->size() != 1 ||
      c.region2->size() != 1)
    throw std::invalid_argument("guided: 1-D region and region2 required");
  Universe us = make_universe(c, c.region);
  Universe ut = make_universe(c, c.region2);
  auto [a, b] = (*c.region)[0];
  auto [a2, b2] = (*c.region2)[0];
  IntervalMap im(a, b, a2, b2, c.delta, c.gamma);
  Rat p2 = c.raw.contains("p2") ? parse_rat(c.raw["p2"]) : c.p;
  InfiniteGraphHandle G{Oracle(c.seed, c.delta, c.p, c.metric), &us};
  InfiniteGraphHandle H{Oracle(c.seed2, c.gamma, p2, c.metric), &ut};
  GuidedMap F{[im](const Rat& x) { return im.eval(x); },
              [im](const Rat& y) { return im.eval_inverse(y); }};
  RunResult res = run_guided(G, H, F, c.steps, c.budget);
  VerifyReport rep = verify_partial(res.state, G, H);
  ordered_json out;
  out["steps"] = res.log.size();
  out["pairs_checked"] = rep.pairs_checked;
  out["adjacency_violations"] = rep.adjacency_violations;
  out["floor_violations"] = rep.floor_violations;
  out["certified"] = rep.ok();
  out["transcript"] = transcript_jsonl(res.log);
  write_out(c.output_path, out.dump(2));
  return rep.ok() ? 0 : 1;
}

int cmd_euclid_claims(const RunConfig& c) {
  ordered_json out = ordered_json::array();
  Rat prec(1, 1u << 20);
  if (c.raw.contains("claim1")) {
    const auto& cj = c.raw["claim1"];
    Claim1Config cfg = build_claim1_config(parse_point(cj.at("x1")),
                                           parse_point(cj.at("x2")),
                                           parse_rat(cj.at("epsilon")));
    ChainReport rep = verify_claim1_chain(cfg, prec);
    out.push_back(ordered_json::parse(certificate_json(rep, "claim1")));
  }
  if (c.raw.contains("claim2")) {
    const auto& cj = c.raw["claim2"];
    Claim2Config cfg = build_claim2_config(parse_point(cj.at("x1")),
                                           parse_point(cj.at("x2")),
                                           parse_rat(cj.at("epsilon")));
    ChainReport rep = verify_claim2_chain(cfg, prec);
    out.push_back(ordered_json::parse(certificate_json(rep, "claim2")));
  }
  write_out(c.output_path, out.dump(2));
  for (const auto& cert : out)
    if (!cert["certified"].get<bool>()) return 1;
  return 0;
}

int cmd_compat_mc(const RunConfig& c) {
  Universe u = Universe::rationals(2);
  Oracle G(c.seed, c.delta, c.p, Metric::EuclideanL2);
  Oracle H(c.seed2, c.delta, c.p, Metric::EuclideanL2);
  std::vector<Point> pts;
  if (c.raw.contains("points"))
    for (const auto& pj : c.raw["points"]) pts.push_back(parse_point(pj));
  size_t target = c.raw.value("enumeration_size", size_t{12});
  GoodEnumeration en = good_enumeration(pts, c.delta, u, c.budget);
  // extend the enumeration with universe connectors until the target length
  for (uint64_t idx = 0; en.points.size() < target; ++idx) {
    Point p = u.point_at(idx);
    bool dup = false;
    for (const auto& q : en.points) dup = dup || q == p;
    if (dup) continue;
    auto extended = en.points;
    extended.push_back(p);
    en = good_enumeration(extended, c.delta, u, c.budget);
  }
  CompatRun run = compatibility_mc(G, H, en, c.trials, c.seed ^ c.seed2);
  write_out(c.output_path, compat_csv(run.per_n));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic geometric graph toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<uint64_t> budget_override;
  app.add_option("--config", config_path, "config JSON path")->required();
  app.add_option("--seed", seed_override, "override config seed");
  app.add_option("--out", out_override, "override output path");
  app.add_option("--budget", budget_override, "override search budget");

  auto* c_generate = app.add_subcommand("generate", "sample a LARG snapshot");
  auto* c_build = app.add_subcommand("build-gr", "deterministic construction");
  auto* c_witness = app.add_subcommand("witness", "single witness query");
  auto* c_dist = app.add_subcommand("distance-check", "path construction");
  auto* c_bf = app.add_subcommand("back-and-forth", "isomorphism engine");
  auto* c_guided = app.add_subcommand("guided", "guided isomorphism engine");
  auto* c_claims = app.add_subcommand("euclid-claims", "claim certificates");
  auto* c_compat = app.add_subcommand("compat-mc", "compatibility Monte Carlo");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (out_override) cfg.output_path = *out_override;
    if (budget_override) cfg.budget = *budget_override;

    if (c_generate->parsed()) return cmd_generate(cfg);
    if (c_build->parsed()) return cmd_build_gr(cfg);
    if (c_witness->parsed()) return cmd_witness(cfg);
    if (c_dist->parsed()) return cmd_distance_check(cfg);
    if (c_bf->parsed()) return cmd_back_and_forth(cfg);
    if (c_guided->parsed()) return cmd_guided(cfg);
    if (c_claims->parsed()) return cmd_euclid_claims(cfg);
    if (c_compat->parsed()) return cmd_compat_mc(cfg);
    return 1;
  } catch (const budget_exhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
