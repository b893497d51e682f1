// Acceptance battery: one pass/fail line per criterion, exit 0 only if all
// pass. Randomized parts run on fixed seeds, so every outcome is
// reproducible.

#include <geograph/back_and_forth.hpp>
#include <geograph/euclid.hpp>
#include <geograph/gec.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/stats.hpp"
#include "support/universes.hpp"

using namespace geograph;
namespace fs = std::filesystem;

namespace {

Rat rq(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

// ------------------------------------------------------------- criterion 1

void run_unguided(size_t dim, const Universe& us, const Universe& ut,
                  uint64_t seed_g, uint64_t seed_h) {
  InfiniteGraphHandle G{Oracle(seed_g, Rat(1), rq(1, 2), Metric::ProductLinf),
                        &us};
  InfiniteGraphHandle H{Oracle(seed_h, rq(3, 2), rq(1, 3), Metric::ProductLinf),
                        &ut};
  RunResult res = run_back_and_forth(G, H, 100, 100000);
  expect(res.log.size() == 100, "dim " + std::to_string(dim) + ": step count");
  for (const auto& st : res.log)
    for (size_t j = 0; j < st.a.size(); ++j)
      expect(st.a[j] < st.b[j],
             "dim " + std::to_string(dim) + ": interval bound not open");
  VerifyReport rep = verify_partial(res.state, G, H);
  expect(rep.adjacency_violations == 0,
         "dim " + std::to_string(dim) + ": adjacency violations");
  expect(rep.floor_violations == 0,
         "dim " + std::to_string(dim) + ": floor violations");
}

void criterion1() {
  for (size_t dim : {size_t{1}, size_t{2}}) {
    Universe us = testuniv::spread_box(dim, Rat(1), 29);
    Universe ut = testuniv::spread_box(dim, rq(3, 2), 29);
    run_unguided(dim, us, ut, 1001 + dim, 2002 + dim);
  }
}

// ------------------------------------------------------------- criterion 2

void criterion2() {
  Universe us = Universe::box({{Rat(0), Rat(1)}});
  Universe ut = Universe::box({{Rat(0), rq(1, 2)}});
  // complete graphs (p = 1) keep the witness search purely order-driven
  InfiniteGraphHandle G{Oracle(31, Rat(1), Rat(1), Metric::ProductLinf), &us};
  InfiniteGraphHandle H{Oracle(32, Rat(1), Rat(1), Metric::ProductLinf), &ut};
  IntervalMap im(Rat(0), Rat(1), Rat(0), rq(1, 2), Rat(1), Rat(1));
  GuidedMap F{[im](const Rat& x) { return im.eval(x); },
              [im](const Rat& y) { return im.eval_inverse(y); }};
  RunResult res = run_guided(G, H, F, 100, 100000);
  expect(res.log.size() == 100, "step count");
  expect(verify_partial(res.state, G, H).ok(), "verification violations");

  // the three induction conditions over the final map
  const auto& src = res.state.source_list;
  const auto& tgt = res.state.target_list;
  std::vector<Rat> rs, rf, rF;
  for (size_t i = 0; i < src.size(); ++i) {
    auto ds = decompose(src[i].c[0], src[0].c[0], Rat(1));
    auto df = decompose(tgt[i].c[0], tgt[0].c[0], Rat(1));
    auto dF = decompose(im.eval(src[i].c[0]), tgt[0].c[0], Rat(1));
    expect(ds.q == df.q, "condition 3: quotient preservation");
    rs.push_back(ds.r);
    rf.push_back(df.r);
    rF.push_back(dF.r);
  }
  for (size_t i = 0; i < src.size(); ++i)
    for (size_t j = 0; j < src.size(); ++j) {
      expect((rs[i] <= rs[j]) == (rf[i] <= rf[j]),
             "condition 1: representative order");
      expect((rs[i] <= rs[j]) == (rf[i] <= rF[j]),
             "condition 2: mixed order against the guide");
    }
}

// ------------------------------------------------------------- criterion 3

void criterion3() {
  std::mt19937_64 rng(424242);
  auto rand_rat = [&](long span, long dmax) {
    long d = 1 + (long)(rng() % (uint64_t)dmax);
    long n = (long)(rng() % (uint64_t)(2 * span * d)) - span * d;
    return rq(n, d);
  };
  // increasing bijections on tie-free sets: the regime where the lemma
  // characterization is an equivalence
  auto draw_set = [&](size_t sz, const Rat& offset) {
    std::vector<Rat> vals;
    while (vals.size() < sz) {
      Rat v = rand_rat(6, 12);
      bool ok = true;
      for (const auto& w : vals)
        ok = ok && decompose(Rat(v - w), Rat(0), offset).r != 0;
      if (ok) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    return vals;
  };
  uint64_t trials = 0, positives = 0, negatives = 0;
  while (trials < 1200) {
    size_t sz = 2 + (size_t)(rng() % 11);
    Rat delta(1);
    Rat gamma = rq(1 + (long)(rng() % 3), 2);
    std::vector<Rat> sv = draw_set(sz, delta), tv;
    if (trials % 4 == 0) {
      // constructed positive via the interval bijection
      IntervalMap im(Rat(-10), Rat(10), Rat(0), Rat(gamma * 20), delta, gamma);
      for (const Rat& x : sv) tv.push_back(im.eval(x));
    } else {
      tv = draw_set(sz, gamma);
    }
    FiniteMap f;
    for (size_t i = 0; i < sz; ++i)
      f.pairs.push_back({Point{sv[i]}, Point{tv[i]}});
    bool a = is_step_isometry(f, delta, gamma, Metric::ProductLinf);
    bool b = check_lemma_conditions(f, delta, gamma, f.pairs.front());
    expect(a == b, "floor test and lemma conditions disagree");
    (a ? positives : negatives) += 1;
    ++trials;
  }
  expect(positives > 100 && negatives > 100, "unbalanced instance mix");
}

// ------------------------------------------------------------- criterion 4

void criterion4() {
  Universe u = testuniv::spread_box(1, Rat(1), 29);
  Oracle oracle(881, Rat(1), rq(1, 2), Metric::ProductLinf);
  std::mt19937_64 rng(1717);
  size_t done = 0;
  while (done < 100) {
    Point a = u.point_at(rng() % 400);
    Point b = u.point_at(rng() % 400);
    Rat d = distance_linf(a, b);
    if (d <= Rat(1) || d >= Rat(10)) continue;
    DistanceForecast fc = expected_graph_distance(a, b, Rat(1),
                                                  Metric::ProductLinf);
    std::vector<Point> path = construct_path(oracle, u, a, b, 100000);
    Int k = fc.distance;
    expect(Int(path.size()) == k + 1, "path vertex count");
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      expect(oracle.adjacent(path[i], path[i + 1]), "hop not oracle-adjacent");
      expect(distance_linf(path[i], path[i + 1]) < Rat(1), "hop too long");
    }
    expect(d >= Rat(k - 1) * Rat(1), "lower bound certificate");
    ++done;
  }
}

// ------------------------------------------------------------- criterion 5

void criterion5() {
  Universe u = Universe::box({{Rat(0), rq(3, 2)}})
                   .with_exclusion([](const Point& p) { return p.c[0] == 0; });
  BuildOptions opts;
  opts.max_pairs_per_stage = 12;
  Construction built = build_gr(u, Rat(1), 8, Metric::ProductLinf, opts);
  expect(built.stages == 8, "stage count");
  expect(check_threshold(built.snapshot), "threshold check");
  expect(!built.log.empty(), "empty construction log");
  for (const auto& rec : built.log)
    expect(replay_pair(built, rec), "pair replay");
}

// ------------------------------------------------------------- criterion 6

void criterion6() {
  Universe u = Universe::rationals(1);
  WitnessRequest req;
  req.x = Point{{Rat(0)}};
  req.A = {Point{{rq(3, 5)}}, Point{{rq(-3, 5)}}};
  req.B = {Point{{rq(7, 10)}}};
  req.delta = Rat(1);
  req.delta_prime = rq(1, 4);
  req.budget = 100000;
  std::vector<uint64_t> counts;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    WitnessResult res = find_witness(Oracle(seed, Rat(1), rq(1, 2),
                                            Metric::ProductLinf),
                                     u, req);
    expect(res.status == SearchStatus::Found, "witness not found");
    counts.push_back(res.trials);
  }
  // geometric with success 1/8: bin by trial count, merge the tail
  size_t bins = 40;
  std::vector<double> obs(bins, 0.0), expd(bins, 0.0);
  for (uint64_t c : counts) {
    size_t b = c >= bins ? bins - 1 : (size_t)(c - 1);
    obs[b] += 1.0;
  }
  double q = 7.0 / 8.0, head = 1.0;
  for (size_t b = 0; b + 1 < bins; ++b) {
    double mass = head * (1.0 / 8.0);
    expd[b] = 10000.0 * mass;
    head *= q;
  }
  expd[bins - 1] = 10000.0 * head;
  double pval = teststats::chi_square_p(obs, expd, 0);
  expect(pval > 0.01, "chi-square p-value " + std::to_string(pval));
}

// ------------------------------------------------------------- criterion 7

GoodEnumeration chain40() {
  GoodEnumeration en;
  en.delta = Rat(1);
  for (long i = 0; i < 40; ++i) {
    Rat x = Rat(i) / 2;
    Rat y = (i % 2 == 1) ? rq(1, 4) : Rat(0);
    en.points.push_back(Point{{x, y}});
  }
  en.validate();
  return en;
}

void criterion7() {
  GoodEnumeration en = chain40();
  for (long pn : {1L, 2L, 3L}) {
    Rat p = rq(pn, 4);
    Oracle G(501 + pn, Rat(1), p, Metric::EuclideanL2);
    Oracle H(601 + pn, Rat(1), p, Metric::EuclideanL2);
    CompatRun run = compatibility_mc(G, H, en, 12000, 31 + pn);
    Rat pstar = Rat(p * p) + Rat((1 - p) * (1 - p));
    expect(run.p_star == pstar, "p_star mismatch");
    Rat diff(run.pair_freq - pstar);
    Rat lhs(diff * diff * Rat((long)run.pair_trials));
    Rat rhs(Rat(9) * pstar * Rat(1 - pstar));
    expect(lhs <= rhs, "pair frequency outside 3 sigma at p=" + rat_str(p));
    if (pn == 2) {
      const CompatibilityStats& last = run.per_n.back();
      expect(last.n == 40, "final level");
      expect(last.survivors == 0, "survivors at n=40");
      expect(last.analytic_bound < rq(1, 1000000), "analytic bound size");
    }
  }
}

// ------------------------------------------------------------- criterion 8

void check_chain(const ChainReport& rep, const std::string& ctx) {
  expect(rep.certified, ctx + ": chain not certified");
  for (const auto& q : rep.inequalities)
    if (q.relation != "==")
      expect(q.margin > Rat(0), ctx + ": non-positive margin " + q.name);
}

void criterion8() {
  std::mt19937_64 rng(90210);
  auto coord = [&](long span) {
    return rq((long)(rng() % (uint64_t)(2 * span)) - span,
              1 + (long)(rng() % 6));
  };
  for (int t = 0; t < 12; ++t) {
    Point x1{{coord(15), coord(15)}};
    long dx = 35 + (long)(rng() % 30), dy = 30 + (long)(rng() % 30);
    Point x2{{Rat(x1.c[0] + Rat(dx)), Rat(x1.c[1] + Rat(dy))}};
    Rat eps = rq(1, 2 + (long)(rng() % 11));
    Claim1Config cfg = build_claim1_config(x1, x2, eps);
    cfg.validate();
    check_chain(verify_claim1_chain(cfg, rq(1, 4096)), "doubling");
  }
  for (int t = 0; t < 12; ++t) {
    Point x1{{coord(15), coord(15)}};
    long dx = 5 + (long)(rng() % 20), dy = (long)(rng() % 20);
    Point x2{{Rat(x1.c[0] + Rat(dx)), Rat(x1.c[1] + Rat(dy))}};
    Rat eps = rq(1, 2 + (long)(rng() % 11));
    Claim2Config cfg = build_claim2_config(x1, x2, eps);
    cfg.validate();
    check_chain(verify_claim2_chain(cfg, rq(1, 4096)), "amplifying");
  }
}

// ------------------------------------------------------------- criterion 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void run_cli(const std::string& sub, const fs::path& cfg, const fs::path& out) {
  std::string cmd = std::string(CLI_PATH) + " --config " + cfg.string() +
                    " --out " + out.string() + " " + sub + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  expect(rc == 0, sub + ": exit code " + std::to_string(rc));
}

void criterion9() {
  fs::path dir = fs::temp_directory_path() / "geograph_acceptance";
  fs::create_directories(dir);
  struct Job {
    std::string sub;
    std::string config;
  };
  std::vector<Job> jobs = {
      {"generate",
       R"({"dimension":1,"region":[["0","1"]],"delta":"1/2","p":"1/2","seed":11,
           "indices":[0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15],
           "output_path":"unused"})"},
      {"build-gr",
       R"({"dimension":1,"region":[["0","13/9"]],"delta":"1","steps":5,
           "budget":200000,"max_pairs_per_stage":8,"output_path":"unused"})"},
      {"witness",
       R"({"dimension":1,"delta":"1","p":"1/2","seed":5,"budget":100000,
           "x":["0"],"A":[["3/5"],["-3/5"]],"B":[["7/10"]],
           "delta_prime":"1/4","output_path":"unused"})"},
      {"distance-check",
       R"({"dimension":1,"delta":"1","p":"1/2","seed":7,"budget":100000,
           "u":["0"],"v":["5/2"],"output_path":"unused"})"},
      {"back-and-forth",
       R"({"dimension":1,"region":[["0","1"]],"region2":[["0","1/2"]],
           "delta":"1","gamma":"1/2","p":"1/3","seed":21,"seed2":22,
           "steps":12,"budget":100000,"output_path":"unused"})"},
      {"guided",
       R"({"dimension":1,"region":[["0","1"]],"region2":[["0","1/2"]],
           "delta":"1","gamma":"1","p":"1","seed":31,"seed2":32,
           "steps":30,"budget":100000,"output_path":"unused"})"},
      {"euclid-claims",
       R"({"dimension":2,"delta":"1","output_path":"unused",
           "claim1":{"x1":["0","0"],"x2":["50","0"],"epsilon":"1/10"},
           "claim2":{"x1":["0","0"],"x2":["20","0"],"epsilon":"1/10"}})"},
      {"compat-mc",
       R"({"dimension":2,"delta":"2","p":"1/2","seed":3,"seed2":4,
           "trials":500,"budget":3000000,"enumeration_size":5,
           "points":[["0","0"],["1","0"],["1","1"]],
           "output_path":"unused"})"},
  };
  for (const auto& job : jobs) {
    fs::path cfg = dir / (job.sub + ".json");
    std::ofstream(cfg) << job.config;
    fs::path o1 = dir / (job.sub + ".1.out"), o2 = dir / (job.sub + ".2.out");
    run_cli(job.sub, cfg, o1);
    run_cli(job.sub, cfg, o2);
    std::string b1 = slurp(o1), b2 = slurp(o2);
    expect(!b1.empty(), job.sub + ": empty output");
    expect(b1 == b2, job.sub + ": reruns differ");
  }

  // oracle coherence: induced snapshots restrict consistently
  Universe u = Universe::rationals(2);
  Oracle oracle(777, rq(3, 2), rq(1, 2), Metric::ProductLinf);
  std::mt19937_64 rng(555);
  for (int t = 0; t < 1000; ++t) {
    std::vector<uint64_t> idx;
    while (idx.size() < 6) {
      uint64_t i = rng() % 400;
      bool dup = false;
      for (uint64_t j : idx) dup = dup || j == i;
      if (!dup) idx.push_back(i);
    }
    Snapshot full = snapshot_of(oracle, u, idx);
    for (size_t i = 0; i < full.vertices.size(); ++i)
      for (size_t j = i + 1; j < full.vertices.size(); ++j)
        expect(full.has_edge((uint32_t)i, (uint32_t)j) ==
                   oracle.adjacent(full.vertices[i], full.vertices[j]),
               "snapshot disagrees with oracle");
    std::vector<uint64_t> sub(idx.begin(), idx.begin() + 3);
    Snapshot part = snapshot_of(oracle, u, sub);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j)
        expect(part.has_edge((uint32_t)i, (uint32_t)j) ==
                   full.has_edge((uint32_t)i, (uint32_t)j),
               "restriction property");
  }
}

// ------------------------------------------------------------ criterion 10

void criterion10() {
  for (size_t dim : {size_t{1}, size_t{2}}) {
    Universe base = testuniv::spread_box(dim, Rat(1), 29);
    Point first = base.point_at(0);
    Universe us = testuniv::spread_box(dim, Rat(1), 29, {first});
    Universe ut = testuniv::spread_box(dim, rq(3, 2), 29);
    run_unguided(dim, us, ut, 1001 + dim, 2002 + dim);
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<void()> fn;
  };
  std::vector<Criterion> list = {
      {1, "back-and-forth success, 100 steps, dims 1 and 2", criterion1},
      {2, "guided variant with induction conditions", criterion2},
      {3, "floor test vs lemma conditions on random bijections", criterion3},
      {4, "graph distance paths over random pairs", criterion4},
      {5, "deterministic construction with pair replay", criterion5},
      {6, "witness trial counts fit geometric(1/8)", criterion6},
      {7, "compatibility frequency and survival bound", criterion7},
      {8, "claim certificates with positive margins", criterion8},
      {9, "CLI determinism and oracle coherence", criterion9},
      {10, "inexhaustibility: first point deleted", criterion10},
  };
  int failures = 0;
  for (const auto& c : list) {
    std::string verdict = "PASS", detail;
    try {
      c.fn();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.what;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::printf("criterion %2d [%s] %s%s%s\n", c.number, verdict.c_str(),
                c.title, detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
