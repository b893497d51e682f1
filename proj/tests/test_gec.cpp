#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geograph/gec.hpp"

using namespace geograph;

TEST_CASE("witness request validation and radius") {
  WitnessRequest req;
  req.x = Point{Rat(0)};
  req.A = {Point{Rat(1, 4)}};
  req.B = {Point{Rat(-1, 2)}};
  req.delta = Rat(1);
  CHECK_NOTHROW(req.validate(Metric::ProductLinf));
  // slack left by the farthest listed point: 1 - 1/2
  CHECK(req.radius(Metric::ProductLinf) == Rat(1, 2));
  req.delta_prime = Rat(1, 8);
  CHECK(req.radius(Metric::ProductLinf) == Rat(1, 8));

  WitnessRequest bad = req;
  bad.A.push_back(Point{Rat(2)});  // outside the ball
  CHECK_THROWS_AS(bad.validate(Metric::ProductLinf), std::invalid_argument);
  WitnessRequest overlap = req;
  overlap.B.push_back(overlap.A[0]);
  CHECK_THROWS_AS(overlap.validate(Metric::ProductLinf), std::invalid_argument);
}

TEST_CASE("find_witness realizes g.e.c. clauses against the oracle") {
  Universe u = Universe::rationals(1);
  Oracle o(17, Rat(1), Rat(1, 2), Metric::ProductLinf);
  WitnessRequest req;
  req.x = Point{Rat(0)};
  req.A = {Point{Rat(1, 3)}, Point{Rat(-1, 4)}};
  req.B = {Point{Rat(1, 2)}};
  req.delta = Rat(1);
  req.budget = 200000;
  WitnessResult res = find_witness(o, u, req);
  REQUIRE(res.status == SearchStatus::Found);
  const Point& z = *res.witness;
  CHECK(within(req.x, z, req.radius(Metric::ProductLinf),
               Metric::ProductLinf));
  for (const auto& a : req.A) {
    CHECK(o.adjacent(z, a));
    CHECK(within(z, a, Rat(1), Metric::ProductLinf));
  }
  for (const auto& b : req.B) CHECK_FALSE(o.adjacent(z, b));
  CHECK(res.trials > 0);
}

TEST_CASE("find_witness with p = 1 finds the first in-ball fresh point") {
  Universe u = Universe::rationals(1);
  Oracle o(3, Rat(1), Rat(1), Metric::ProductLinf);
  WitnessRequest req;
  req.x = Point{Rat(0)};
  req.A = {Point{Rat(1, 2)}};
  req.B = {};  // with p = 1 any nonempty B is unsatisfiable
  req.delta = Rat(1);
  WitnessResult res = find_witness(o, u, req);
  REQUIRE(res.status == SearchStatus::Found);
  CHECK(o.adjacent(*res.witness, req.A[0]));
}

TEST_CASE("snapshot witness search scans the vertex list") {
  Universe u = Universe::rationals(1);
  std::vector<Point> pts;
  for (uint64_t i = 0; i < 60; ++i) pts.push_back(u.point_at(i));
  Snapshot snap = sample_larg(pts, Rat(2), Rat(1, 2), 5, Metric::ProductLinf);
  WitnessRequest req;
  req.x = pts[0];
  req.A = {pts[1]};
  req.B = {pts[2]};
  req.delta = Rat(2);
  req.validate(snap.metric);
  WitnessResult res = find_witness(snap, req);
  if (res.status == SearchStatus::Found) {
    Oracle o(5, Rat(2), Rat(1, 2), Metric::ProductLinf);
    CHECK(o.adjacent(*res.witness, pts[1]));
    CHECK_FALSE(o.adjacent(*res.witness, pts[2]));
  }
}

TEST_CASE("check_threshold") {
  std::vector<Point> pts = {Point{Rat(0)}, Point{Rat(1, 2)}, Point{Rat(5)}};
  Snapshot s = sample_larg(pts, Rat(1), Rat(1), 1, Metric::ProductLinf);
  CHECK(check_threshold(s));
  s.add_edge(0, 2);  // distance 5 >= delta
  CHECK_FALSE(check_threshold(s));
}

TEST_CASE("build_gr produces a geometric delta-graph, replay confirms") {
  // bounded side: no vertex can acquire exact-threshold neighbors on both
  // sides, so the witness region never degenerates to a point; the closed
  // corner is dropped as well, else a vertex at corner + delta strands it
  Universe u = Universe::box({{Rat(0), Rat(3, 2)}})
                   .with_exclusion([](const Point& p) { return p.c[0] == 0; });
  BuildOptions opts;
  opts.max_pairs_per_stage = 12;
  Construction built = build_gr(u, Rat(1), 5, Metric::ProductLinf, opts);
  CHECK(built.stages == 5);
  CHECK(check_threshold(built.snapshot));
  CHECK(built.snapshot.constructed);
  CHECK_FALSE(built.log.empty());
  for (const auto& rec : built.log) CHECK(replay_pair(built, rec));
  // stage sizes strictly grow: every resolved pair adds a fresh vertex
  for (size_t i = 0; i + 1 < built.stage_sizes.size(); ++i)
    CHECK(built.stage_sizes[i] < built.stage_sizes[i + 1]);
}

TEST_CASE("build_gr is deterministic") {
  Universe u = Universe::box({{Rat(0), Rat(3, 2)}})
                   .with_exclusion([](const Point& p) { return p.c[0] == 0; });
  BuildOptions opts;
  opts.max_pairs_per_stage = 8;
  Construction a = build_gr(u, Rat(1), 4, Metric::ProductLinf, opts);
  Construction b = build_gr(u, Rat(1), 4, Metric::ProductLinf, opts);
  CHECK(a.snapshot.to_json() == b.snapshot.to_json());
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].x == b.log[i].x);
    CHECK(a.log[i].z == b.log[i].z);
    CHECK(a.log[i].A == b.log[i].A);
  }
}

TEST_CASE("check_ball_ec finds witnesses inside a dense ball") {
  Universe u = Universe::rationals(1);
  Oracle o(23, Rat(1), Rat(1, 2), Metric::ProductLinf);
  BallEcReport rep = check_ball_ec(o, u, Point{Rat(0)}, 30, 77);
  CHECK(rep.trials == 30);
  CHECK(rep.pool_size >= 30);
  // most random (A, B) queries succeed within a 40-point pool
  CHECK(rep.successes > 15);
}

TEST_CASE("expected_graph_distance under the product metric") {
  Point u{Rat(0)};
  Point v{Rat(5, 2)};
  auto fc = expected_graph_distance(u, v, Rat(1), Metric::ProductLinf);
  CHECK(fc.distance == 3);
  CHECK_FALSE(fc.at_boundary);
  auto exact = expected_graph_distance(u, Point{Rat(3)}, Rat(1),
                                       Metric::ProductLinf);
  CHECK(exact.distance == 4);
  CHECK(exact.at_boundary);
  // adjacent-range pairs are out of scope
  CHECK_THROWS_AS(
      expected_graph_distance(u, Point{Rat(1, 2)}, Rat(1), Metric::ProductLinf),
      std::invalid_argument);
}

TEST_CASE("expected_graph_distance under L2 refuses exact multiples") {
  Point u{Rat(0), Rat(0)};
  Point v{Rat(1), Rat(1)};  // d = sqrt 2
  auto fc = expected_graph_distance(u, v, Rat(1), Metric::EuclideanL2);
  CHECK(fc.distance == 2);
  Point w{Rat(3), Rat(4)};  // d = 5, an exact multiple of 1
  CHECK_THROWS_AS(expected_graph_distance(u, w, Rat(1), Metric::EuclideanL2),
                  boundary_indecision);
}

TEST_CASE("construct_path realizes the predicted graph distance") {
  Universe u = Universe::rationals(1);
  Oracle o(29, Rat(1), Rat(1, 2), Metric::ProductLinf);
  Point a{Rat(0)};
  Point b{Rat(5, 2)};
  auto path = construct_path(o, u, a, b, 400000);
  REQUIRE(path.size() == 4);  // floor(5/2) + 1 = 3 edges
  CHECK(path.front() == a);
  CHECK(path.back() == b);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    CHECK(o.adjacent(path[i], path[i + 1]));
    CHECK(within(path[i], path[i + 1], Rat(1), Metric::ProductLinf));
  }
}

TEST_CASE("construct_path on an adjacent pair is the edge itself") {
  Universe u = Universe::rationals(1);
  Oracle o(31, Rat(1), Rat(1), Metric::ProductLinf);
  Point a{Rat(0)};
  Point b{Rat(1, 2)};
  auto path = construct_path(o, u, a, b, 1000);
  REQUIRE(path.size() == 2);
}
