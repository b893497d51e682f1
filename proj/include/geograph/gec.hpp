#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geograph/oracle.hpp"
#include "geograph/universe.hpp"

namespace geograph {

// Every edge of the snapshot has length strictly below delta.
bool check_threshold(const Snapshot& snap);

enum class SearchStatus { Found, PoolExhausted, BudgetExhausted };

// Witness query: find z with d(x,z) < delta_prime, adjacent to every point
// of A and to no point of B.  A and B must lie inside the open delta-ball
// around x; delta_prime defaults to the slack left by the farthest of them.
struct WitnessRequest {
  Point x;
  std::vector<Point> A;
  std::vector<Point> B;
  Rat delta;
  std::optional<Rat> delta_prime;
  uint64_t budget = 100000;

  // Effective search radius: min(delta - max d(x,u), delta_prime).
  Rat radius(Metric m) const;
  void validate(Metric m) const;
};

struct WitnessResult {
  SearchStatus status = SearchStatus::PoolExhausted;
  std::optional<Point> witness;
  uint64_t trials = 0;
};

// Search the universe in enumeration order for a witness realized by the
// oracle.  Every candidate drawn from the ball counts as one trial.
WitnessResult find_witness(const Oracle& oracle, const Universe& universe,
                           const WitnessRequest& req);

// Same query against a finite snapshot; candidates are the snapshot's own
// vertices in index order.
WitnessResult find_witness(const Snapshot& snap, const WitnessRequest& req);

// ------------------------------------------------------------ construction

// One resolved pair (A, x) in the staged construction: witness z was joined
// to exactly A.  Indices refer to the snapshot's vertex list.
struct PairRecord {
  uint32_t stage;
  uint32_t x;
  std::vector<uint32_t> A;
  uint32_t z;
  uint64_t trials;
};

struct BuildOptions {
  uint64_t witness_budget = 100000;
  // Pairs resolved per stage, in (max sigma-key, x, A) order.  The full pair
  // list grows as 2^|V| and is not tractable beyond the first few stages.
  size_t max_pairs_per_stage = 48;
  // Stage ordering: sigma(t) is the universe index of the vertex introduced
  // at stage t (1-based).  Defaults to the identity, sigma(t) = t - 1.
  std::function<uint64_t(uint32_t)> sigma;
};

struct Construction {
  Snapshot snapshot;
  // Raw enumeration index of each vertex; the order key used for pairs.
  std::vector<uint64_t> sigma_keys;
  // Vertex count at the start of each stage (stage t at position t - 1).
  std::vector<uint32_t> stage_sizes;
  std::vector<PairRecord> log;
  uint32_t stages = 0;
};

// Deterministic staged construction of a geometric delta-graph.  At stage t
// every unresolved pair (A, x) over the stage-start vertex set, up to the
// per-stage cap, receives a fresh witness z with d(z, x) < min(1/t, delta)
// whose delta-ball cuts the stage-start vertices exactly where x's does.
Construction build_gr(const Universe& universe, const Rat& delta,
                      uint32_t stages, Metric metric = Metric::ProductLinf,
                      const BuildOptions& opts = {});

// Replay one logged pair against the finished snapshot: the witness must be
// correctly joined (adjacent to A, non-adjacent to the rest of the
// stage-start ball around x) and satisfy the distance clauses.
bool replay_pair(const Construction& built, const PairRecord& rec);

// ------------------------------------------------------- sampled e.c. check

struct BallEcReport {
  uint64_t trials = 0;
  uint64_t successes = 0;
  uint64_t pool_size = 0;
};

// Sample random disjoint (A, B) from a finite pool of universe points inside
// B_delta(center) and look for correctly joined witnesses in the same pool.
BallEcReport check_ball_ec(const Oracle& oracle, const Universe& universe,
                           const Point& center, uint64_t trials,
                           uint64_t sample_seed, size_t pool_target = 40,
                           size_t max_side = 3);

// --------------------------------------------------------- graph distance

struct boundary_indecision : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DistanceForecast {
  Int distance;        // floor(d / delta) + 1
  bool at_boundary;    // d is an exact multiple of delta
};

// Predicted graph distance between non-adjacent vertices.  At an exact
// multiple of delta the prediction under the product metric is still
// floor + 1; under the Euclidean metric no prediction is made and
// boundary_indecision is thrown.
DistanceForecast expected_graph_distance(const Point& u, const Point& v,
                                         const Rat& delta, Metric m);

// Build an explicit u-v path of the predicted length through oracle-realized
// edges (product metric only).  Returns the full vertex sequence, u first.
std::vector<Point> construct_path(const Oracle& oracle,
                                  const Universe& universe, const Point& u,
                                  const Point& v, uint64_t budget = 100000);

}  // namespace geograph
