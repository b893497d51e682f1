#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geograph/geometry.hpp"
#include "geograph/universe.hpp"

namespace geograph {

// One fixed outcome of LARG(V, delta, p) over an infinite universe,
// represented intensionally: the edge verdict for a pair is a pure function
// of (seed, canonical pair key, delta, p, metric). The Bernoulli draw comes
// from a keyed hash of the pair's exact serialization, compared against p by
// integer arithmetic; no floating point is involved anywhere.
struct Oracle {
  uint64_t seed = 0;
  Rat delta;
  Rat p;  // in [0,1]; the endpoints are admitted for testing
  Metric metric = Metric::ProductLinf;

  Oracle() = default;
  Oracle(uint64_t seed_, Rat delta_, Rat p_, Metric m);

  // Edge verdict. Symmetric, irreflexive (u == v is rejected), and false
  // whenever d(u,v) >= delta, decided exactly.
  bool adjacent(const Point& u, const Point& v) const;

  // The Bernoulli part alone (no threshold gate); exposed for tests.
  bool coin(const Point& u, const Point& v) const;
};

// Deterministic 64-bit hash of a byte string, keyed by seed.
uint64_t keyed_hash(uint64_t seed, const std::string& bytes);

struct Snapshot {
  size_t dimension = 0;
  Metric metric = Metric::ProductLinf;
  Rat delta;
  Rat p;
  uint64_t seed = 0;
  bool constructed = false;  // true for deterministically built graphs
  std::vector<Point> vertices;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // i < j, sorted, unique

  bool has_edge(uint32_t i, uint32_t j) const;
  void add_edge(uint32_t i, uint32_t j);

  std::string to_json() const;
  static Snapshot from_json(const std::string& text);
};

// Finite LARG sample on explicit points. points must be pairwise distinct.
// Agrees with Oracle::adjacent on every pair.
Snapshot sample_larg(const std::vector<Point>& points, const Rat& delta,
                     const Rat& p, uint64_t seed, Metric metric,
                     bool parallel = true);

// Reference implementation: plain serial pair loop. Kept for testing and
// benchmarking against the OpenMP version.
Snapshot sample_larg_serial(const std::vector<Point>& points, const Rat& delta,
                            const Rat& p, uint64_t seed, Metric metric);

// Induced subgraph of the infinite outcome on the given universe indices.
Snapshot snapshot_of(const Oracle& oracle, const Universe& universe,
                     const std::vector<uint64_t>& indices);

}  // namespace geograph
