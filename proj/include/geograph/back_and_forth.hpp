#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geograph/oracle.hpp"
#include "geograph/step_isometry.hpp"
#include "geograph/universe.hpp"

namespace geograph {

// One lazily-realized geometric graph: adjacency oracle plus the enumeration
// of its vertex set. The oracle's delta is the graph's level.
struct InfiniteGraphHandle {
  Oracle oracle;
  const Universe* universe = nullptr;
};

// Growing position-paired vertex lists with the map built so far. Entry 0 is
// the anchor pair.
struct PartialIsomorphism {
  std::vector<Point> source_list;
  std::vector<Point> target_list;
  Rat delta;  // source level
  Rat gamma;  // target level

  const Point& v0() const { return source_list.front(); }
  const Point& w0() const { return target_list.front(); }
  std::optional<size_t> index_of_source(const Point& p) const;
  std::optional<size_t> index_of_target(const Point& p) const;
};

enum class Direction { Forth, Back };

struct ExtensionStep {
  Direction direction;
  Point new_point;       // the point being mapped (source for Forth)
  std::vector<Rat> a, b; // interval bounds per coordinate, representatives
  Point chosen_x;        // first enumerated point of I
  Point witness;         // the image (Forth) or preimage (Back) added
  uint64_t trials = 0;   // stream candidates examined (x and witness search)
};

PartialIsomorphism make_base(const InfiniteGraphHandle& G,
                             const InfiniteGraphHandle& H);

// Extends the map with an image for v. nullopt if v is already mapped.
// Throws budget_exhausted when the candidate budget runs out and
// invariant_violation when a maintained property fails.
std::optional<ExtensionStep> extend_forth(PartialIsomorphism& state,
                                          const InfiniteGraphHandle& G,
                                          const InfiniteGraphHandle& H,
                                          const Point& v, uint64_t budget);

// Mirror image: extends the map with a preimage for w.
std::optional<ExtensionStep> extend_back(PartialIsomorphism& state,
                                         const InfiniteGraphHandle& G,
                                         const InfiniteGraphHandle& H,
                                         const Point& w, uint64_t budget);

struct RunResult {
  PartialIsomorphism state;
  std::vector<ExtensionStep> log;
};

// Strict alternation over the two enumerations, skipping mapped points;
// `steps` counts actual extensions.
RunResult run_back_and_forth(const InfiniteGraphHandle& G,
                             const InfiniteGraphHandle& H, uint64_t steps,
                             uint64_t budget);

// External bijective step-isometry guiding the construction (1-D).
struct GuidedMap {
  std::function<Rat(const Rat&)> forward;
  std::function<Rat(const Rat&)> inverse;
};

// Guided variant: the image candidate is x = F(v) itself, and the interval
// bounds run over both realized images r(f(u)) and guide values r(F(u)).
RunResult run_guided(const InfiniteGraphHandle& G,
                     const InfiniteGraphHandle& H, const GuidedMap& F,
                     uint64_t steps, uint64_t budget);

struct VerifyReport {
  uint64_t pairs_checked = 0;
  uint64_t adjacency_violations = 0;
  uint64_t floor_violations = 0;
  bool ok() const { return adjacency_violations == 0 && floor_violations == 0; }
};

// Exhaustive post-hoc certification: oracle adjacency agreement and the
// floor equality on every mapped pair.
VerifyReport verify_partial(const PartialIsomorphism& state,
                            const InfiniteGraphHandle& G,
                            const InfiniteGraphHandle& H);

// Machine-readable transcript, one JSON object per line.
std::string transcript_jsonl(const std::vector<ExtensionStep>& log);

}  // namespace geograph
