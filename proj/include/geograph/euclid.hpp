#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geograph/geometry.hpp"
#include "geograph/oracle.hpp"
#include "geograph/step_isometry.hpp"
#include "geograph/universe.hpp"

namespace geograph {

// |d(x,y) - d(f(x),f(y))| enclosed by exact interval arithmetic.
struct DiscrepancyReport {
  std::pair<Point, Point> pair;
  std::pair<Point, Point> image_pair;
  Ival D;
};

DiscrepancyReport discrepancy(const FiniteMap& f, const Point& x,
                              const Point& y, const Rat& precision);

// One certified inequality: lhs REL rhs, with exact interval sides and the
// certified gap. Conditional records hold under stated extremal hypotheses
// about hypothetical image points, not about constructed ones.
struct InequalityRecord {
  std::string name;
  std::string relation;  // "<", "<=", ">=", ">"
  Ival lhs, rhs;
  Rat margin;
  bool conditional = false;
};

struct ChainReport {
  bool certified = false;
  std::vector<InequalityRecord> inequalities;
};

// Discrepancy-doubling quadrilateral: x1, x3, x2, x4 with all four sides in
// (k - xi, k), where m = d(x1,x2)/2 > 20 and k = floor(m) + 1.
struct Claim1Config {
  Point x1, x2, x3, x4;
  Rat epsilon;
  Int k;
  Rat xi;

  // Exact squared-distance checks of every constraint; throws on violation.
  void validate() const;
};

// Places x3, x4 near the intersections of the radius-~k circles about x1 and
// x2 (symmetric across the x1x2 line), certifying all four side lengths by
// exact squared comparisons. Requires d(x1,x2) > 40 and 0 < epsilon < 1.
Claim1Config build_claim1_config(const Point& x1, const Point& x2,
                                 const Rat& epsilon);

// Certifies r^2 >= k^2 - eps^2 - m^2, r^2 <= 2m+1 <= m^2/4, r > eps, and the
// conditional image-side chain k^2 - (m + eps/2)^2 <= (r - eps)^2 together
// with the resulting diameter drop d(x3',x4') <= d(x3,x4) - 2 eps.
ChainReport verify_claim1_chain(const Claim1Config& cfg, const Rat& precision);

// Distance-amplifying hexagon at k = 40: sides (1,3),(1,5),(2,4),(2,6) in
// (k, k+c), sides (3,5),(4,6) in (k-c, k), and d34 < d56 < d34 + c.
struct Claim2Config {
  Point x1, x2, x3, x4, x5, x6;
  Rat epsilon, c;
  Int k;

  void validate() const;
};

// Requires d(x1,x2) < 40 and 0 < epsilon < 1. c = epsilon/32 satisfies both
// constraints 10c/3 + c^2 <= 10 epsilon and c < (2 - sqrt 3) epsilon / 8.
Claim2Config build_claim2_config(const Point& x1, const Point& x2,
                                 const Rat& epsilon);

ChainReport verify_claim2_chain(const Claim2Config& cfg, const Rat& precision);

// The extremal rectangle half-span: s^2 = (k+c)^2 - (k-c)^2/4
//                                       = 3/4 (k^2 + (10/3) k c + c^2).
Rat claim2_extremal_s_squared(const Rat& k, const Rat& c);

// Ordering with consecutive Euclidean gaps < delta and a non-collinear first
// triple; auxiliary universe points appear as connectors.
struct GoodEnumeration {
  std::vector<Point> points;
  Rat delta;

  void validate() const;  // exact gap and determinant checks
};

GoodEnumeration good_enumeration(const std::vector<Point>& points,
                                 const Rat& delta, const Universe& universe,
                                 uint64_t budget);

struct CompatibilityStats {
  uint32_t n = 0;
  uint64_t trials = 0;
  uint64_t survivors = 0;
  Rat empirical_rate;
  Rat p_star;
  Rat analytic_bound;  // n^3 (p*)^(n-1), exact
};

struct CompatRun {
  Rat p_star;
  uint64_t pair_trials = 0;
  uint64_t pair_compatible = 0;
  Rat pair_freq;
  std::vector<CompatibilityStats> per_n;
};

// Monte Carlo over candidate isometries. Each trial draws a random exact
// rational isometry of the plane (rational rotation + translation, optional
// reflection); a pair (v_i, v_{i+1}) vs its image is compatible when the G
// and H adjacency verdicts agree. A trial survives at level n when all n-1
// consecutive pairs are compatible. Distances are preserved exactly, and all
// enumeration gaps are < delta, so each pair is compatible with probability
// p* = p^2 + (1-p)^2. Requires matching delta and p, distinct seeds.
CompatRun compatibility_mc(const Oracle& G, const Oracle& H,
                           const GoodEnumeration& en, uint64_t trials,
                           uint64_t seed, bool parallel = true);

// Serial reference loop; compatibility_mc(parallel=true) must agree exactly.
CompatRun compatibility_mc_serial(const Oracle& G, const Oracle& H,
                                  const GoodEnumeration& en, uint64_t trials,
                                  uint64_t seed);

// First `count` enumerated points of a 2-D universe pairwise avoiding exact
// Euclidean distance delta (squared-equality test).
std::vector<Point> delta_free_filter(const Universe& universe,
                                     const Rat& delta, size_t count);

std::string certificate_json(const ChainReport& report,
                             const std::string& claim_name);
std::string compat_csv(const std::vector<CompatibilityStats>& rows);

}  // namespace geograph
