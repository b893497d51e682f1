#pragma once

#include <vector>

#include "geograph/geometry.hpp"

namespace geograph {

// The decomposition value = anchor + q*offset + r with 0 <= r < offset.
// q is the quotient, r the representative.
struct Representation {
  Rat anchor;
  Rat offset;
  Int q;
  Rat r;

  Rat value() const { return anchor + Rat(q) * offset + r; }
};

Representation decompose(const Rat& value, const Rat& anchor,
                         const Rat& offset);

// floor(d(u,v)/step) under the given metric, exact in both cases. Under L2
// the floor of sqrt(s)/step is decided by exact integer-square comparisons.
Int floor_distance(const Point& u, const Point& v, const Rat& step, Metric m);

// A bijection between finite point sets, represented extensionally.
struct FiniteMap {
  std::vector<std::pair<Point, Point>> pairs;

  void validate() const;  // distinct sources, distinct targets, uniform dims
  size_t size() const { return pairs.size(); }
};

// Floor equality floor(d(u,v)/delta) == floor(d(f(u),f(v))/gamma) on every
// pair of the domain.
bool is_step_isometry(const FiniteMap& f, const Rat& delta, const Rat& gamma,
                      Metric metric);

// The quotient/representative characterization, one dimension: with anchors
// (v0, f(v0)) and offsets (delta, gamma),
//   (1) r(u) <= r(v)  iff  r(f(u)) <= r(f(v))   for all u, v,
//   (2) q(u) == q(f(u))                          for all u.
// Conditions (1)+(2) imply the floor equality for any finite bijection. The
// converse requires the map to be increasing and the representatives to be
// pairwise distinct; see the tests for explicit counterexamples otherwise.
bool check_lemma_conditions(const FiniteMap& f, const Rat& delta,
                            const Rat& gamma,
                            const std::pair<Point, Point>& anchor_pair);

// Coordinate-wise version (sufficient for the L-inf product metric, not
// necessary). anchor_pair supplies the per-coordinate anchors.
bool check_lemma_conditions_nd(const FiniteMap& f, const Rat& delta,
                               const Rat& gamma,
                               const std::pair<Point, Point>& anchor_pair);

// The piecewise-linear convex interval bijection [a,b) -> [a2,b2): the block
// [a+k*delta, a+k*delta+rb) maps affinely onto [a2+k*gamma, a2+k*gamma+rb2)
// and [a+rb+k*delta, a+(k+1)*delta) onto [a2+rb2+k*gamma, a2+(k+1)*gamma),
// where rb, rb2 are the end representatives of the spans. A step-isometry at
// level (delta, gamma) everywhere on its domain.
//
// End representatives use the (0, offset] convention (a span that is an exact
// multiple of the offset has r = offset), which is what makes the half-open
// block structure line up. Requires equal end quotients and, when the span
// covers more than one block, matching fullness: rb == delta iff rb2 == gamma.
class IntervalMap {
 public:
  IntervalMap(Rat a, Rat b, Rat a2, Rat b2, Rat delta, Rat gamma);

  Rat operator()(const Rat& x) const { return eval(x); }
  Rat eval(const Rat& x) const;
  Rat eval_inverse(const Rat& y) const;
  IntervalMap inverse() const;

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  const Rat& a2() const { return a2_; }
  const Rat& b2() const { return b2_; }

 private:
  Rat a_, b_, a2_, b2_, delta_, gamma_;
  Rat rb_, rb2_;  // end representatives, in (offset] convention
};

// End-of-span decomposition: span = q*offset + r with 0 < r <= offset.
std::pair<Int, Rat> end_rep(const Rat& span, const Rat& offset);

}  // namespace geograph
