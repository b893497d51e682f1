#pragma once

#include <compare>
#include <vector>

#include "geograph/rational.hpp"

namespace geograph {

enum class Metric { ProductLinf, EuclideanL2 };

struct Point {
  std::vector<Rat> c;

  Point() = default;
  explicit Point(std::vector<Rat> coords) : c(std::move(coords)) {}
  Point(std::initializer_list<Rat> coords) : c(coords) {}

  size_t dim() const { return c.size(); }
  const Rat& operator[](size_t i) const { return c[i]; }
  Rat& operator[](size_t i) { return c[i]; }

  bool operator==(const Point& o) const { return c == o.c; }
  bool operator!=(const Point& o) const { return c != o.c; }
};

// Coordinate-lexicographic order; used for canonical pair keys.
bool lex_less(const Point& u, const Point& v);

// max_i |v_i - u_i|, exact. Throws on dimension mismatch.
Rat distance_linf(const Point& u, const Point& v);

// sum_i (v_i - u_i)^2, exact.
Rat sq_dist(const Point& u, const Point& v);

// Compares the Euclidean distance d(u,v) with threshold >= 0 by exact
// comparison of squares. Returns -1, 0, +1 for <, =, >.
int compare_l2(const Point& u, const Point& v, const Rat& threshold);

// Certified bracket lo <= sqrt(s) <= hi with hi - lo <= precision, for s >= 0.
// Exact when s is a perfect rational square. Bisection from an integer bracket.
std::pair<Rat, Rat> sqrt_interval(const Rat& s, const Rat& precision);

// Enclosing interval for the Euclidean distance, width <= precision.
std::pair<Rat, Rat> l2_distance_interval(const Point& u, const Point& v,
                                         const Rat& precision);

// Closed rational interval with outward-rounded arithmetic; the workhorse for
// certifying inequality chains that involve square roots.
struct Ival {
  Rat lo, hi;

  Ival() : lo(0), hi(0) {}
  Ival(Rat x) : lo(x), hi(x) {}
  Ival(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Ival: lo > hi");
  }

  Rat width() const { return hi - lo; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }

  Ival operator+(const Ival& o) const { return {lo + o.lo, hi + o.hi}; }
  Ival operator-(const Ival& o) const { return {lo - o.hi, hi - o.lo}; }
  Ival operator*(const Ival& o) const;
  Ival operator-() const { return {-hi, -lo}; }

  // True only when the relation is certified.
  bool certainly_lt(const Ival& o) const { return hi < o.lo; }
  bool certainly_le(const Ival& o) const { return hi <= o.lo; }

  static Ival sqrt_of(const Rat& s, const Rat& precision) {
    auto [l, h] = sqrt_interval(s, precision);
    return {l, h};
  }

  Ival abs() const;
};

void require_same_dim(const Point& u, const Point& v);

// Distance under the requested metric, strictly-below-threshold test, exact
// under both metrics (L2 via squared comparison).
bool within(const Point& u, const Point& v, const Rat& threshold, Metric m);

}  // namespace geograph
