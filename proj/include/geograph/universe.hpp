#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "geograph/geometry.hpp"

namespace geograph {

// Enumeration of one coordinate axis: either all of Q, or the rational points
// of a half-open box side [lo, hi).
//
// All of Q is ordered by height blocks h = max(|num|, den) = 1, 2, ...; inside
// a block by (den, |num|, positive first). Index 0 is 0/1.
//
// A box side is ordered by denominator blocks of t in [0,1), t = p/q reduced,
// inside a block by ascending p; the value is lo + t*(hi-lo). Index 0 is lo.
class CoordEnum {
 public:
  struct Hit {
    uint64_t index;
    Rat value;
  };

  static CoordEnum full_line();
  static CoordEnum box_side(Rat lo, Rat hi);

  bool is_full_line() const { return full_line_; }
  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }

  Rat value_at(uint64_t index) const;

  // Inverse of value_at; nullopt if the value is outside the axis domain.
  std::optional<uint64_t> index_of(const Rat& value) const;

  // Hits inside the open interval (a, b), in ascending index order.
  class Stream {
   public:
    Stream(const CoordEnum& e, Rat a, Rat b);
    // Next hit with index < index_bound, or nullopt if the next hit (if any)
    // has index >= index_bound. Call again with a larger bound to continue.
    std::optional<Hit> next(uint64_t index_bound);

   private:
    void refill();
    const CoordEnum* e_;
    Rat a_, b_;
    uint64_t block_ = 0;        // next block to expand (h or q, 1-based)
    uint64_t block_start_ = 0;  // base index of that block
    std::vector<Hit> pending_;
    size_t pos_ = 0;
  };

  Stream interval_stream(Rat a, Rat b) const { return Stream(*this, a, b); }

 private:
  CoordEnum() = default;
  // Visits every member of a block in order; f(index_in_block, value).
  void for_each_in_block(uint64_t block,
                         const std::function<void(uint64_t, Rat)>& f) const;
  uint64_t block_size(uint64_t block) const;

  bool full_line_ = true;
  Rat lo_, hi_;
  // Memoized prefix of the enumeration, extended on demand by value_at.
  mutable std::vector<Rat> value_cache_;
  mutable uint64_t cached_blocks_ = 0;
};

// A countable dense point set in Q^n (or in a rational box), enumerated by a
// fixed computable bijection index -> Point. Multidimensional indices are
// tuples of per-coordinate indices ordered by (max component, then lex).
// An optional exclusion predicate deletes points from the enumeration;
// surviving points are renumbered densely.
class Universe {
 public:
  Universe(size_t dim, std::vector<CoordEnum> coords,
           std::function<bool(const Point&)> exclude = nullptr);

  // All of Q^n.
  static Universe rationals(size_t dim);
  // Rational points of the half-open box given by per-coordinate [lo, hi).
  static Universe box(const std::vector<std::pair<Rat, Rat>>& sides);
  // Plane set {(x, map(x))} with one point per base-axis value, enumerated
  // in base order; raw indices are base indices. Region streams scan the
  // base axis and filter by the second coordinate, so sets of this shape
  // stay cheap to search. Density in the plane is up to the chosen map.
  static Universe plane_curve(CoordEnum base, CoordEnum second,
                              std::function<Rat(const Rat&)> map);

  size_t dim() const { return dim_; }
  bool has_filter() const { return static_cast<bool>(exclude_); }
  bool excluded(const Point& p) const { return exclude_ && exclude_(p); }

  Universe with_exclusion(std::function<bool(const Point&)> f) const;

  Point point_at(uint64_t index) const;

  // One coordinate of a search region: an open interval, or a single exact
  // value (the coordinate is pinned).
  struct CoordSpec {
    Rat lo, hi;
    std::optional<Rat> pinned;

    static CoordSpec interval(Rat a, Rat b) { return {std::move(a), std::move(b), std::nullopt}; }
    static CoordSpec pin(Rat v) { return {Rat(0), Rat(0), std::move(v)}; }
  };

  // Points of the universe inside an open axis-aligned box (some coordinates
  // possibly pinned), emitted in enumeration order. Dense region => the
  // stream never ends; callers budget.
  class BoxStream {
   public:
    struct IndexedPoint {
      Point point;
      uint64_t raw_index;  // position in the unfiltered enumeration
    };

    BoxStream(const Universe& u, std::vector<std::pair<Rat, Rat>> open_box);
    BoxStream(const Universe& u, const std::vector<CoordSpec>& specs);
    std::optional<Point> next();
    std::optional<IndexedPoint> next_indexed();

   private:
    void grow();
    bool advance_batch();
    const Universe* u_;
    std::vector<std::optional<CoordEnum::Stream>> streams_;
    std::vector<std::optional<CoordEnum::Hit>> pins_;
    std::vector<std::vector<CoordEnum::Hit>> hits_;
    uint64_t bound_;
    uint64_t next_m_ = 0;  // next max-index level to emit
    std::vector<std::vector<uint64_t>> batch_;  // tuples with max == level
    size_t pos_ = 0;
    std::optional<CoordSpec> curve_y_;  // second-coordinate constraint (curve mode)
  };

  BoxStream box_stream(std::vector<std::pair<Rat, Rat>> open_box) const {
    return BoxStream(*this, std::move(open_box));
  }
  BoxStream region_stream(const std::vector<CoordSpec>& specs) const {
    return BoxStream(*this, specs);
  }

  // First universe point in the open box, scanning at most `budget` stream
  // candidates. nullopt on budget exhaustion.
  std::optional<Point> first_in_box(
      const std::vector<std::pair<Rat, Rat>>& open_box, uint64_t budget) const;

  // Open L-inf ball as a box.
  std::vector<std::pair<Rat, Rat>> ball_box(const Point& center,
                                            const Rat& radius) const;

 private:
  Point point_at_raw(uint64_t raw_index) const;

  size_t dim_;
  std::vector<CoordEnum> coords_;
  std::function<bool(const Point&)> exclude_;
  std::function<Rat(const Rat&)> curve_;  // set iff built by plane_curve
  // Memoized prefix of the renumbered enumeration when an exclusion is set.
  mutable std::vector<Point> kept_cache_;
  mutable uint64_t scan_raw_ = 0;
};

uint64_t euler_phi(uint64_t n);

}  // namespace geograph
