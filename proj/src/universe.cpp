#include "geograph/universe.hpp"

#include <algorithm>
#include <numeric>

namespace geograph {

uint64_t euler_phi(uint64_t n) {
  uint64_t result = n;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// ---------------------------------------------------------------- CoordEnum

CoordEnum CoordEnum::full_line() {
  CoordEnum e;
  e.full_line_ = true;
  return e;
}

CoordEnum CoordEnum::box_side(Rat lo, Rat hi) {
  if (lo >= hi) throw std::invalid_argument("box side: lo must be < hi");
  CoordEnum e;
  e.full_line_ = false;
  e.lo_ = std::move(lo);
  e.hi_ = std::move(hi);
  return e;
}

uint64_t CoordEnum::block_size(uint64_t block) const {
  if (full_line_) return block == 1 ? 3 : 4 * euler_phi(block);
  return block == 1 ? 1 : euler_phi(block);
}

void CoordEnum::for_each_in_block(
    uint64_t block, const std::function<void(uint64_t, Rat)>& f) const {
  uint64_t pos = 0;
  if (full_line_) {
    const uint64_t h = block;
    if (h == 1) {
      f(pos++, Rat(0));
      f(pos++, Rat(1));
      f(pos++, Rat(-1));
      return;
    }
    for (uint64_t d = 1; d <= h; ++d) {
      if (d < h) {
        if (std::gcd(h, d) != 1) continue;
        Rat v{Int(h), Int(d)};
        f(pos++, v);
        f(pos++, -v);
      } else {
        for (uint64_t m = 1; m < h; ++m) {
          if (std::gcd(m, h) != 1) continue;
          Rat v{Int(m), Int(h)};
          f(pos++, v);
          f(pos++, -v);
        }
      }
    }
    return;
  }
  const uint64_t q = block;
  const Rat span = hi_ - lo_;
  if (q == 1) {
    f(pos++, lo_);
    return;
  }
  for (uint64_t p = 1; p < q; ++p) {
    if (std::gcd(p, q) != 1) continue;
    f(pos++, lo_ + span * Rat(Int(p), Int(q)));
  }
}

Rat CoordEnum::value_at(uint64_t index) const {
  while (value_cache_.size() <= index) {
    ++cached_blocks_;
    for_each_in_block(cached_blocks_,
                      [&](uint64_t, Rat v) { value_cache_.push_back(std::move(v)); });
  }
  return value_cache_[index];
}

std::optional<uint64_t> CoordEnum::index_of(const Rat& value) const {
  uint64_t block;
  if (full_line_) {
    Int num = value.get_num();
    Int den = value.get_den();
    Int h = std::max(Int(abs(num)), den);
    if (!h.fits_ulong_p()) return std::nullopt;
    block = h.get_ui();
    if (block < 1) block = 1;
  } else {
    if (value < lo_ || value >= hi_) return std::nullopt;
    if (value == lo_) return 0;
    Rat t = (value - lo_) / (hi_ - lo_);
    Int den = t.get_den();
    if (!den.fits_ulong_p()) return std::nullopt;
    block = den.get_ui();
  }
  uint64_t start = 0;
  for (uint64_t b = 1; b < block; ++b) start += block_size(b);
  std::optional<uint64_t> found;
  for_each_in_block(block, [&](uint64_t i, Rat v) {
    if (v == value) found = start + i;
  });
  return found;
}

CoordEnum::Stream::Stream(const CoordEnum& e, Rat a, Rat b)
    : e_(&e), a_(std::move(a)), b_(std::move(b)) {
  if (a_ >= b_) throw std::invalid_argument("interval stream: empty interval");
}

namespace {

std::vector<uint64_t> distinct_primes(uint64_t n) {
  std::vector<uint64_t> ps;
  for (uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

// Integers in [1, x] coprime to the radical with the given prime set.
uint64_t coprime_count(uint64_t x, const std::vector<uint64_t>& ps) {
  uint64_t total = 0;
  const size_t k = ps.size();
  for (size_t mask = 0; mask < (size_t(1) << k); ++mask) {
    uint64_t d = 1;
    bool odd = false;
    for (size_t j = 0; j < k; ++j)
      if (mask & (size_t(1) << j)) {
        d *= ps[j];
        odd = !odd;
      }
    total += odd ? -(x / d) : x / d;
  }
  return total;
}

}  // namespace

void CoordEnum::Stream::refill() {
  ++block_;
  if (block_ > 1) block_start_ += e_->block_size(block_ - 1);
  pending_.clear();
  pos_ = 0;
  if (e_->full_line_) {
    e_->for_each_in_block(block_, [&](uint64_t i, Rat v) {
      if (v > a_ && v < b_) pending_.push_back({block_start_ + i, std::move(v)});
    });
    return;
  }
  const uint64_t q = block_;
  if (q == 1) {
    if (e_->lo_ > a_ && e_->lo_ < b_) pending_.push_back({block_start_, e_->lo_});
    return;
  }
  // Numerators p with lo + span * p / q inside (a, b): solve for p directly
  // instead of materializing the whole block.
  const Rat span = e_->hi_ - e_->lo_;
  Rat plo = (a_ - e_->lo_) * Rat(Int(q)) / span;
  Rat phi = (b_ - e_->lo_) * Rat(Int(q)) / span;
  Int p_lo_z, p_hi_z;
  mpz_fdiv_q(p_lo_z.get_mpz_t(), plo.get_num_mpz_t(), plo.get_den_mpz_t());
  p_lo_z += 1;  // strict lower bound
  mpz_cdiv_q(p_hi_z.get_mpz_t(), phi.get_num_mpz_t(), phi.get_den_mpz_t());
  p_hi_z -= 1;  // strict upper bound
  if (p_lo_z < 1) p_lo_z = 1;
  if (p_hi_z > Int(q - 1)) p_hi_z = Int(q - 1);
  if (p_lo_z > p_hi_z) return;
  const uint64_t p_lo = p_lo_z.get_ui(), p_hi = p_hi_z.get_ui();
  const auto primes = distinct_primes(q);
  for (uint64_t p = p_lo; p <= p_hi; ++p) {
    bool ok = true;
    for (uint64_t pr : primes)
      if (p % pr == 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    uint64_t i = coprime_count(p - 1, primes);
    pending_.push_back(
        {block_start_ + i, e_->lo_ + span * Rat(Int(p), Int(q))});
  }
}

std::optional<CoordEnum::Hit> CoordEnum::Stream::next(uint64_t index_bound) {
  for (;;) {
    if (pos_ < pending_.size()) {
      if (pending_[pos_].index >= index_bound) return std::nullopt;
      return pending_[pos_++];
    }
    if (block_start_ + (block_ ? e_->block_size(block_) : 0) >= index_bound &&
        block_ > 0)
      return std::nullopt;
    refill();
  }
}

// ----------------------------------------------------------------- Universe

Universe::Universe(size_t dim, std::vector<CoordEnum> coords,
                   std::function<bool(const Point&)> exclude)
    : dim_(dim), coords_(std::move(coords)), exclude_(std::move(exclude)) {
  if (dim_ == 0 || coords_.size() != dim_)
    throw std::invalid_argument("universe: bad dimension");
}

Universe Universe::rationals(size_t dim) {
  std::vector<CoordEnum> cs(dim, CoordEnum::full_line());
  return Universe(dim, std::move(cs));
}

Universe Universe::box(const std::vector<std::pair<Rat, Rat>>& sides) {
  std::vector<CoordEnum> cs;
  cs.reserve(sides.size());
  for (const auto& [lo, hi] : sides) cs.push_back(CoordEnum::box_side(lo, hi));
  return Universe(sides.size(), std::move(cs));
}

Universe Universe::plane_curve(CoordEnum base, CoordEnum second,
                               std::function<Rat(const Rat&)> map) {
  Universe u(2, {std::move(base), std::move(second)});
  u.curve_ = std::move(map);
  return u;
}

Universe Universe::with_exclusion(std::function<bool(const Point&)> f) const {
  Universe u(dim_, coords_, std::move(f));
  u.curve_ = curve_;
  return u;
}

namespace {

using u128 = unsigned __int128;

u128 ipow(uint64_t base, size_t exp) {
  u128 r = 1;
  for (size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Unranks `index` into an n-tuple of coordinate indices under the
// (max component, then lex) order.
std::vector<uint64_t> unrank_tuple(uint64_t index, size_t n) {
  if (n == 1) return {index};
  uint64_t M = 0;
  while (ipow(M + 1, n) <= index) ++M;
  u128 offset = index - ipow(M, n);
  std::vector<uint64_t> digits(n);
  bool used = false;
  for (size_t i = 0; i < n; ++i) {
    size_t r = n - 1 - i;
    if (used) {
      u128 c = ipow(M + 1, r);
      digits[i] = static_cast<uint64_t>(offset / c);
      offset %= c;
    } else {
      u128 c0 = ipow(M + 1, r) - ipow(M, r);
      if (c0 > 0 && offset < c0 * M) {
        digits[i] = static_cast<uint64_t>(offset / c0);
        offset %= c0;
      } else {
        offset -= c0 * M;
        digits[i] = M;
        used = true;
      }
    }
  }
  return digits;
}

// Inverse of unrank_tuple.
uint64_t rank_tuple(const std::vector<uint64_t>& digits) {
  size_t n = digits.size();
  if (n == 1) return digits[0];
  uint64_t M = *std::max_element(digits.begin(), digits.end());
  u128 rank = ipow(M, n);
  bool used = false;
  for (size_t i = 0; i < n; ++i) {
    size_t r = n - 1 - i;
    uint64_t v = digits[i];
    if (used) {
      rank += u128(v) * ipow(M + 1, r);
    } else {
      u128 c0 = ipow(M + 1, r) - ipow(M, r);
      rank += u128(std::min(v, M)) * c0;
      if (v == M) used = true;
    }
  }
  return static_cast<uint64_t>(rank);
}

}  // namespace

Point Universe::point_at_raw(uint64_t raw_index) const {
  Point p;
  p.c.reserve(dim_);
  if (curve_) {
    Rat x = coords_[0].value_at(raw_index);
    Rat y = curve_(x);
    p.c.push_back(std::move(x));
    p.c.push_back(std::move(y));
    return p;
  }
  auto tuple = unrank_tuple(raw_index, dim_);
  for (size_t j = 0; j < dim_; ++j) p.c.push_back(coords_[j].value_at(tuple[j]));
  return p;
}

Point Universe::point_at(uint64_t index) const {
  if (!exclude_) return point_at_raw(index);
  while (kept_cache_.size() <= index) {
    Point p = point_at_raw(scan_raw_++);
    if (!exclude_(p)) kept_cache_.push_back(std::move(p));
  }
  return kept_cache_[index];
}

// ----------------------------------------------------------------- BoxStream

namespace {
constexpr uint64_t kInitialBound = 16;
constexpr uint64_t kMaxBound = uint64_t(1) << 31;
constexpr size_t kMaxTuples = size_t(1) << 22;
}  // namespace

Universe::BoxStream::BoxStream(const Universe& u,
                               std::vector<std::pair<Rat, Rat>> open_box)
    : u_(&u), bound_(0) {
  if (open_box.size() != u_->dim())
    throw std::invalid_argument("box stream: dimension mismatch");
  if (u_->curve_) {
    if (open_box[1].first >= open_box[1].second)
      throw std::invalid_argument("interval stream: empty interval");
    curve_y_ = CoordSpec::interval(open_box[1].first, open_box[1].second);
    open_box.resize(1);
  }
  pins_.resize(open_box.size());
  for (size_t j = 0; j < open_box.size(); ++j)
    streams_.emplace_back(u_->coords_[j].interval_stream(
        open_box[j].first, open_box[j].second));
  hits_.resize(open_box.size());
}

Universe::BoxStream::BoxStream(const Universe& u,
                               const std::vector<CoordSpec>& specs)
    : u_(&u), bound_(0) {
  if (specs.size() != u_->dim())
    throw std::invalid_argument("box stream: dimension mismatch");
  size_t n = specs.size();
  if (u_->curve_) {
    if (!specs[1].pinned && specs[1].lo >= specs[1].hi)
      throw std::invalid_argument("interval stream: empty interval");
    curve_y_ = specs[1];
    n = 1;
  }
  pins_.resize(n);
  streams_.resize(n);
  for (size_t j = 0; j < n; ++j) {
    if (specs[j].pinned) {
      auto idx = u_->coords_[j].index_of(*specs[j].pinned);
      if (!idx)
        throw std::invalid_argument("box stream: pinned value not on the axis");
      pins_[j] = CoordEnum::Hit{*idx, *specs[j].pinned};
    } else {
      streams_[j].emplace(
          u_->coords_[j].interval_stream(specs[j].lo, specs[j].hi));
    }
  }
  hits_.resize(n);
}

void Universe::BoxStream::grow() {
  bound_ = bound_ == 0 ? kInitialBound : bound_ * 4;
  for (size_t j = 0; j < streams_.size(); ++j) {
    if (pins_[j]) {
      if (hits_[j].empty() && pins_[j]->index < bound_)
        hits_[j].push_back(*pins_[j]);
      continue;
    }
    while (auto h = streams_[j]->next(bound_)) hits_[j].push_back(*h);
  }
}

// Builds the next nonempty batch of index tuples, in (max index, lex) order:
// all tuples whose largest coordinate index equals one level m, generated one
// level at a time so the cross product is never materialized.
bool Universe::BoxStream::advance_batch() {
  const size_t n = hits_.size();
  for (;;) {
    // Smallest present index >= next_m_, and the least feasible level.
    std::optional<uint64_t> m;
    uint64_t floor_m = 0;
    for (size_t j = 0; j < n; ++j) {
      if (hits_[j].empty()) return false;
      floor_m = std::max(floor_m, hits_[j].front().index);
      auto it = std::lower_bound(
          hits_[j].begin(), hits_[j].end(), next_m_,
          [](const CoordEnum::Hit& h, uint64_t v) { return h.index < v; });
      if (it != hits_[j].end() && (!m || it->index < *m)) m = it->index;
    }
    if (!m) return false;
    if (*m < floor_m) {
      next_m_ = floor_m;
      continue;
    }
    // Per coordinate: positions with index <= m, and whether m itself occurs.
    std::vector<size_t> upto(n);
    std::vector<bool> has_m(n, false);
    for (size_t j = 0; j < n; ++j) {
      auto it = std::upper_bound(
          hits_[j].begin(), hits_[j].end(), *m,
          [](uint64_t v, const CoordEnum::Hit& h) { return v < h.index; });
      upto[j] = size_t(it - hits_[j].begin());
      has_m[j] = upto[j] > 0 && hits_[j][upto[j] - 1].index == *m;
    }
    batch_.clear();
    pos_ = 0;
    std::vector<uint64_t> cur(n);
    auto rec = [&](auto&& self, size_t j, bool used_m) -> void {
      if (j == n) {
        batch_.push_back(cur);
        return;
      }
      bool must_use = !used_m;
      for (size_t k = j + 1; k < n && must_use; ++k) must_use = !has_m[k];
      size_t from = must_use ? (has_m[j] ? upto[j] - 1 : upto[j]) : 0;
      for (size_t p = from; p < upto[j]; ++p) {
        cur[j] = p;
        self(self, j + 1, used_m || (has_m[j] && p == upto[j] - 1));
      }
      if (batch_.size() > kMaxTuples)
        throw budget_exhausted("box stream: tuple count limit reached");
    };
    rec(rec, 0, false);
    next_m_ = *m + 1;
    if (!batch_.empty()) return true;
  }
}

std::optional<Universe::BoxStream::IndexedPoint> Universe::BoxStream::next_indexed() {
  for (;;) {
    if (pos_ < batch_.size()) {
      const auto& t = batch_[pos_++];
      if (curve_y_) {
        const auto& hit = hits_[0][t[0]];
        Rat y = u_->curve_(hit.value);
        bool ok = curve_y_->pinned ? y == *curve_y_->pinned
                                   : y > curve_y_->lo && y < curve_y_->hi;
        if (!ok) continue;
        Point p;
        p.c = {hit.value, std::move(y)};
        if (u_->excluded(p)) continue;
        return IndexedPoint{std::move(p), hit.index};
      }
      Point p;
      std::vector<uint64_t> digits(t.size());
      p.c.reserve(t.size());
      for (size_t j = 0; j < t.size(); ++j) {
        p.c.push_back(hits_[j][t[j]].value);
        digits[j] = hits_[j][t[j]].index;
      }
      if (u_->excluded(p)) continue;
      return IndexedPoint{std::move(p), rank_tuple(digits)};
    }
    if (advance_batch()) continue;
    if (bound_ >= kMaxBound) return std::nullopt;
    grow();
  }
}

std::optional<Point> Universe::BoxStream::next() {
  if (auto ip = next_indexed()) return std::move(ip->point);
  return std::nullopt;
}

std::optional<Point> Universe::first_in_box(
    const std::vector<std::pair<Rat, Rat>>& open_box, uint64_t budget) const {
  BoxStream s(*this, open_box);
  for (uint64_t i = 0; i < std::max<uint64_t>(budget, 1); ++i) {
    if (auto p = s.next()) return p;
  }
  return std::nullopt;
}

std::vector<std::pair<Rat, Rat>> Universe::ball_box(const Point& center,
                                                    const Rat& radius) const {
  if (center.dim() != dim_)
    throw std::invalid_argument("ball_box: dimension mismatch");
  std::vector<std::pair<Rat, Rat>> box;
  box.reserve(dim_);
  for (size_t j = 0; j < dim_; ++j)
    box.emplace_back(center.c[j] - radius, center.c[j] + radius);
  return box;
}

}  // namespace geograph
