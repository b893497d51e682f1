#include "geograph/step_isometry.hpp"

#include <algorithm>

namespace geograph {

Representation decompose(const Rat& value, const Rat& anchor,
                         const Rat& offset) {
  if (offset <= 0) throw std::invalid_argument("decompose: offset must be > 0");
  Representation rep;
  rep.anchor = anchor;
  rep.offset = offset;
  rep.q = floor_div(value - anchor, offset);
  rep.r = value - anchor - Rat(rep.q) * offset;
  return rep;
}

Int floor_distance(const Point& u, const Point& v, const Rat& step, Metric m) {
  if (step <= 0) throw std::invalid_argument("floor_distance: step must be > 0");
  if (m == Metric::ProductLinf) return floor_div(distance_linf(u, v), step);
  // floor(sqrt(s)/step) = floor(sqrt(s/step^2)) = isqrt(floor(s/step^2)).
  Rat t = sq_dist(u, v) / (step * step);
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
  Int k;
  mpz_sqrt(k.get_mpz_t(), fl.get_mpz_t());
  return k;
}

void FiniteMap::validate() const {
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first.dim() != pairs[i].second.dim() ||
        (i > 0 && pairs[i].first.dim() != pairs[0].first.dim()))
      throw std::invalid_argument("finite map: dimension mismatch");
    for (size_t j = i + 1; j < pairs.size(); ++j) {
      if (pairs[i].first == pairs[j].first)
        throw std::invalid_argument("finite map: duplicate source");
      if (pairs[i].second == pairs[j].second)
        throw std::invalid_argument("finite map: duplicate target");
    }
  }
}

bool is_step_isometry(const FiniteMap& f, const Rat& delta, const Rat& gamma,
                      Metric metric) {
  f.validate();
  for (size_t i = 0; i < f.pairs.size(); ++i) {
    for (size_t j = i + 1; j < f.pairs.size(); ++j) {
      Int s = floor_distance(f.pairs[i].first, f.pairs[j].first, delta, metric);
      Int t =
          floor_distance(f.pairs[i].second, f.pairs[j].second, gamma, metric);
      if (s != t) return false;
    }
  }
  return true;
}

namespace {

// Per-coordinate check of conditions (1) and (2).
bool lemma_conditions_coord(const FiniteMap& f, size_t coord, const Rat& delta,
                            const Rat& gamma, const Rat& v0, const Rat& w0) {
  std::vector<Representation> src, tgt;
  src.reserve(f.pairs.size());
  tgt.reserve(f.pairs.size());
  for (const auto& [s, t] : f.pairs) {
    src.push_back(decompose(s.c[coord], v0, delta));
    tgt.push_back(decompose(t.c[coord], w0, gamma));
  }
  for (size_t i = 0; i < src.size(); ++i) {
    if (src[i].q != tgt[i].q) return false;  // condition (2)
    for (size_t j = 0; j < src.size(); ++j) {
      if ((src[i].r <= src[j].r) != (tgt[i].r <= tgt[j].r)) return false;
    }
  }
  return true;
}

}  // namespace

bool check_lemma_conditions(const FiniteMap& f, const Rat& delta,
                            const Rat& gamma,
                            const std::pair<Point, Point>& anchor_pair) {
  f.validate();
  if (f.pairs.empty()) return true;
  if (f.pairs[0].first.dim() != 1)
    throw std::invalid_argument("check_lemma_conditions: expects 1-D points");
  bool anchored = false;
  for (const auto& [s, t] : f.pairs)
    if (s == anchor_pair.first && t == anchor_pair.second) anchored = true;
  if (!anchored)
    throw std::invalid_argument("check_lemma_conditions: anchor not in map");
  return lemma_conditions_coord(f, 0, delta, gamma, anchor_pair.first.c[0],
                                anchor_pair.second.c[0]);
}

bool check_lemma_conditions_nd(const FiniteMap& f, const Rat& delta,
                               const Rat& gamma,
                               const std::pair<Point, Point>& anchor_pair) {
  f.validate();
  if (f.pairs.empty()) return true;
  size_t n = f.pairs[0].first.dim();
  if (anchor_pair.first.dim() != n || anchor_pair.second.dim() != n)
    throw std::invalid_argument("check_lemma_conditions_nd: dim mismatch");
  for (size_t j = 0; j < n; ++j) {
    if (!lemma_conditions_coord(f, j, delta, gamma, anchor_pair.first.c[j],
                                anchor_pair.second.c[j]))
      return false;
  }
  return true;
}

std::pair<Int, Rat> end_rep(const Rat& span, const Rat& offset) {
  if (span <= 0 || offset <= 0)
    throw std::invalid_argument("end_rep: span and offset must be > 0");
  Int q = floor_div(span, offset);
  Rat r = span - Rat(q) * offset;
  if (r == 0) {
    q -= 1;
    r = offset;
  }
  return {q, r};
}

IntervalMap::IntervalMap(Rat a, Rat b, Rat a2, Rat b2, Rat delta, Rat gamma)
    : a_(std::move(a)),
      b_(std::move(b)),
      a2_(std::move(a2)),
      b2_(std::move(b2)),
      delta_(std::move(delta)),
      gamma_(std::move(gamma)) {
  if (a_ >= b_ || a2_ >= b2_)
    throw std::invalid_argument("interval map: empty interval");
  if (delta_ <= 0 || gamma_ <= 0)
    throw std::invalid_argument("interval map: offsets must be > 0");
  auto [q1, r1] = end_rep(b_ - a_, delta_);
  auto [q2, r2] = end_rep(b2_ - a2_, gamma_);
  if (q1 != q2)
    throw std::invalid_argument("interval map: end quotients differ");
  // A lone block maps affinely whatever its fill; with further blocks a
  // full/partial mismatch would leave a gap in the image.
  if (q1 >= 1 && (r1 == delta_) != (r2 == gamma_))
    throw std::invalid_argument("interval map: full-block mismatch");
  rb_ = r1;
  rb2_ = r2;
}

Rat IntervalMap::eval(const Rat& x) const {
  if (x < a_ || x >= b_)
    throw std::invalid_argument("interval map: argument outside [a,b)");
  Representation rep = decompose(x, a_, delta_);
  if (rep.r <= rb_)
    return a2_ + Rat(rep.q) * gamma_ + rb2_ * rep.r / rb_;
  return a2_ + Rat(rep.q + 1) * gamma_ -
         (gamma_ - rb2_) * (delta_ - rep.r) / (delta_ - rb_);
}

IntervalMap IntervalMap::inverse() const {
  return IntervalMap(a2_, b2_, a_, b_, gamma_, delta_);
}

Rat IntervalMap::eval_inverse(const Rat& y) const { return inverse().eval(y); }

}  // namespace geograph
