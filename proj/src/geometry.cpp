#include "geograph/geometry.hpp"

#include <algorithm>

namespace geograph {

void require_same_dim(const Point& u, const Point& v) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("dimension mismatch: " +
                                std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()));
}

bool lex_less(const Point& u, const Point& v) {
  require_same_dim(u, v);
  for (size_t i = 0; i < u.dim(); ++i) {
    if (u.c[i] != v.c[i]) return u.c[i] < v.c[i];
  }
  return false;
}

Rat distance_linf(const Point& u, const Point& v) {
  require_same_dim(u, v);
  Rat best(0);
  for (size_t i = 0; i < u.dim(); ++i) {
    Rat d = rat_abs(v.c[i] - u.c[i]);
    if (d > best) best = d;
  }
  return best;
}

Rat sq_dist(const Point& u, const Point& v) {
  require_same_dim(u, v);
  Rat s(0);
  for (size_t i = 0; i < u.dim(); ++i) {
    Rat d = v.c[i] - u.c[i];
    s += d * d;
  }
  return s;
}

int compare_l2(const Point& u, const Point& v, const Rat& threshold) {
  if (threshold < 0) throw std::invalid_argument("negative threshold");
  Rat s = sq_dist(u, v);
  Rat t2 = threshold * threshold;
  if (s < t2) return -1;
  if (s > t2) return 1;
  return 0;
}

std::pair<Rat, Rat> sqrt_interval(const Rat& s, const Rat& precision) {
  if (precision <= 0) throw std::invalid_argument("precision must be > 0");
  if (s < 0) throw std::invalid_argument("sqrt of negative value");
  if (s == 0) return {Rat(0), Rat(0)};

  // Perfect rational square: exact answer.
  if (mpz_perfect_square_p(s.get_num().get_mpz_t()) &&
      mpz_perfect_square_p(s.get_den().get_mpz_t())) {
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), s.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), s.get_den().get_mpz_t());
    Rat r(n, d);
    r.canonicalize();
    return {r, r};
  }

  // Integer bracket: floor(sqrt(floor(s))) <= sqrt(s) <= that + ceil stuff.
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
  Int root;
  mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
  Rat lo(root), hi(root + 1);
  if (lo * lo > s) lo = 0;  // s < 1 case

  while (hi - lo > precision) {
    Rat mid = (lo + hi) / 2;
    if (mid * mid <= s)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

std::pair<Rat, Rat> l2_distance_interval(const Point& u, const Point& v,
                                         const Rat& precision) {
  return sqrt_interval(sq_dist(u, v), precision);
}

Ival Ival::operator*(const Ival& o) const {
  Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
  return {std::min(std::min(a, b), std::min(c, d)),
          std::max(std::max(a, b), std::max(c, d))};
}

Ival Ival::abs() const {
  if (lo >= 0) return *this;
  if (hi <= 0) return -*this;
  return {Rat(0), std::max(Rat(-lo), hi)};
}

bool within(const Point& u, const Point& v, const Rat& threshold, Metric m) {
  if (m == Metric::ProductLinf) return distance_linf(u, v) < threshold;
  return compare_l2(u, v, threshold) < 0;
}

}  // namespace geograph
