#include "geograph/euclid.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geograph {

namespace {

using nlohmann::ordered_json;

Rat rsq(const Rat& x) { return x * x; }

// Rational t > 0 with lo2 < t^2 < hi2; lo2 may be negative, hi2 > 0.
Rat pick_sqrt(const Rat& lo2, const Rat& hi2) {
  if (hi2 <= 0 || lo2 >= hi2)
    throw std::invalid_argument("pick_sqrt: empty target interval");
  Rat base = lo2 > 0 ? lo2 : Rat(0);
  Rat target = (base + hi2) / 2;
  Rat prec = (hi2 - base) / 16;
  for (int it = 0; it < 200; ++it) {
    Rat t = sqrt_interval(target, prec).second;
    if (t > 0 && rsq(t) > lo2 && rsq(t) < hi2) return t;
    prec /= 4;
  }
  throw invariant_violation("pick_sqrt: refinement failed");
}

Point translate(const Point& base, const Rat& s, const Point& dir) {
  Point out = base;
  for (size_t i = 0; i < out.dim(); ++i) out.c[i] += s * dir.c[i];
  return out;
}

Rat sq_side(const Point& a, const Point& b) { return sq_dist(a, b); }

void require_open_sq(const std::string& what, const Rat& d2, const Rat& lo,
                     const Rat& hi) {
  // lo < d < hi by squared comparison; lo may be negative (then vacuous).
  if (lo > 0 && d2 <= rsq(lo))
    throw invariant_violation(what + ": lower bound violated, margin " +
                              rat_str(d2 - rsq(lo)));
  if (d2 >= rsq(hi))
    throw invariant_violation(what + ": upper bound violated, margin " +
                              rat_str(rsq(hi) - d2));
}

InequalityRecord make_le(const std::string& name, Ival lhs, Ival rhs,
                         bool conditional = false) {
  InequalityRecord r;
  r.name = name;
  r.relation = "<=";
  r.margin = rhs.lo - lhs.hi;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.conditional = conditional;
  return r;
}

InequalityRecord make_ge(const std::string& name, Ival lhs, Ival rhs,
                         bool conditional = false) {
  InequalityRecord r;
  r.name = name;
  r.relation = ">=";
  r.margin = lhs.lo - rhs.hi;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.conditional = conditional;
  return r;
}

Rat rat_pow(Rat x, unsigned long e) {
  Rat out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(x.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(x.get_mpq_t()), e);
  return out;
}

}  // namespace

DiscrepancyReport discrepancy(const FiniteMap& f, const Point& x,
                              const Point& y, const Rat& precision) {
  if (precision <= 0) throw std::invalid_argument("discrepancy: precision");
  const Point* xi = nullptr;
  const Point* yi = nullptr;
  for (const auto& [a, b] : f.pairs) {
    if (a == x) xi = &b;
    if (a == y) yi = &b;
  }
  if (!xi || !yi)
    throw std::invalid_argument("discrepancy: point outside the map domain");
  Rat quarter = precision / 4;
  auto [dl, dh] = l2_distance_interval(x, y, quarter);
  auto [il, ih] = l2_distance_interval(*xi, *yi, quarter);
  DiscrepancyReport rep;
  rep.pair = {x, y};
  rep.image_pair = {*xi, *yi};
  rep.D = (Ival(dl, dh) - Ival(il, ih)).abs();
  return rep;
}

void Claim1Config::validate() const {
  for (const Point* p : {&x1, &x2, &x3, &x4})
    if (p->dim() != 2) throw std::invalid_argument("claim1: dimension != 2");
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("claim1: epsilon outside (0,1)");
  if (compare_l2(x1, x2, Rat(40)) <= 0)
    throw std::invalid_argument("claim1: d(x1,x2) <= 40");
  Rat msq = sq_side(x1, x2) / 4;
  if (msq <= 400) throw invariant_violation("claim1: m <= 20");
  if (k != floor_distance(x1, x2, Rat(2), Metric::EuclideanL2) + 1)
    throw invariant_violation("claim1: k != floor(m)+1");
  Rat kr(k);
  if (xi <= 0 || xi >= rsq(epsilon) / (2 * kr))
    throw invariant_violation("claim1: xi outside (0, eps^2/(2k))");
  const Point* pts[4] = {&x1, &x2, &x3, &x4};
  for (int i : {0, 1})
    for (int j : {2, 3})
      require_open_sq("claim1 side", sq_side(*pts[i], *pts[j]), kr - xi, kr);
}

Claim1Config build_claim1_config(const Point& x1, const Point& x2,
                                 const Rat& epsilon) {
  if (x1.dim() != 2 || x2.dim() != 2)
    throw std::invalid_argument("claim1: points must lie in Q^2");
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("claim1: epsilon outside (0,1)");
  if (compare_l2(x1, x2, Rat(40)) <= 0)
    throw std::invalid_argument("claim1: requires d(x1,x2) > 40");

  Claim1Config cfg;
  cfg.x1 = x1;
  cfg.x2 = x2;
  cfg.epsilon = epsilon;
  cfg.k = floor_distance(x1, x2, Rat(2), Metric::EuclideanL2) + 1;
  Rat kr(cfg.k);
  cfg.xi = rsq(epsilon) / (4 * kr);

  // x3, x4 on the perpendicular bisector of x1x2, at parameter t chosen so
  // every side lands strictly inside (k - xi, k). All arithmetic exact.
  Rat s = sq_side(x1, x2);
  Rat msq = s / 4;
  Rat lo2 = (rsq(kr - cfg.xi) - msq) / s;
  Rat hi2 = (rsq(kr) - msq) / s;
  Rat t = pick_sqrt(lo2, hi2);

  Point mid{(x1[0] + x2[0]) / 2, (x1[1] + x2[1]) / 2};
  Point perp{x1[1] - x2[1], x2[0] - x1[0]};
  cfg.x3 = translate(mid, t, perp);
  cfg.x4 = translate(mid, -t, perp);
  cfg.validate();
  return cfg;
}

ChainReport verify_claim1_chain(const Claim1Config& cfg,
                                const Rat& precision) {
  cfg.validate();
  if (precision <= 0) throw std::invalid_argument("claim1: precision");

  Rat kr(cfg.k);
  Rat msq = sq_side(cfg.x1, cfg.x2) / 4;
  Rat r2 = sq_side(cfg.x3, cfg.x4) / 4;
  const Rat& e = cfg.epsilon;

  ChainReport rep;
  Rat prec = precision / 8;
  for (int pass = 0; pass < 8; ++pass) {
    rep.inequalities.clear();
    Ival m_iv = Ival::sqrt_of(msq, prec);
    Ival r_iv = Ival::sqrt_of(r2, prec);

    rep.inequalities.push_back(
        make_ge("lower_chain", Ival(r2), Ival(rsq(kr) - rsq(e) - msq)));
    rep.inequalities.push_back(
        make_le("upper_chain_a", Ival(r2), Ival(2) * m_iv + Ival(1)));
    rep.inequalities.push_back(
        make_le("upper_chain_b", Ival(2) * m_iv + Ival(1), Ival(msq / 4)));
    rep.inequalities.push_back(
        make_ge("r_exceeds_epsilon", Ival(r2), Ival(rsq(e))));
    Ival mp = m_iv + Ival(e / 2);
    Ival rm = r_iv - Ival(e);
    rep.inequalities.push_back(make_le("image_side", Ival(rsq(kr)) - mp * mp,
                                       rm * rm, /*conditional=*/true));

    rep.certified = true;
    for (const auto& q : rep.inequalities)
      if (q.margin <= 0) rep.certified = false;
    if (rep.certified) break;
    prec /= 16;
  }
  return rep;
}

Rat claim2_extremal_s_squared(const Rat& k, const Rat& c) {
  return rsq(k + c) - rsq(k - c) / 4;
}

void Claim2Config::validate() const {
  for (const Point* p : {&x1, &x2, &x3, &x4, &x5, &x6})
    if (p->dim() != 2) throw std::invalid_argument("claim2: dimension != 2");
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("claim2: epsilon outside (0,1)");
  if (k != 40) throw invariant_violation("claim2: k != 40");
  if (x1 == x2) throw std::invalid_argument("claim2: x1 == x2");
  if (compare_l2(x1, x2, Rat(40)) >= 0)
    throw std::invalid_argument("claim2: d(x1,x2) >= 40");
  Rat kr(k);
  if (c <= 0 || Rat(10) * c / 3 + rsq(c) > kr * epsilon / 4)
    throw invariant_violation("claim2: c violates 10c/3 + c^2 <= k eps/4");
  // c < (2 - sqrt 3) eps / 8  <=>  2 - 8c/eps > 0 and (2 - 8c/eps)^2 > 3.
  Rat g = 2 - 8 * c / epsilon;
  if (g <= 0 || rsq(g) <= 3)
    throw invariant_violation("claim2: c violates c < (2 - sqrt3) eps/8");

  const Point* pts[6] = {&x1, &x2, &x3, &x4, &x5, &x6};
  const std::pair<int, int> upper[] = {{0, 2}, {0, 4}, {1, 3}, {1, 5}};
  const std::pair<int, int> lower[] = {{2, 4}, {3, 5}};
  for (auto [i, j] : upper)
    require_open_sq("claim2 upper side", sq_side(*pts[i], *pts[j]), kr,
                    kr + c);
  for (auto [i, j] : lower)
    require_open_sq("claim2 lower side", sq_side(*pts[i], *pts[j]), kr - c,
                    kr);
  Rat d34 = sq_side(x3, x4), d56 = sq_side(x5, x6);
  if (d34 >= d56) throw invariant_violation("claim2: d34 < d56 violated");
  // d56 < d34 + c by squared arithmetic: either the gap of squares is at
  // most c^2, or ((d56^2 - d34^2 - c^2) / 2c)^2 < d34^2.
  Rat gap = d56 - d34 - rsq(c);
  if (gap > 0 && rsq(gap / (2 * c)) >= d34)
    throw invariant_violation("claim2: d56 < d34 + c violated");
}

Claim2Config build_claim2_config(const Point& x1, const Point& x2,
                                 const Rat& epsilon) {
  if (x1.dim() != 2 || x2.dim() != 2)
    throw std::invalid_argument("claim2: points must lie in Q^2");
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("claim2: epsilon outside (0,1)");
  if (x1 == x2) throw std::invalid_argument("claim2: x1 == x2");
  if (compare_l2(x1, x2, Rat(40)) >= 0)
    throw std::invalid_argument("claim2: requires d(x1,x2) < 40");

  Claim2Config cfg;
  cfg.x1 = x1;
  cfg.x2 = x2;
  cfg.epsilon = epsilon;
  cfg.c = epsilon / 32;
  cfg.k = 40;
  Rat kr(40);
  const Rat& c = cfg.c;

  // Frame: w = x2 - x1, pw its rotation by 90 degrees; every candidate point
  // is x_i + (rational) * w + (rational) * pw, so everything stays in Q^2.
  // Squared lengths pick up the factor S = |w|^2 = m^2.
  Point w{x2[0] - x1[0], x2[1] - x1[1]};
  Point pw{-w.c[1], w.c[0]};
  Rat S = sq_side(x1, x2);
  Rat m_ub = sqrt_interval(S, Rat(1, 16)).second;

  Rat delta0 = c / (4 * m_ub);
  for (int attempt = 0; attempt < 40; ++attempt) {
    Rat dlt = delta0 / Rat(Int(1) << attempt);
    // rho = tau + tau': the rectangle height; (dlt^2 + rho^2) S in
    // ((k-c)^2, k^2) certifies both short sides.
    Rat rho = pick_sqrt(rsq(kr - c) / S - rsq(dlt), rsq(kr) / S - rsq(dlt));
    Rat tau = rho / 2;
    // sigma in the lower half of its window leaves room for sigma + dlt.
    Rat lo_s = rsq(kr) / S - rsq(tau);
    Rat hi_s = rsq(kr + c) / S - rsq(tau);
    Rat sigma = pick_sqrt(lo_s, lo_s + (hi_s - lo_s) / 2);
    Rat sigma2 = sigma + dlt;
    if (rsq(sigma2) >= hi_s) continue;

    cfg.x3 = translate(translate(x1, -sigma, w), -tau, pw);
    cfg.x4 = translate(translate(x2, sigma, w), -tau, pw);
    cfg.x5 = translate(translate(x1, -sigma2, w), tau, pw);
    cfg.x6 = translate(translate(x2, sigma2, w), tau, pw);
    cfg.validate();
    return cfg;
  }
  throw invariant_violation("claim2: perturbation search failed");
}

ChainReport verify_claim2_chain(const Claim2Config& cfg,
                                const Rat& precision) {
  cfg.validate();
  if (precision <= 0) throw std::invalid_argument("claim2: precision");

  Rat kr(cfg.k);
  const Rat& e = cfg.epsilon;
  const Rat& c = cfg.c;
  Rat msq = sq_side(cfg.x1, cfg.x2);
  Rat d34sq = sq_side(cfg.x3, cfg.x4);
  Rat d56sq = sq_side(cfg.x5, cfg.x6);

  ChainReport rep;
  Rat prec = precision / 8;
  for (int pass = 0; pass < 8; ++pass) {
    rep.inequalities.clear();
    Ival m_iv = Ival::sqrt_of(msq, prec);
    Ival s3 = Ival::sqrt_of(Rat(3), prec);
    Ival d34 = Ival::sqrt_of(d34sq, prec);
    Ival d56 = Ival::sqrt_of(d56sq, prec);

    rep.inequalities.push_back(make_le(
        "c_constraint_a", Ival(Rat(10) * c / 3 + rsq(c)), Ival(kr * e / 4)));
    rep.inequalities.push_back(make_le(
        "c_constraint_b", Ival(c), (Ival(2) - s3) * Ival(e / 8)));

    Ival src_bound = m_iv + s3 * Ival(kr) + Ival(e / 4);
    rep.inequalities.push_back(make_le("source_chain_34", d34, src_bound));
    rep.inequalities.push_back(make_le("source_chain_56", d56, src_bound));

    Ival img_bound = s3 * Ival(kr) + m_iv + Ival(e);
    rep.inequalities.push_back(make_ge("image_side_34", img_bound,
                                       d34 + Ival(3 * e / 4), true));
    rep.inequalities.push_back(make_ge("image_side_56", img_bound,
                                       d56 + Ival(3 * e / 4), true));

    rep.certified = true;
    for (const auto& q : rep.inequalities)
      if (q.margin <= 0) rep.certified = false;
    if (rep.certified) break;
    prec /= 16;
  }

  // Exact identity behind the rectangle computation, recorded with zero
  // margin: (k+c)^2 - (k-c)^2/4 == 3/4 (k^2 + (10/3) k c + c^2).
  Rat lhs = rsq(kr + c) - rsq(kr - c) / 4;
  Rat rhs = Rat(3, 4) * (rsq(kr) + Rat(10, 3) * kr * c + rsq(c));
  if (lhs != rhs) throw invariant_violation("claim2: s^2 identity broken");
  InequalityRecord id;
  id.name = "extremal_s_identity";
  id.relation = "==";
  id.lhs = Ival(lhs);
  id.rhs = Ival(rhs);
  id.margin = 0;
  rep.inequalities.push_back(std::move(id));
  return rep;
}

void GoodEnumeration::validate() const {
  if (points.size() < 3)
    throw invariant_violation("good enumeration: fewer than 3 points");
  for (const auto& p : points)
    if (p.dim() != 2)
      throw std::invalid_argument("good enumeration: dimension != 2");
  const Point &a = points[0], &b = points[1], &d = points[2];
  Rat det = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]);
  if (det == 0)
    throw invariant_violation("good enumeration: first triple collinear");
  for (size_t i = 0; i + 1 < points.size(); ++i)
    if (compare_l2(points[i], points[i + 1], delta) >= 0)
      throw invariant_violation("good enumeration: gap >= delta at " +
                                std::to_string(i));
}

namespace {

bool contains_point(const std::vector<Point>& v, const Point& p) {
  return std::find(v.begin(), v.end(), p) != v.end();
}

bool non_collinear(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) != 0;
}

}  // namespace

GoodEnumeration good_enumeration(const std::vector<Point>& points,
                                 const Rat& delta, const Universe& universe,
                                 uint64_t budget) {
  if (universe.dim() != 2)
    throw std::invalid_argument("good enumeration: universe must be 2-D");
  if (delta <= 0) throw std::invalid_argument("good enumeration: delta <= 0");
  for (const auto& p : points)
    if (p.dim() != 2)
      throw std::invalid_argument("good enumeration: dimension != 2");

  std::vector<Point> ins;
  for (const auto& p : points)
    if (!contains_point(ins, p)) ins.push_back(p);

  uint64_t spent = 0;
  auto charge = [&](uint64_t n) {
    spent += n;
    if (spent > budget)
      throw budget_exhausted("good enumeration: budget exhausted");
  };

  // Seed triple: pairwise within delta and non-collinear, drawn from the
  // input when possible, otherwise augmented with nearby universe points.
  std::vector<Point> out;
  for (size_t i = 0; out.empty() && i < ins.size(); ++i)
    for (size_t j = i + 1; out.empty() && j < ins.size(); ++j)
      for (size_t l = j + 1; out.empty() && l < ins.size(); ++l) {
        if (!non_collinear(ins[i], ins[j], ins[l])) continue;
        if (compare_l2(ins[i], ins[j], delta) >= 0) continue;
        if (compare_l2(ins[i], ins[l], delta) >= 0) continue;
        if (compare_l2(ins[j], ins[l], delta) >= 0) continue;
        out = {ins[i], ins[j], ins[l]};
      }
  if (out.empty()) {
    Point base = ins.empty() ? universe.point_at(0) : ins[0];
    out = {base};
    auto stream = universe.box_stream(universe.ball_box(base, delta / 2));
    while (out.size() < 3) {
      auto cand = stream.next();
      charge(1);
      if (!cand) throw budget_exhausted("good enumeration: seed search");
      if (compare_l2(base, *cand, delta / 2) >= 0) continue;
      if (contains_point(out, *cand)) continue;
      if (out.size() == 2 && !non_collinear(out[0], out[1], *cand)) continue;
      out.push_back(*cand);
    }
  }

  // Append the remaining input in order, splicing in connector paths from
  // the universe whenever the gap reaches delta.
  for (const auto& tgt : ins) {
    if (contains_point(out, tgt)) continue;
    while (compare_l2(out.back(), tgt, delta) >= 0) {
      const Point& cur = out.back();
      Rat d2 = sq_dist(cur, tgt);
      Rat d_ub = sqrt_interval(d2, delta / 8).second;
      Rat lambda = 3 * delta / (4 * d_ub);
      Point z0{cur[0] + lambda * (tgt[0] - cur[0]),
               cur[1] + lambda * (tgt[1] - cur[1])};
      auto stream = universe.box_stream(universe.ball_box(z0, delta / 8));
      bool placed = false;
      while (!placed) {
        auto cand = stream.next();
        charge(1);
        if (!cand)
          throw budget_exhausted("good enumeration: connector search");
        if (*cand == tgt || contains_point(out, *cand)) continue;
        if (compare_l2(cur, *cand, delta) >= 0) continue;
        out.push_back(*cand);
        placed = true;
      }
    }
    out.push_back(tgt);
  }

  GoodEnumeration g{std::move(out), delta};
  g.validate();
  return g;
}

namespace {

// Exact rational isometry of the plane: optional reflection, then rotation
// by a rational point of the unit circle, then translation.
struct RatIsometry {
  Rat cosv, sinv, tx, ty;
  bool reflect = false;

  Point apply(const Point& p) const {
    Rat x = p[0], y = reflect ? Rat(-p[1]) : p[1];
    return Point{cosv * x - sinv * y + tx, sinv * x + cosv * y + ty};
  }
};

RatIsometry sample_isometry(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 1000);
  Rat t(num(rng), den(rng));
  t.canonicalize();
  Rat one_p = 1 + t * t;
  RatIsometry f;
  f.cosv = (1 - t * t) / one_p;
  f.sinv = 2 * t / one_p;
  std::uniform_int_distribution<long> tr(-8000, 8000);
  std::uniform_int_distribution<long> trd(1, 100);
  f.tx = Rat(tr(rng), trd(rng));
  f.ty = Rat(tr(rng), trd(rng));
  f.tx.canonicalize();
  f.ty.canonicalize();
  f.reflect = (rng() & 1) != 0;
  return f;
}

struct CompatAccum {
  std::vector<uint64_t> surv;  // index i: alive through pairs 0..i
  uint64_t pair_total = 0;
  uint64_t pair_compatible = 0;

  explicit CompatAccum(size_t pairs) : surv(pairs, 0) {}

  void merge(const CompatAccum& o) {
    for (size_t i = 0; i < surv.size(); ++i) surv[i] += o.surv[i];
    pair_total += o.pair_total;
    pair_compatible += o.pair_compatible;
  }
};

void run_trial(const Oracle& G, const Oracle& H,
               const std::vector<Point>& pts, uint64_t seed, uint64_t trial,
               CompatAccum& acc) {
  std::mt19937_64 rng(keyed_hash(seed, "trial:" + std::to_string(trial)));
  RatIsometry f = sample_isometry(rng);
  std::vector<Point> img;
  img.reserve(pts.size());
  for (const auto& p : pts) img.push_back(f.apply(p));
  bool alive = true;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    bool compat =
        G.adjacent(pts[i], pts[i + 1]) == H.adjacent(img[i], img[i + 1]);
    acc.pair_total += 1;
    acc.pair_compatible += compat;
    alive = alive && compat;
    acc.surv[i] += alive;
  }
}

CompatRun finish_run(const Oracle& G, const CompatAccum& acc, size_t npoints,
                     uint64_t trials) {
  CompatRun run;
  run.p_star = rsq(G.p) + rsq(1 - G.p);
  run.pair_trials = acc.pair_total;
  run.pair_compatible = acc.pair_compatible;
  if (acc.pair_total > 0) {
    run.pair_freq = Rat(static_cast<unsigned long>(acc.pair_compatible),
                        static_cast<unsigned long>(acc.pair_total));
    run.pair_freq.canonicalize();
  }
  for (uint32_t n = 3; n <= npoints; ++n) {
    CompatibilityStats st;
    st.n = n;
    st.trials = trials;
    st.survivors = acc.surv[n - 2];
    st.empirical_rate = Rat(static_cast<unsigned long>(st.survivors),
                            static_cast<unsigned long>(trials));
    st.empirical_rate.canonicalize();
    st.p_star = run.p_star;
    st.analytic_bound = Rat(Int(n) * Int(n) * Int(n)) * rat_pow(run.p_star, n - 1);
    run.per_n.push_back(std::move(st));
  }
  return run;
}

void check_compat_pre(const Oracle& G, const Oracle& H,
                      const GoodEnumeration& en, uint64_t trials) {
  if (G.metric != Metric::EuclideanL2 || H.metric != Metric::EuclideanL2)
    throw std::invalid_argument("compatibility: Euclidean metric required");
  if (G.delta != H.delta || G.p != H.p)
    throw std::invalid_argument("compatibility: oracles must share delta, p");
  if (G.seed == H.seed)
    throw std::invalid_argument("compatibility: seeds must differ");
  if (en.delta != G.delta)
    throw std::invalid_argument("compatibility: enumeration delta mismatch");
  if (trials == 0) throw std::invalid_argument("compatibility: zero trials");
  en.validate();
}

}  // namespace

CompatRun compatibility_mc_serial(const Oracle& G, const Oracle& H,
                                  const GoodEnumeration& en, uint64_t trials,
                                  uint64_t seed) {
  check_compat_pre(G, H, en, trials);
  CompatAccum acc(en.points.size() - 1);
  for (uint64_t t = 0; t < trials; ++t)
    run_trial(G, H, en.points, seed, t, acc);
  return finish_run(G, acc, en.points.size(), trials);
}

CompatRun compatibility_mc(const Oracle& G, const Oracle& H,
                           const GoodEnumeration& en, uint64_t trials,
                           uint64_t seed, bool parallel) {
  if (!parallel) return compatibility_mc_serial(G, H, en, trials, seed);
  check_compat_pre(G, H, en, trials);
  CompatAccum acc(en.points.size() - 1);
#ifdef _OPENMP
#pragma omp parallel
  {
    CompatAccum local(en.points.size() - 1);
#pragma omp for schedule(static)
    for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t)
      run_trial(G, H, en.points, seed, static_cast<uint64_t>(t), local);
#pragma omp critical
    acc.merge(local);
  }
#else
  for (uint64_t t = 0; t < trials; ++t)
    run_trial(G, H, en.points, seed, t, acc);
#endif
  return finish_run(G, acc, en.points.size(), trials);
}

std::vector<Point> delta_free_filter(const Universe& universe,
                                     const Rat& delta, size_t count) {
  if (universe.dim() != 2)
    throw std::invalid_argument("delta-free filter: universe must be 2-D");
  if (delta <= 0) throw std::invalid_argument("delta-free filter: delta <= 0");
  std::vector<Point> out;
  Rat dsq = delta * delta;
  for (uint64_t idx = 0; out.size() < count; ++idx) {
    Point p = universe.point_at(idx);
    bool ok = true;
    for (const auto& q : out)
      if (sq_dist(p, q) == dsq) {
        ok = false;
        break;
      }
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

std::string certificate_json(const ChainReport& report,
                             const std::string& claim_name) {
  ordered_json j;
  j["claim"] = claim_name;
  j["certified"] = report.certified;
  j["inequalities"] = ordered_json::array();
  for (const auto& q : report.inequalities) {
    ordered_json e;
    e["name"] = q.name;
    e["relation"] = q.relation;
    e["lhs"] = {{"lo", rat_str(q.lhs.lo)}, {"hi", rat_str(q.lhs.hi)}};
    e["rhs"] = {{"lo", rat_str(q.rhs.lo)}, {"hi", rat_str(q.rhs.hi)}};
    e["margin"] = rat_str(q.margin);
    e["conditional"] = q.conditional;
    j["inequalities"].push_back(std::move(e));
  }
  return j.dump(2);
}

std::string compat_csv(const std::vector<CompatibilityStats>& rows) {
  std::ostringstream os;
  os << "n,trials,survivors,empirical_rate,p_star,analytic_bound\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.trials << ',' << r.survivors << ','
       << rat_str(r.empirical_rate) << ',' << rat_str(r.p_star) << ','
       << rat_str(r.analytic_bound) << '\n';
  return os.str();
}

}  // namespace geograph
