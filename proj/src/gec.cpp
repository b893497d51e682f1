#include "geograph/gec.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace geograph {

bool check_threshold(const Snapshot& snap) {
  for (const auto& [i, j] : snap.edges) {
    if (!within(snap.vertices[i], snap.vertices[j], snap.delta, snap.metric))
      return false;
  }
  return true;
}

namespace {

// Rational upper bound on d(x,u), strictly below cap when the true distance
// is. cap must exceed the true distance.
Rat dist_upper(const Point& x, const Point& u, Metric m, const Rat& cap) {
  if (m == Metric::ProductLinf) return distance_linf(x, u);
  Rat prec = cap / 16;
  for (;;) {
    auto [lo, hi] = l2_distance_interval(x, u, prec);
    if (hi < cap) return hi;
    prec /= 4;
  }
}

bool in_ball(const Point& c, const Point& z, const Rat& radius, Metric m) {
  return within(c, z, radius, m);
}

bool at_exact_delta(const Point& a, const Point& b, const Rat& delta,
                    Metric m) {
  if (m == Metric::ProductLinf) return distance_linf(a, b) == delta;
  return sq_dist(a, b) == Rat(delta * delta);
}

}  // namespace

Rat WitnessRequest::radius(Metric m) const {
  Rat slack = delta;
  for (const auto* side : {&A, &B}) {
    for (const auto& u : *side) {
      Rat up = dist_upper(x, u, m, delta);
      slack = std::min(slack, Rat(delta - up));
    }
  }
  if (delta_prime) slack = std::min(slack, *delta_prime);
  return slack;
}

void WitnessRequest::validate(Metric m) const {
  if (!(delta > 0)) throw std::invalid_argument("witness: delta must be positive");
  if (delta_prime && !(*delta_prime > 0))
    throw std::invalid_argument("witness: delta_prime must be positive");
  if (budget == 0) throw std::invalid_argument("witness: budget must be positive");
  std::vector<const Point*> all;
  for (const auto& u : A) all.push_back(&u);
  for (const auto& u : B) all.push_back(&u);
  for (const auto* u : all) {
    require_same_dim(x, *u);
    if (*u == x) throw std::invalid_argument("witness: x may not be in A or B");
    if (!within(x, *u, delta, m))
      throw std::invalid_argument("witness: A and B must lie in the open delta-ball");
  }
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      if (*all[i] == *all[j])
        throw std::invalid_argument("witness: A and B must be disjoint and duplicate-free");
}

WitnessResult find_witness(const Oracle& oracle, const Universe& universe,
                           const WitnessRequest& req) {
  req.validate(oracle.metric);
  if (req.delta != oracle.delta)
    throw std::invalid_argument("witness: request delta differs from oracle delta");
  Rat r = req.radius(oracle.metric);
  WitnessResult res;
  auto stream = universe.box_stream(universe.ball_box(req.x, r));
  while (auto z = stream.next()) {
    if (oracle.metric == Metric::EuclideanL2 && !in_ball(req.x, *z, r, oracle.metric))
      continue;
    if (*z == req.x) continue;
    auto is_member = [&](const std::vector<Point>& side) {
      return std::find(side.begin(), side.end(), *z) != side.end();
    };
    if (is_member(req.A) || is_member(req.B)) continue;
    if (++res.trials > req.budget) {
      res.trials = req.budget;
      res.status = SearchStatus::BudgetExhausted;
      return res;
    }
    bool ok = true;
    for (const auto& a : req.A)
      if (!oracle.adjacent(*z, a)) { ok = false; break; }
    if (ok)
      for (const auto& b : req.B)
        if (oracle.adjacent(*z, b)) { ok = false; break; }
    if (ok) {
      res.status = SearchStatus::Found;
      res.witness = std::move(*z);
      return res;
    }
  }
  res.status = SearchStatus::PoolExhausted;
  return res;
}

WitnessResult find_witness(const Snapshot& snap, const WitnessRequest& req) {
  req.validate(snap.metric);
  if (req.delta != snap.delta)
    throw std::invalid_argument("witness: request delta differs from snapshot delta");
  auto locate = [&](const Point& p) -> uint32_t {
    for (uint32_t i = 0; i < snap.vertices.size(); ++i)
      if (snap.vertices[i] == p) return i;
    throw std::invalid_argument("witness: side vertex not present in snapshot");
  };
  std::vector<uint32_t> ai, bi;
  for (const auto& a : req.A) ai.push_back(locate(a));
  for (const auto& b : req.B) bi.push_back(locate(b));
  Rat r = req.radius(snap.metric);
  WitnessResult res;
  for (uint32_t z = 0; z < snap.vertices.size(); ++z) {
    const Point& pz = snap.vertices[z];
    if (pz == req.x) continue;
    if (std::find(ai.begin(), ai.end(), z) != ai.end()) continue;
    if (std::find(bi.begin(), bi.end(), z) != bi.end()) continue;
    if (!in_ball(req.x, pz, r, snap.metric)) continue;
    if (++res.trials > req.budget) {
      res.trials = req.budget;
      res.status = SearchStatus::BudgetExhausted;
      return res;
    }
    bool ok = true;
    for (uint32_t a : ai)
      if (!snap.has_edge(std::min(a, z), std::max(a, z))) { ok = false; break; }
    if (ok)
      for (uint32_t b : bi)
        if (snap.has_edge(std::min(b, z), std::max(b, z))) { ok = false; break; }
    if (ok) {
      res.status = SearchStatus::Found;
      res.witness = pz;
      return res;
    }
  }
  res.status = SearchStatus::PoolExhausted;
  return res;
}

// ------------------------------------------------------------ construction

namespace {

// Sorted sigma-key sequence of a vertex index set; the lexicographic key for
// ordering the sets A within one (max, x) block.
std::vector<uint64_t> key_seq(const std::vector<uint32_t>& idxs,
                              const std::vector<uint64_t>& keys) {
  std::vector<uint64_t> ks;
  ks.reserve(idxs.size());
  for (uint32_t i : idxs) ks.push_back(keys[i]);
  std::sort(ks.begin(), ks.end());
  return ks;
}

}  // namespace

Construction build_gr(const Universe& universe, const Rat& delta,
                      uint32_t stages, Metric metric,
                      const BuildOptions& opts) {
  if (!(delta > 0)) throw std::invalid_argument("build_gr: delta must be positive");
  if (stages == 0) throw std::invalid_argument("build_gr: need at least one stage");
  auto sigma = opts.sigma ? opts.sigma
                          : [](uint32_t t) { return uint64_t(t) - 1; };

  Construction out;
  Snapshot& snap = out.snapshot;
  snap.dimension = universe.dim();
  snap.metric = metric;
  snap.delta = delta;
  snap.p = 0;
  snap.seed = 0;
  snap.constructed = true;

  std::set<uint64_t> used_keys;
  auto has_point = [&](const Point& p) {
    for (const auto& v : snap.vertices)
      if (v == p) return true;
    return false;
  };
  auto add_vertex = [&](Point p, uint64_t key) {
    snap.vertices.push_back(std::move(p));
    out.sigma_keys.push_back(key);
    used_keys.insert(key);
    return uint32_t(snap.vertices.size() - 1);
  };

  add_vertex(universe.point_at(sigma(1)), sigma(1));

  for (uint32_t t = 1; t <= stages; ++t) {
    size_t n0 = snap.vertices.size();  // V(R_t)
    out.stage_sizes.push_back(uint32_t(n0));
    Rat dp = std::min(Rat(Rat(1) / t), delta);

    std::vector<uint32_t> order(n0);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      return out.sigma_keys[a] < out.sigma_keys[b];
    });

    size_t resolved = 0;
    for (size_t mi = 0; mi < n0 && resolved < opts.max_pairs_per_stage; ++mi) {
      uint32_t m = order[mi];
      for (size_t xi = 0; xi <= mi && resolved < opts.max_pairs_per_stage; ++xi) {
        uint32_t x = order[xi];
        bool x_is_max = (xi == mi);
        if (!x_is_max &&
            !within(snap.vertices[x], snap.vertices[m], delta, metric))
          continue;
        // Vertices with smaller keys eligible for A alongside the maximum.
        std::vector<uint32_t> pool;
        for (size_t k = 0; k < mi; ++k) {
          uint32_t v = order[k];
          if (v != x && within(snap.vertices[x], snap.vertices[v], delta, metric))
            pool.push_back(v);
        }
        // The full pair list is exponential in the ball population; keep the
        // smallest sigma-keys so the truncation is deterministic and every
        // fixed vertex eventually participates.
        if (pool.size() > 12) pool.resize(12);

        std::vector<std::vector<uint32_t>> sets;
        for (uint64_t mask = 0; mask < (uint64_t(1) << pool.size()); ++mask) {
          std::vector<uint32_t> A;
          for (size_t b = 0; b < pool.size(); ++b)
            if (mask >> b & 1) A.push_back(pool[b]);
          if (!x_is_max) A.push_back(m);
          sets.push_back(std::move(A));
        }
        std::sort(sets.begin(), sets.end(),
                  [&](const std::vector<uint32_t>& a,
                      const std::vector<uint32_t>& b) {
                    return key_seq(a, out.sigma_keys) <
                           key_seq(b, out.sigma_keys);
                  });

        for (auto& A : sets) {
          if (resolved >= opts.max_pairs_per_stage) break;
          auto stream = universe.box_stream(
              universe.ball_box(snap.vertices[x], dp));
          uint64_t trials = 0;
          std::optional<uint32_t> zi;
          std::optional<uint64_t> zkey;
          std::optional<Point> zpt;
          while (auto cand = stream.next_indexed()) {
            if (metric == Metric::EuclideanL2 &&
                !in_ball(snap.vertices[x], cand->point, dp, metric))
              continue;
            if (used_keys.count(cand->raw_index) || has_point(cand->point))
              continue;
            if (++trials > opts.witness_budget)
              throw budget_exhausted("build_gr: witness budget exhausted");
            bool ok = true;
            for (size_t i = 0; i < n0 && ok; ++i)
              ok = within(cand->point, snap.vertices[i], delta, metric) ==
                   within(snap.vertices[x], snap.vertices[i], delta, metric);
            // A vertex at exactly delta from the witness would pin the
            // witness's own ball boundary, leaving later stages an empty
            // region to search. Exact-threshold placements are rejected.
            for (size_t i = 0; i < snap.vertices.size() && ok; ++i)
              ok = !at_exact_delta(cand->point, snap.vertices[i], delta,
                                   metric);
            if (!ok) continue;
            zpt = std::move(cand->point);
            zkey = cand->raw_index;
            break;
          }
          if (!zpt)
            throw budget_exhausted("build_gr: witness pool exhausted");
          zi = add_vertex(std::move(*zpt), *zkey);
          for (uint32_t a : A)
            snap.add_edge(std::min(a, *zi), std::max(a, *zi));
          out.log.push_back(PairRecord{t, x, A, *zi, trials});
          ++resolved;
        }
      }
    }

    Point nxt = universe.point_at(sigma(t + 1));
    if (!has_point(nxt)) add_vertex(std::move(nxt), sigma(t + 1));
  }
  out.stages = stages;
  return out;
}

bool replay_pair(const Construction& built, const PairRecord& rec) {
  const Snapshot& snap = built.snapshot;
  if (rec.stage == 0 || rec.stage > built.stage_sizes.size()) return false;
  uint32_t n0 = built.stage_sizes[rec.stage - 1];
  if (rec.x >= n0 || rec.z >= snap.vertices.size()) return false;
  const Point& x = snap.vertices[rec.x];
  const Point& z = snap.vertices[rec.z];
  Rat dp = std::min(Rat(Rat(1) / rec.stage), snap.delta);

  if (!within(x, z, dp, snap.metric)) return false;  // clause (iii)
  std::set<uint32_t> A(rec.A.begin(), rec.A.end());
  if (A.count(rec.x)) return false;
  for (uint32_t i = 0; i < n0; ++i) {
    const Point& u = snap.vertices[i];
    bool in_A = A.count(i) != 0;
    bool edge = snap.has_edge(std::min(i, rec.z), std::max(i, rec.z));
    if (edge != in_A) return false;  // joined to A, to nothing else of R_t
    if (in_A && !within(x, u, snap.delta, snap.metric)) return false;
    // clause (ii) for the stage-start ball; ball equality gives the rest
    if (within(x, u, snap.delta, snap.metric) !=
        within(z, u, snap.delta, snap.metric))
      return false;
  }
  return true;
}

// ------------------------------------------------------- sampled e.c. check

BallEcReport check_ball_ec(const Oracle& oracle, const Universe& universe,
                           const Point& center, uint64_t trials,
                           uint64_t sample_seed, size_t pool_target,
                           size_t max_side) {
  if (max_side == 0)
    throw std::invalid_argument("check_ball_ec: max_side must be positive");
  BallEcReport rep;
  std::vector<Point> pool;
  auto stream = universe.box_stream(universe.ball_box(center, oracle.delta));
  while (pool.size() < pool_target) {
    auto p = stream.next();
    if (!p) break;
    if (*p == center) continue;
    if (!in_ball(center, *p, oracle.delta, oracle.metric)) continue;
    pool.push_back(std::move(*p));
  }
  rep.pool_size = pool.size();
  if (pool.size() < 2) return rep;

  std::mt19937_64 rng(sample_seed);
  std::vector<size_t> idx(pool.size());
  for (uint64_t trial = 0; trial < trials; ++trial) {
    ++rep.trials;
    size_t total = 1 + rng() % std::min(max_side, pool.size() - 1);
    size_t na = rng() % (total + 1);
    std::iota(idx.begin(), idx.end(), size_t(0));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::set<size_t> taken(idx.begin(), idx.begin() + total);
    bool found = false;
    for (size_t zi = 0; zi < pool.size() && !found; ++zi) {
      if (taken.count(zi)) continue;
      bool ok = true;
      for (size_t s = 0; s < total && ok; ++s) {
        bool want = s < na;
        ok = oracle.adjacent(pool[zi], pool[idx[s]]) == want;
      }
      found = ok;
    }
    if (found) ++rep.successes;
  }
  return rep;
}

// --------------------------------------------------------- graph distance

DistanceForecast expected_graph_distance(const Point& u, const Point& v,
                                         const Rat& delta, Metric m) {
  require_same_dim(u, v);
  if (!(delta > 0))
    throw std::invalid_argument("distance: delta must be positive");
  if (u == v) throw std::invalid_argument("distance: vertices must differ");
  if (m == Metric::ProductLinf) {
    Rat d = distance_linf(u, v);
    if (d < delta)
      throw std::invalid_argument("distance: prediction needs d(u,v) >= delta");
    Int q = floor_div(d, delta);
    return {Int(q + 1), d == q * delta};
  }
  Rat s = sq_dist(u, v);
  Rat ratio = s / (delta * delta);  // (d/delta)^2
  Int fl = floor_div(ratio, Rat(1));
  Int q;
  mpz_sqrt(q.get_mpz_t(), fl.get_mpz_t());
  if (q == 0)
    throw std::invalid_argument("distance: prediction needs d(u,v) >= delta");
  if (ratio == Rat(q) * Rat(q))
    throw boundary_indecision(
        "distance: d(u,v) is an exact multiple of delta under the Euclidean "
        "metric; no prediction");
  return {Int(q + 1), false};
}

std::vector<Point> construct_path(const Oracle& oracle,
                                  const Universe& universe, const Point& u,
                                  const Point& v, uint64_t budget) {
  if (oracle.metric != Metric::ProductLinf)
    throw std::invalid_argument("path: product metric only");
  require_same_dim(u, v);
  if (u == v) throw std::invalid_argument("path: endpoints must differ");
  Rat d = distance_linf(u, v);
  if (d < oracle.delta) {
    if (oracle.adjacent(u, v)) return {u, v};
    throw std::invalid_argument("path: endpoints within delta but non-adjacent");
  }

  Int kz = floor_div(d, oracle.delta) + 1;
  if (!kz.fits_ulong_p()) throw std::invalid_argument("path: distance too large");
  uint64_t k = kz.get_ui();
  Rat eps = (Rat(kz) * oracle.delta - d) / Rat(kz);

  // Waypoints on the straight segment, then nearby universe points.
  std::vector<Point> w(k + 1);
  w[0] = u;
  w[k] = v;
  for (uint64_t i = 1; i < k; ++i) {
    Point xi;
    xi.c.reserve(u.dim());
    for (size_t j = 0; j < u.dim(); ++j)
      xi.c.push_back(u.c[j] + (v.c[j] - u.c[j]) * Rat(i) / Rat(kz));
    auto wi = universe.first_in_box(universe.ball_box(xi, eps / 8), budget);
    if (!wi) throw budget_exhausted("path: no universe point near waypoint");
    w[i] = std::move(*wi);
  }

  std::vector<Point> path{u};
  for (uint64_t i = 1; i < k; ++i) {
    std::vector<const Point*> targets{&path.back()};
    if (i == k - 1) targets.push_back(&v);
    auto stream = universe.box_stream(universe.ball_box(w[i], eps / 2));
    uint64_t trials = 0;
    std::optional<Point> next;
    while (auto z = stream.next()) {
      if (*z == u || *z == v) continue;
      if (std::find(path.begin(), path.end(), *z) != path.end()) continue;
      if (++trials > budget)
        throw budget_exhausted("path: witness budget exhausted");
      bool ok = true;
      for (const Point* tp : targets)
        if (!oracle.adjacent(*z, *tp)) { ok = false; break; }
      if (ok) {
        next = std::move(*z);
        break;
      }
    }
    if (!next) throw budget_exhausted("path: witness pool exhausted");
    path.push_back(std::move(*next));
  }
  path.push_back(v);
  return path;
}

}  // namespace geograph
