#include "geograph/back_and_forth.hpp"

#include <algorithm>

#include <json.hpp>

namespace geograph {

namespace {

std::optional<size_t> find_point(const std::vector<Point>& list,
                                 const Point& p) {
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i] == p) return i;
  return std::nullopt;
}

}  // namespace

std::optional<size_t> PartialIsomorphism::index_of_source(const Point& p) const {
  return find_point(source_list, p);
}

std::optional<size_t> PartialIsomorphism::index_of_target(const Point& p) const {
  return find_point(target_list, p);
}

PartialIsomorphism make_base(const InfiniteGraphHandle& G,
                             const InfiniteGraphHandle& H) {
  if (!G.universe || !H.universe)
    throw std::invalid_argument("back-and-forth: null universe");
  if (G.universe->dim() != H.universe->dim())
    throw std::invalid_argument("back-and-forth: dimension mismatch");
  if (G.oracle.metric != Metric::ProductLinf ||
      H.oracle.metric != Metric::ProductLinf)
    throw std::invalid_argument("back-and-forth: product metric only");
  PartialIsomorphism st;
  st.delta = G.oracle.delta;
  st.gamma = H.oracle.delta;
  st.source_list.push_back(G.universe->point_at(0));
  st.target_list.push_back(H.universe->point_at(0));
  return st;
}

namespace {

// One direction of the map: `src` points are being extended with a new
// point, `tgt` points receive its image.
struct SideCtx {
  const Oracle* oracle;
  const Universe* universe;
  Rat offset;
};

// Interval bound for one coordinate's image representative, with the
// endpoint either admissible (closed) or excluded (strict).
struct RepBound {
  Rat rep;
  bool strict;
};

std::optional<ExtensionStep> extend_core(std::vector<Point>& src_list,
                                         std::vector<Point>& tgt_list,
                                         const SideCtx& S, const SideCtx& T,
                                         Direction dir, const Point& v,
                                         uint64_t budget) {
  if (v.dim() != src_list.front().dim())
    throw std::invalid_argument("extension: dimension mismatch");
  if (find_point(src_list, v)) return std::nullopt;

  const Point& v0 = src_list.front();
  const Point& w0 = tgt_list.front();
  const size_t n = v.dim();

  ExtensionStep step;
  step.direction = dir;
  step.new_point = v;

  // Per coordinate: the image representative r(x_j) must satisfy, for every
  // mapped pair (u, u'), the floor equality of the pair (v, u) restricted to
  // coordinate j. Partners with r(u_j) below r(v_j) (ties broken by the
  // coordinate value) bound it from below, the rest from above; a bound is
  // strict exactly when the partner sits on the far value side. Equal
  // bounds from both sides pin the coordinate.
  std::vector<Universe::CoordSpec> region;
  for (size_t j = 0; j < n; ++j) {
    auto dv = decompose(v.c[j], v0.c[j], S.offset);
    RepBound lo{Rat(0), false};
    RepBound hi{T.offset, true};
    for (size_t i = 0; i < src_list.size(); ++i) {
      const Rat& uj = src_list[i].c[j];
      auto du = decompose(uj, v0.c[j], S.offset);
      auto dw = decompose(tgt_list[i].c[j], w0.c[j], T.offset);
      // An equal coordinate value keeps this pair's coordinate floor at 0
      // for any same-block image, but it still bounds from below: placing
      // the image above keeps the realized image reps strictly ordered, so
      // the intervals of later steps stay open.
      bool lower = uj == v.c[j] || du.r < dv.r ||
                   (du.r == dv.r && uj < v.c[j]);
      if (lower) {
        bool strict = uj > v.c[j];  // possible only with r(u_j) < r(v_j)
        if (dw.r > lo.rep)
          lo = {dw.r, strict};
        else if (dw.r == lo.rep && strict)
          lo.strict = true;
      } else {
        bool strict = uj < v.c[j];
        if (dw.r < hi.rep)
          hi = {dw.r, strict};
        else if (dw.r == hi.rep && strict)
          hi.strict = true;
      }
    }
    step.a.push_back(lo.rep);
    step.b.push_back(hi.rep);
    Rat base = w0.c[j] + Rat(dv.q) * T.offset;
    if (lo.rep < hi.rep) {
      region.push_back(
          Universe::CoordSpec::interval(base + lo.rep, base + hi.rep));
    } else if (lo.rep == hi.rep && !lo.strict && !hi.strict) {
      region.push_back(Universe::CoordSpec::pin(base + lo.rep));
    } else {
      throw invariant_violation("extension: empty image interval");
    }
  }

  // First enumerated target-universe point of the region that keeps a
  // margin of an eighth of each free interval to the ends, so the witness
  // ball around it cannot degenerate.
  auto xstream = T.universe->region_stream(region);
  std::optional<Point> x;
  while (auto c = xstream.next()) {
    if (++step.trials > budget)
      throw budget_exhausted("extension: image candidate budget exhausted");
    if (find_point(tgt_list, *c)) continue;
    bool central = true;
    for (size_t j = 0; j < n && central; ++j) {
      if (region[j].pinned) continue;
      Rat margin = (region[j].hi - region[j].lo) / 8;
      central = c->c[j] - region[j].lo >= margin &&
                region[j].hi - c->c[j] >= margin;
    }
    if (!central) continue;
    x = std::move(*c);
    break;
  }
  if (!x) throw budget_exhausted("extension: image region exhausted");
  step.chosen_x = *x;

  // Ball containment claim: images of all source points within the source
  // level of v lie within the target level of x.
  for (size_t i = 0; i < src_list.size(); ++i) {
    if (within(v, src_list[i], S.offset, Metric::ProductLinf) &&
        !within(*x, tgt_list[i], T.offset, Metric::ProductLinf))
      throw invariant_violation("extension: ball containment failed");
  }

  // Witness search inside a ball around x that stays within the region:
  // epsilon is half the least distance from x to a free interval boundary.
  std::optional<Rat> eps;
  for (size_t j = 0; j < n; ++j) {
    if (region[j].pinned) continue;
    Rat m = std::min(Rat(x->c[j] - region[j].lo), Rat(region[j].hi - x->c[j]));
    if (!eps || m < *eps) eps = m;
  }
  std::vector<Universe::CoordSpec> wregion;
  for (size_t j = 0; j < n; ++j) {
    if (region[j].pinned) {
      wregion.push_back(region[j]);
    } else {
      Rat e = *eps / 2;
      wregion.push_back(
          Universe::CoordSpec::interval(x->c[j] - e, x->c[j] + e));
    }
  }

  auto wstream = T.universe->region_stream(wregion);
  std::optional<Point> z;
  while (auto c = wstream.next()) {
    if (++step.trials > budget)
      throw budget_exhausted("extension: witness budget exhausted");
    if (find_point(tgt_list, *c)) continue;
    bool ok = true;
    for (size_t i = 0; i < src_list.size() && ok; ++i)
      ok = S.oracle->adjacent(v, src_list[i]) ==
           T.oracle->adjacent(*c, tgt_list[i]);
    if (!ok) continue;
    z = std::move(*c);
    break;
  }
  if (!z) {
    fprintf(stderr, "DBG witness region:");
    for (size_t j = 0; j < n; ++j)
      fprintf(stderr, " [%s,%s]", wregion[j].lo.get_str().c_str(),
              wregion[j].hi.get_str().c_str());
    fprintf(stderr, " x=(%s,%s)\n", x->c[0].get_str().c_str(),
            x->c[1].get_str().c_str());
    throw budget_exhausted("extension: witness region exhausted");
  }

  step.witness = *z;
  src_list.push_back(v);
  tgt_list.push_back(std::move(*z));
  return step;
}

}  // namespace

std::optional<ExtensionStep> extend_forth(PartialIsomorphism& state,
                                          const InfiniteGraphHandle& G,
                                          const InfiniteGraphHandle& H,
                                          const Point& v, uint64_t budget) {
  SideCtx S{&G.oracle, G.universe, state.delta};
  SideCtx T{&H.oracle, H.universe, state.gamma};
  return extend_core(state.source_list, state.target_list, S, T,
                     Direction::Forth, v, budget);
}

std::optional<ExtensionStep> extend_back(PartialIsomorphism& state,
                                         const InfiniteGraphHandle& G,
                                         const InfiniteGraphHandle& H,
                                         const Point& w, uint64_t budget) {
  SideCtx S{&H.oracle, H.universe, state.gamma};
  SideCtx T{&G.oracle, G.universe, state.delta};
  return extend_core(state.target_list, state.source_list, S, T,
                     Direction::Back, w, budget);
}

RunResult run_back_and_forth(const InfiniteGraphHandle& G,
                             const InfiniteGraphHandle& H, uint64_t steps,
                             uint64_t budget) {
  RunResult out{make_base(G, H), {}};
  uint64_t si = 1, ti = 1;
  bool forth = true;
  while (out.log.size() < steps) {
    if (forth) {
      for (;;) {
        Point v = G.universe->point_at(si++);
        if (auto st = extend_forth(out.state, G, H, v, budget)) {
          out.log.push_back(std::move(*st));
          break;
        }
      }
    } else {
      for (;;) {
        Point w = H.universe->point_at(ti++);
        if (auto st = extend_back(out.state, G, H, w, budget)) {
          out.log.push_back(std::move(*st));
          break;
        }
      }
    }
    forth = !forth;
  }
  return out;
}

// ------------------------------------------------------------------ guided

namespace {

// The three induction conditions of the guided construction, checked over
// all mapped pairs: representative order agreement under f, the mixed
// order condition against F, and quotient preservation.
void check_guided_invariant(const std::vector<Point>& src,
                            const std::vector<Point>& tgt,
                            const Rat& delta, const Rat& gamma,
                            const std::function<Rat(const Rat&)>& F) {
  const Rat& v0 = src.front().c[0];
  const Rat& w0 = tgt.front().c[0];
  std::vector<Rat> rs, rf, rF;
  std::vector<Int> qs, qf;
  for (size_t i = 0; i < src.size(); ++i) {
    auto ds = decompose(src[i].c[0], v0, delta);
    auto df = decompose(tgt[i].c[0], w0, gamma);
    auto dF = decompose(F(src[i].c[0]), w0, gamma);
    rs.push_back(ds.r);
    rf.push_back(df.r);
    rF.push_back(dF.r);
    qs.push_back(ds.q);
    qf.push_back(df.q);
  }
  for (size_t i = 0; i < src.size(); ++i) {
    if (qs[i] != qf[i])
      throw invariant_violation("guided: quotient preservation failed");
    for (size_t j = 0; j < src.size(); ++j) {
      if ((rs[i] <= rs[j]) != (rf[i] <= rf[j]))
        throw invariant_violation("guided: representative order failed");
      if ((rs[i] <= rs[j]) != (rf[i] <= rF[j]))
        throw invariant_violation("guided: mixed order condition failed");
    }
  }
}

std::optional<ExtensionStep> guided_core(
    std::vector<Point>& src_list, std::vector<Point>& tgt_list,
    const SideCtx& S, const SideCtx& T,
    const std::function<Rat(const Rat&)>& F, Direction dir, const Point& v,
    uint64_t budget) {
  if (find_point(src_list, v)) return std::nullopt;
  const Rat& v0 = src_list.front().c[0];
  const Rat& w0 = tgt_list.front().c[0];

  ExtensionStep step;
  step.direction = dir;
  step.new_point = v;

  auto dv = decompose(v.c[0], v0, S.offset);
  Rat Fv = F(v.c[0]);
  auto dFv = decompose(Fv, w0, T.offset);

  Rat a(0), b(T.offset);
  for (size_t i = 0; i < src_list.size(); ++i) {
    auto dF = decompose(F(src_list[i].c[0]), w0, T.offset);
    auto df = decompose(tgt_list[i].c[0], w0, T.offset);
    if (dF.r <= dFv.r) {
      a = std::max({a, df.r, dF.r});
    } else {
      b = std::min({b, df.r, dF.r});
    }
  }
  if (!(a < b)) throw invariant_violation("guided: empty image interval");
  step.a.push_back(a);
  step.b.push_back(b);

  Rat base = w0 + Rat(dv.q) * T.offset;
  Rat lo = base + a, hi = base + b;
  if (!(Fv > lo && Fv < hi))
    throw invariant_violation("guided: F(v) outside the image interval");
  step.chosen_x = Point{{Fv}};

  auto try_cand = [&](const Point& cpt) {
    if (find_point(tgt_list, cpt)) return false;
    for (size_t i = 0; i < src_list.size(); ++i)
      if (S.oracle->adjacent(v, src_list[i]) !=
          T.oracle->adjacent(cpt, tgt_list[i]))
        return false;
    return true;
  };
  // The order condition against the guide, applied to the new point itself,
  // caps the image at F(v) on forth steps and floors it there on back steps,
  // so the admissible side of F(v) depends on the direction. F(v) itself is
  // the preferred image when it qualifies.
  std::optional<Point> z;
  {
    auto pinned = T.universe->region_stream({Universe::CoordSpec::pin(Fv)});
    if (auto c = pinned.next()) {
      ++step.trials;
      if (try_cand(*c)) z = std::move(*c);
    }
  }
  if (!z) {
    Rat eps = (dir == Direction::Forth ? Rat(Fv - lo) : Rat(hi - Fv)) / 2;
    auto wstream = T.universe->box_stream(
        dir == Direction::Forth
            ? std::vector<std::pair<Rat, Rat>>{{Rat(Fv - eps), Fv}}
            : std::vector<std::pair<Rat, Rat>>{{Fv, Rat(Fv + eps)}});
    while (auto c = wstream.next()) {
      if (++step.trials > budget)
        throw budget_exhausted("guided: witness budget exhausted");
      if (!try_cand(*c)) continue;
      z = std::move(*c);
      break;
    }
  }
  if (!z) throw budget_exhausted("guided: witness region exhausted");

  step.witness = *z;
  src_list.push_back(v);
  tgt_list.push_back(std::move(*z));
  return step;
}

}  // namespace

RunResult run_guided(const InfiniteGraphHandle& G,
                     const InfiniteGraphHandle& H, const GuidedMap& F,
                     uint64_t steps, uint64_t budget) {
  if (G.universe->dim() != 1 || H.universe->dim() != 1)
    throw std::invalid_argument("guided: one-dimensional only");
  RunResult out{make_base(G, H), {}};
  if (Point{{F.forward(out.state.v0().c[0])}} != out.state.w0())
    throw std::invalid_argument("guided: F must map anchor to anchor");
  SideCtx Sf{&G.oracle, G.universe, out.state.delta};
  SideCtx Tf{&H.oracle, H.universe, out.state.gamma};
  SideCtx Sb{&H.oracle, H.universe, out.state.gamma};
  SideCtx Tb{&G.oracle, G.universe, out.state.delta};
  uint64_t si = 1, ti = 1;
  bool forth = true;
  while (out.log.size() < steps) {
    std::optional<ExtensionStep> st;
    if (forth) {
      for (;;) {
        Point v = G.universe->point_at(si++);
        st = guided_core(out.state.source_list, out.state.target_list, Sf, Tf,
                         F.forward, Direction::Forth, v, budget);
        if (st) break;
      }
    } else {
      for (;;) {
        Point w = H.universe->point_at(ti++);
        st = guided_core(out.state.target_list, out.state.source_list, Sb, Tb,
                         F.inverse, Direction::Back, w, budget);
        if (st) break;
      }
    }
    check_guided_invariant(out.state.source_list, out.state.target_list,
                           out.state.delta, out.state.gamma, F.forward);
    out.log.push_back(std::move(*st));
    forth = !forth;
  }
  return out;
}

VerifyReport verify_partial(const PartialIsomorphism& state,
                            const InfiniteGraphHandle& G,
                            const InfiniteGraphHandle& H) {
  VerifyReport rep;
  const auto& S = state.source_list;
  const auto& T = state.target_list;
  for (size_t i = 0; i < S.size(); ++i) {
    for (size_t j = i + 1; j < S.size(); ++j) {
      ++rep.pairs_checked;
      if (G.oracle.adjacent(S[i], S[j]) != H.oracle.adjacent(T[i], T[j]))
        ++rep.adjacency_violations;
      if (floor_distance(S[i], S[j], state.delta, G.oracle.metric) !=
          floor_distance(T[i], T[j], state.gamma, H.oracle.metric))
        ++rep.floor_violations;
    }
  }
  return rep;
}

std::string transcript_jsonl(const std::vector<ExtensionStep>& log) {
  std::string out;
  auto rats = [](const std::vector<Rat>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : v) arr.push_back(rat_str(r));
    return arr;
  };
  auto pt = [&](const Point& p) { return rats(p.c); };
  for (const auto& st : log) {
    nlohmann::ordered_json j;
    j["direction"] = st.direction == Direction::Forth ? "forth" : "back";
    j["point"] = pt(st.new_point);
    j["a"] = rats(st.a);
    j["b"] = rats(st.b);
    j["x"] = pt(st.chosen_x);
    j["witness"] = pt(st.witness);
    j["trials"] = st.trials;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace geograph
