#include "geograph/oracle.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace geograph {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string point_key(const Point& p) {
  std::string out;
  for (size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ',';
    out += rat_str(p.c[i]);
  }
  return out;
}

}  // namespace

uint64_t keyed_hash(uint64_t seed, const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(seed);
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  h = splitmix64(h ^ seed);
  return splitmix64(h);
}

Oracle::Oracle(uint64_t seed_, Rat delta_, Rat p_, Metric m)
    : seed(seed_), delta(std::move(delta_)), p(std::move(p_)), metric(m) {
  if (delta <= 0) throw std::invalid_argument("oracle: delta must be > 0");
  if (p < 0 || p > 1) throw std::invalid_argument("oracle: p must be in [0,1]");
}

bool Oracle::coin(const Point& u, const Point& v) const {
  // Canonical pair key: lexicographically smaller point first, so the
  // verdict is symmetric bit-exactly.
  const Point& a = lex_less(u, v) ? u : v;
  const Point& b = lex_less(u, v) ? v : u;
  uint64_t h = keyed_hash(seed, point_key(a) + "|" + point_key(b));
  // Edge iff h * den(p) < num(p) * 2^64, an exact integer comparison.
  Int lhs = Int(h) * p.get_den();
  Int rhs = p.get_num() << 64;
  return lhs < rhs;
}

bool Oracle::adjacent(const Point& u, const Point& v) const {
  if (u == v) throw std::invalid_argument("oracle: self-adjacency query");
  if (!within(u, v, delta, metric)) return false;
  return coin(u, v);
}

bool Snapshot::has_edge(uint32_t i, uint32_t j) const {
  if (i == j) return false;
  auto e = std::minmax(i, j);
  return std::binary_search(edges.begin(), edges.end(),
                            std::make_pair(e.first, e.second));
}

void Snapshot::add_edge(uint32_t i, uint32_t j) {
  if (i == j) throw std::invalid_argument("snapshot: self-loop");
  auto e = std::minmax(i, j);
  auto it = std::lower_bound(edges.begin(), edges.end(),
                             std::make_pair(e.first, e.second));
  if (it == edges.end() || *it != std::make_pair(e.first, e.second))
    edges.insert(it, {e.first, e.second});
}

std::string Snapshot::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = dimension;
  j["metric"] = metric == Metric::ProductLinf ? "linf" : "l2";
  j["delta"] = rat_str(delta);
  j["p"] = rat_str(p);
  j["seed"] = seed;
  j["provenance"] = constructed ? "constructed" : "sampled";
  auto verts = nlohmann::ordered_json::array();
  for (const auto& v : vertices) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& x : v.c) row.push_back(rat_str(x));
    verts.push_back(row);
  }
  j["vertices"] = verts;
  auto es = nlohmann::ordered_json::array();
  for (const auto& [a, b] : edges) es.push_back({a, b});
  j["edges"] = es;
  return j.dump(2) + "\n";
}

Snapshot Snapshot::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Snapshot s;
  s.dimension = j.at("dimension").get<size_t>();
  s.metric = j.at("metric").get<std::string>() == "l2" ? Metric::EuclideanL2
                                                       : Metric::ProductLinf;
  s.delta = parse_rat(j.at("delta").get<std::string>());
  s.p = parse_rat(j.at("p").get<std::string>());
  s.seed = j.at("seed").get<uint64_t>();
  s.constructed = j.value("provenance", "sampled") == std::string("constructed");
  for (const auto& row : j.at("vertices")) {
    Point p;
    for (const auto& x : row) p.c.push_back(parse_rat(x.get<std::string>()));
    s.vertices.push_back(std::move(p));
  }
  for (const auto& e : j.at("edges"))
    s.add_edge(e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>());
  return s;
}

namespace {

void check_distinct(const std::vector<Point>& points) {
  std::vector<const Point*> ptrs;
  ptrs.reserve(points.size());
  for (const auto& p : points) ptrs.push_back(&p);
  std::sort(ptrs.begin(), ptrs.end(), [](const Point* a, const Point* b) {
    return lex_less(*a, *b);
  });
  for (size_t i = 1; i < ptrs.size(); ++i)
    if (*ptrs[i - 1] == *ptrs[i])
      throw std::invalid_argument("sample_larg: duplicate points");
}

Snapshot make_header(const std::vector<Point>& points, const Rat& delta,
                     const Rat& p, uint64_t seed, Metric metric) {
  Snapshot s;
  s.dimension = points.empty() ? 0 : points[0].dim();
  s.metric = metric;
  s.delta = delta;
  s.p = p;
  s.seed = seed;
  s.vertices = points;
  return s;
}

}  // namespace

Snapshot sample_larg_serial(const std::vector<Point>& points, const Rat& delta,
                            const Rat& p, uint64_t seed, Metric metric) {
  check_distinct(points);
  Snapshot s = make_header(points, delta, p, seed, metric);
  Oracle o(seed, delta, p, metric);
  const uint32_t n = static_cast<uint32_t>(points.size());
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j)
      if (o.adjacent(points[i], points[j])) s.edges.emplace_back(i, j);
  return s;
}

Snapshot sample_larg(const std::vector<Point>& points, const Rat& delta,
                     const Rat& p, uint64_t seed, Metric metric,
                     bool parallel) {
  if (!parallel) return sample_larg_serial(points, delta, p, seed, metric);
  check_distinct(points);
  Snapshot s = make_header(points, delta, p, seed, metric);
  Oracle o(seed, delta, p, metric);
  const int64_t n = static_cast<int64_t>(points.size());
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> rows(points.size());
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i + 1; j < n; ++j)
      if (o.adjacent(points[i], points[j]))
        rows[i].emplace_back(static_cast<uint32_t>(i),
                             static_cast<uint32_t>(j));
  }
  for (auto& row : rows)
    s.edges.insert(s.edges.end(), row.begin(), row.end());
  return s;
}

Snapshot snapshot_of(const Oracle& oracle, const Universe& universe,
                     const std::vector<uint64_t>& indices) {
  std::set<uint64_t> seen(indices.begin(), indices.end());
  if (seen.size() != indices.size())
    throw std::invalid_argument("snapshot_of: duplicate indices");
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (uint64_t i : indices) pts.push_back(universe.point_at(i));
  return sample_larg(pts, oracle.delta, oracle.p, oracle.seed, oracle.metric);
}

}  // namespace geograph
