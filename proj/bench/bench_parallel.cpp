// Wall-clock comparison of the serial and OpenMP kernels: LARG sampling and
// the compatibility Monte Carlo. Results must agree exactly; only the time
// differs.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <vector>

#include "geograph/euclid.hpp"
#include "geograph/oracle.hpp"
#include "geograph/universe.hpp"

using namespace geograph;
using clk = std::chrono::steady_clock;

static double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

int main(int argc, char** argv) {
  size_t npoints = argc > 1 ? std::stoul(argv[1]) : 600;
  uint64_t trials = argc > 2 ? std::stoull(argv[2]) : 4000;

  Universe u1 = Universe::rationals(2);
  std::vector<Point> pts;
  pts.reserve(npoints);
  for (size_t i = 0; i < npoints; ++i) pts.push_back(u1.point_at(i));

  Rat delta(3), p(1, 2);

  auto t0 = clk::now();
  Snapshot a = sample_larg_serial(pts, delta, p, 7, Metric::EuclideanL2);
  double serial_ms = ms_since(t0);

  t0 = clk::now();
  Snapshot b = sample_larg(pts, delta, p, 7, Metric::EuclideanL2, true);
  double parallel_ms = ms_since(t0);

  if (a.edges != b.edges) {
    std::cerr << "sample_larg: serial/parallel mismatch\n";
    return 1;
  }
  std::cout << "sample_larg  n=" << npoints << "  serial " << serial_ms
            << " ms  parallel " << parallel_ms << " ms  edges "
            << a.edges.size() << "\n";

  std::vector<Point> chain;
  chain.push_back(Point{Rat(0), Rat(0)});
  chain.push_back(Point{Rat(1, 3), Rat(1, 2)});
  chain.push_back(Point{Rat(2, 3), Rat(0)});
  for (int i = 3; i < 12; ++i)
    chain.push_back(Point{Rat(i) / 3, (i % 2) ? Rat(1, 2) : Rat(0)});
  GoodEnumeration en{chain, Rat(1)};
  en.validate();

  Oracle G(11, Rat(1), p, Metric::EuclideanL2);
  Oracle H(12, Rat(1), p, Metric::EuclideanL2);

  t0 = clk::now();
  CompatRun cs = compatibility_mc_serial(G, H, en, trials, 99);
  serial_ms = ms_since(t0);

  t0 = clk::now();
  CompatRun cp = compatibility_mc(G, H, en, trials, 99, true);
  parallel_ms = ms_since(t0);

  if (cs.pair_compatible != cp.pair_compatible ||
      cs.per_n.back().survivors != cp.per_n.back().survivors) {
    std::cerr << "compatibility_mc: serial/parallel mismatch\n";
    return 1;
  }
  std::cout << "compat_mc    trials=" << trials << "  serial " << serial_ms
            << " ms  parallel " << parallel_ms << " ms  pair_freq "
            << rat_str(cs.pair_freq) << "\n";
  return 0;
}
