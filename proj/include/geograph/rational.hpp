#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace geograph {

// Exact rational scalar. All coordinates, thresholds and probabilities in
// this library are Rat; no floating point ever enters core logic.
//
// mpq_class already maintains the canonical form we need: lowest terms,
// positive denominator, zero as 0/1.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "num/den" or a bare integer "num". Throws std::invalid_argument on
// malformed input or zero denominator.
Rat parse_rat(const std::string& s);

// Canonical serialization, always with an explicit denominator: "-3/2", "5/1".
std::string rat_str(const Rat& x);

// floor(x / step), exact, correct for negative x. Requires step > 0.
Int floor_div(const Rat& x, const Rat& step);

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

struct invariant_violation : std::logic_error {
  using std::logic_error::logic_error;
};

struct budget_exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace geograph
