#include "geograph/rational.hpp"

namespace geograph {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Int floor_div(const Rat& x, const Rat& step) {
  if (step <= 0) throw std::invalid_argument("floor_div: step must be > 0");
  Rat q = x / step;
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return out;
}

}  // namespace geograph
