// Prints ||phi o sigma~_(2^n) - phi|| for a small suspension state at a few
// parameters and shows the table settling at t = 2 - 4a once n reaches the
// base depth.

#include <dyadic/dyadic.hpp>
#include <dyadic/sampling.hpp>

#include <iostream>

int main() {
  using namespace dyadic;
  std::mt19937_64 rng(7);
  for (auto const& a : {Rational(1, 2), Rational(2, 5), Rational(1, 3), Rational(1, 4)}) {
    BernoulliParam const param(a);
    auto const phi = random_suspension_state(param, 3, 2, rng);
    std::cout << "a = " << to_string(a) << "  t = " << to_string(param.t()) << '\n';
    for (auto const& row : flow_limit_table(phi, 5, 12)) {
      std::cout << "  n = " << row.n << "  [" << to_decimal(row.interval.lo, 10) << ", "
                << to_decimal(row.interval.hi, 10) << "]" << (row.stabilized ? "  exact" : "") << '\n';
    }
  }
}
