#pragma once
// Exponent bookkeeping for the two model problems, in exact rationals.
//   sigma  = d p / (d - p)          Sobolev exponent (+inf for p >= d, then sigma' = 1)
//   r0     = p (d + 2) / d          admissible Nemytskii growth
//   r      = 12 p / (-5p^2 + 17p - 6)   three-dimensional fluid exponent
//   lambda solves 1/((r0 - 1) sigma') = (1 - lambda)/2 + lambda/sigma

#include <optional>
#include <string>

#include "galerkin/rational.hpp"

namespace galerkin {

struct ExponentReport {
  int d = 0;
  Rational p;
  Rational p_prime;
  std::optional<Rational> sigma;  // nullopt: +inf
  Rational sigma_prime;
  Rational r0;
  std::optional<Rational> r_fluid;  // nullopt when the denominator is <= 0
  Rational two_pprime;
  std::optional<Rational> lambda;  // nullopt when 1/2 - 1/sigma = 0
  bool scalar_admissible = false;  // p > 2d/(d+2)
  bool fluid_admissible = false;   // p >= 11/5
  bool two_pprime_le_r = false;
  bool interpolation_ok = false;   // lambda (r0 - 1) <= p - 1
  bool sigma_gt_r0 = false;
};

/// Throws ConfigError unless p > 1 and d >= 1.
ExponentReport exponent_report(int d, const Rational& p);

}  // namespace galerkin
