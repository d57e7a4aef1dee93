#include "galerkin/exponents.hpp"

#include "galerkin/errors.hpp"

namespace galerkin {

ExponentReport exponent_report(int d, const Rational& p) {
  if (d < 1) throw ConfigError("dimension must be >= 1");
  if (p <= 1) throw ConfigError("exponent report needs p > 1, got " + to_string(p));
  ExponentReport rep;
  const Rational D(d);
  const Rational half(1, 2);
  rep.d = d;
  rep.p = p;
  rep.p_prime = p / (p - 1);
  rep.two_pprime = 2 * rep.p_prime;
  rep.r0 = p * (D + 2) / D;

  Rational inv_sigma = 0;
  if (p < D) {
    rep.sigma = D * p / (D - p);
    rep.sigma_prime = *rep.sigma / (*rep.sigma - 1);
    inv_sigma = 1 / *rep.sigma;
  } else {
    rep.sigma_prime = 1;
  }
  rep.sigma_gt_r0 = !rep.sigma || *rep.sigma > rep.r0;

  const Rational denom = -5 * p * p + 17 * p - 6;
  if (denom > 0) rep.r_fluid = 12 * p / denom;

  if (half - inv_sigma != 0)
    rep.lambda = (half - 1 / ((rep.r0 - 1) * rep.sigma_prime)) / (half - inv_sigma);

  rep.scalar_admissible = p > 2 * D / (D + 2);
  rep.fluid_admissible = p >= Rational(11, 5);
  rep.two_pprime_le_r = rep.r_fluid && rep.two_pprime <= *rep.r_fluid;
  rep.interpolation_ok = rep.lambda && *rep.lambda * (rep.r0 - 1) <= p - 1;
  return rep;
}

}  // namespace galerkin
