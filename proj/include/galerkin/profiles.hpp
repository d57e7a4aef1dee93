#pragma once
// Named, piecewise-continuous time profiles. They carry the t-dependence of
// forcing amplitudes and of the declared constants C2, C5, C7.

#include <string>

namespace galerkin {

struct TimeProfile {
  enum class Kind { constant, exp, sine, step };

  Kind kind = Kind::constant;
  double value = 0.0;      // constant value; step value before `t0`
  double amplitude = 0.0;  // exp / sine amplitude; step value from `t0` on
  double rate = 0.0;       // exp decay rate
  double omega = 0.0;      // sine angular frequency
  double t0 = 0.0;         // step switch time

  static TimeProfile constant_of(double v) { return {Kind::constant, v}; }
  static TimeProfile exp_of(double amplitude, double rate) {
    TimeProfile p;
    p.kind = Kind::exp;
    p.amplitude = amplitude;
    p.rate = rate;
    return p;
  }

  double operator()(double t) const;

  /// Lower bound of the profile on [0, T]; used to enforce nonnegativity of
  /// the C-profiles.
  double min_on(double horizon) const;

  bool operator==(const TimeProfile&) const = default;
};

std::string to_string(TimeProfile::Kind kind);

}  // namespace galerkin
