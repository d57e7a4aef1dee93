#include "galerkin/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace galerkin {

double TimeProfile::operator()(double t) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::exp:
      return amplitude * std::exp(-rate * t);
    case Kind::sine:
      return value + amplitude * std::sin(omega * t);
    case Kind::step:
      return t < t0 ? value : amplitude;
  }
  return 0.0;
}

double TimeProfile::min_on(double horizon) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::exp:
      return std::min((*this)(0.0), (*this)(horizon));
    case Kind::sine: {
      // full oscillation inside the window reaches value - |amplitude|
      if (std::abs(omega) * horizon >= 2.0 * std::numbers::pi) return value - std::abs(amplitude);
      double lo = std::min((*this)(0.0), (*this)(horizon));
      // interior critical points omega t = -pi/2 + 2 pi j
      for (int j = -1; j <= 2; ++j) {
        if (omega == 0.0) break;
        const double tc = (-std::numbers::pi / 2 + 2 * std::numbers::pi * j) / omega;
        if (tc > 0.0 && tc < horizon) lo = std::min(lo, (*this)(tc));
        const double tc2 = (std::numbers::pi / 2 + 2 * std::numbers::pi * j) / omega;
        if (tc2 > 0.0 && tc2 < horizon) lo = std::min(lo, (*this)(tc2));
      }
      return lo;
    }
    case Kind::step:
      if (t0 <= 0.0) return amplitude;
      if (t0 > horizon) return value;
      return std::min(value, amplitude);
  }
  return 0.0;
}

std::string to_string(TimeProfile::Kind kind) {
  switch (kind) {
    case TimeProfile::Kind::constant:
      return "constant";
    case TimeProfile::Kind::exp:
      return "exp";
    case TimeProfile::Kind::sine:
      return "sine";
    case TimeProfile::Kind::step:
      return "step";
  }
  return "constant";
}

}  // namespace galerkin
