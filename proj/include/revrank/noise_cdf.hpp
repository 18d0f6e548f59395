#pragma once

#include <cmath>
#include <stdexcept>

namespace revrank {

/// Admission-noise CDF F(x) = 1 - exp(-rate * (x - anchor)) for x >= anchor, 0 below.
/// Concave and non-decreasing on [anchor, inf).
struct NoiseCdf {
  double rate = 0.001;
  double anchor = -600.0;

  NoiseCdf() = default;
  NoiseCdf(double rate_, double anchor_) : rate(rate_), anchor(anchor_) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("noise rate must be > 0");
    if (!std::isfinite(anchor)) throw std::invalid_argument("noise anchor must be finite");
  }

  [[nodiscard]] bool in_concave_domain(double x) const { return x >= anchor; }

  [[nodiscard]] double operator()(double x) const {
    if (x <= anchor) return 0.0;
    return -std::expm1(-rate * (x - anchor));
  }
};

}  // namespace revrank
