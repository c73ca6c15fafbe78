#pragma once

#include <cmath>
#include <stdexcept>

namespace symsq {

/// Tolerance interval in which classical null-consistent answering is sound
/// while a Helstrom query still separates the class from the zero function.
/// Nonempty exactly when zeta < 2/5.
struct ToleranceWindow {
  double zeta = 0.0;
  double low = 0.0;  // 2*zeta
  double high = 0.0; // sqrt(2*zeta - zeta^2)
  bool valid = false;
};

inline ToleranceWindow tolerance_window(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("tolerance_window: zeta outside (0,1)");
  ToleranceWindow w;
  w.zeta = zeta;
  w.low = 2.0 * zeta;
  w.high = std::sqrt(2.0 * zeta - zeta * zeta);
  w.valid = zeta < 0.4;
  return w;
}

} // namespace symsq
