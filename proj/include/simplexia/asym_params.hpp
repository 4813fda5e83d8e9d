#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace simplexia {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent and weights of the asymmetric norm ||alpha f_+ + beta f_-||_p.
///
/// p lies in [1, inf]; alpha and beta lie in (0, inf] with at most one of them
/// infinite. An infinite weight selects the corresponding one-sided problem.
struct AsymParams {
  double p = 2.0;
  double alpha = 1.0;
  double beta = 1.0;

  [[nodiscard]] bool p_infinite() const noexcept { return std::isinf(p); }
  [[nodiscard]] bool one_sided() const noexcept { return std::isinf(alpha) || std::isinf(beta); }
  [[nodiscard]] bool symmetric() const noexcept { return alpha == beta; }

  void validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("AsymParams: p must lie in [1, inf]");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("AsymParams: weights must be positive");
    if (std::isinf(alpha) && std::isinf(beta)) throw std::invalid_argument("AsymParams: at most one weight may be infinite");
  }
};

}  // namespace simplexia
