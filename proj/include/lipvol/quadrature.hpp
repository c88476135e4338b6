#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace lipvol {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // summed per-segment error estimates
};

/// Adaptive 61-point Gauss-Kronrod over consecutive segments
/// [breaks[i], breaks[i+1]]. The first/last break may be -inf/+inf.
/// Throws std::runtime_error if the summed error estimate exceeds
/// max(abs_tol, rel_tol * |value|) * 100 (non-convergence).
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     std::span<const double> breaks, double rel_tol = 1e-13,
                                     double abs_tol = 1e-15);

inline QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                            std::initializer_list<double> breaks,
                                            double rel_tol = 1e-13, double abs_tol = 1e-15) {
  std::vector<double> b(breaks);
  return integrate_piecewise(f, b, rel_tol, abs_tol);
}

}  // namespace lipvol
