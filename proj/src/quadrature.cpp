#include "lipvol/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace lipvol {

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     std::span<const double> breaks, double rel_tol,
                                     double abs_tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (breaks.size() < 2) throw std::invalid_argument("integrate_piecewise: need >= 2 breaks");
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(a < b)) throw std::invalid_argument("integrate_piecewise: breaks must increase");
    // Accept a single 61-point panel when it already meets the tolerance.
    // Forcing bisection below the rounding floor only sums rounding noise
    // from thousands of panels into the error estimate.
    double err = 0.0;
    double v = gauss_kronrod<double, 61>::integrate(f, a, b, 0, rel_tol, &err);
    if (!(err <= std::max(abs_tol, 16 * rel_tol * std::abs(v)))) {
      v = gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &err);
    }
    out.value += v;
    out.abs_error += err;
  }
  const double budget = std::max(abs_tol, rel_tol * std::abs(out.value)) * 100.0;
  if (!std::isfinite(out.value) || out.abs_error > budget) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "value=%.6g error estimate=%.3g", out.value, out.abs_error);
    throw std::runtime_error(std::string("quadrature did not converge: ") + buf);
  }
  return out;
}

}  // namespace lipvol
