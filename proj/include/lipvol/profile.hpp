#pragma once

#include <cstdint>
#include <vector>

#include "lipvol/rng.hpp"

namespace lipvol::profile {

/// The logistic boundary-layer density
///   rho_d(x) = (1 - e^{-d}) / ((1 + e^{-dx}) (1 + e^{d(x-1)}))
/// and its truncation to the window I = [-T/d, 1 + T/d].
struct ProfileParams {
  double d = 2.0;  // inverse boundary-layer width, >= 2
  double T = 0.0;  // window padding, > 0

  ProfileParams(double d, double T);
  /// T = log d.
  static ProfileParams with_default_window(double d);

  double window_lo() const { return -T / d; }
  double window_hi() const { return 1.0 + T / d; }
  double window_length() const { return 1.0 + 2.0 * T / d; }
  /// T^2/d; the asymptotic argument needs this small.
  double padding_ratio() const { return T * T / d; }
  bool padding_warning() const { return padding_ratio() > 0.5; }
};

enum class Mode { Untruncated, Truncated };

/// log rho at x. Stable for any finite x (no raw exponentials of large
/// arguments). Truncated mode returns -inf outside the window.
double log_rho(const ProfileParams& p, double x, Mode mode = Mode::Untruncated);
double rho(const ProfileParams& p, double x, Mode mode = Mode::Untruncated);

/// F_d(x) = (1/d) log((1 + e^{dx}) / (1 + e^{d(x-1)})); truncated mode gives
/// the CDF of the renormalized window law (0 below, 1 above the window).
double cdf(const ProfileParams& p, double x, Mode mode = Mode::Untruncated);
/// 1 - cdf, computed without cancellation.
double survival(const ProfileParams& p, double x, Mode mode = Mode::Untruncated);

/// Mass of the untruncated law inside the window, F(hi) - F(lo).
double window_mass(const ProfileParams& p);

/// Solves cdf(x) = u for u in (0, 1). Throws std::domain_error otherwise.
double inverse_cdf(const ProfileParams& p, double u, Mode mode = Mode::Untruncated);

/// Inverse-CDF sampler for the truncated, renormalized law. Precomputes the
/// window mass so each draw costs one closed-form inversion.
class TruncatedSampler {
 public:
  explicit TruncatedSampler(const ProfileParams& p);

  double draw(Rng& rng) const;
  /// W(x) = -log rho_T(x), the importance weight exponent; +inf outside I.
  double weight_exponent(double x) const;

  const ProfileParams& params() const { return p_; }
  double log_window_mass() const { return log_mass_; }

 private:
  ProfileParams p_;
  double lower_tail_ = 0.0;  // F(lo) = S(hi)
  double mass_ = 1.0;
  double log_mass_ = 0.0;
};

/// count i.i.d. draws from the truncated, renormalized law (all in I).
std::vector<double> sample(const ProfileParams& p, std::size_t count, std::uint64_t seed);

double entropy_H(const ProfileParams& p, Mode mode = Mode::Untruncated);
/// P(|X - Y| > 1) for independent X, Y from the profile, via
/// Q = 2 * integral of rho(x) F(x - 1).
double bad_pair_Q(const ProfileParams& p, Mode mode = Mode::Untruncated);

struct ProfileSummary {
  double H = 0.0;
  double Q = 0.0;
  double gain = 0.0;         // H - (d/2) Q
  double norm_defect = 0.0;  // |integral of rho - 1| over the support in use
};

ProfileSummary profile_gain(const ProfileParams& p, Mode mode = Mode::Untruncated);

/// |integral of rho - 1| by quadrature.
double norm_defect(const ProfileParams& p, Mode mode = Mode::Untruncated);

struct ExtremesReport {
  std::size_t d_neighbors = 0;
  std::uint64_t replicas = 0;
  double mean_R = 0.0, stderr_R = 0.0;
  double mean_R2 = 0.0, stderr_R2 = 0.0;
  double mean_log1pR = 0.0, stderr_log1pR = 0.0;
  double frac_scaled_max_nonpositive = 0.0;  // P(d (M - 1) <= 0)
  double stderr_frac = 0.0;
  std::vector<double> scaled_max;  // d (M - 1) per replica
};

/// Draws d_neighbors truncated samples per replica and records
/// M = max, m = min, R = m + 1 - M.
ExtremesReport neighbor_extremes(const ProfileParams& p, std::size_t d_neighbors,
                                 std::uint64_t replicas, std::uint64_t seed);

}  // namespace lipvol::profile
