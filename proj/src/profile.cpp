#include "lipvol/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lipvol/quadrature.hpp"
#include "lipvol/stats.hpp"

namespace lipvol::profile {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + e^z) using only e^{-|z|}.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// log(e^z - 1) for z > 0.
double log_expm1(double z) {
  return z > 30.0 ? z + std::log1p(-std::exp(-z)) : std::log(std::expm1(z));
}

double log1m_exp_neg_d(double d) { return std::log1p(-std::exp(-d)); }

// Untruncated F_d(x) = softplus(a)/d with
// a = log((e^{dx}(1 - e^{-d})) / (1 + e^{d(x-1)})).
double cdf_untruncated(double d, double x) {
  const double a = d * x + log1m_exp_neg_d(d) - softplus(d * (x - 1.0));
  return softplus(a) / d;
}

// Solves F_d(x) = u, 0 < u <= 1/2 in practice (larger u go through symmetry).
// Inverting e^{dF} = (1 + e^{dx}) / (1 + e^{d(x-1)}) gives
//   x = (1/d) [log(e^{du} - 1) - log(1 - e^{d(u-1)})].
double inverse_untruncated(double d, double u) {
  return (log_expm1(d * u) - std::log(-std::expm1(d * (u - 1.0)))) / d;
}

std::vector<double> make_breaks(std::vector<double> pts, double lo, double hi) {
  pts.push_back(lo);
  pts.push_back(hi);
  std::vector<double> out;
  for (double x : pts) {
    if (x >= lo && x <= hi) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

std::vector<double> layer_points(double d, double centre) {
  std::vector<double> pts;
  for (double k : {-60.0, -20.0, -5.0, 0.0, 5.0, 20.0, 60.0}) pts.push_back(centre + k / d);
  return pts;
}

std::vector<double> density_breaks(const ProfileParams& p, Mode mode) {
  auto pts = layer_points(p.d, 0.0);
  auto right = layer_points(p.d, 1.0);
  pts.insert(pts.end(), right.begin(), right.end());
  pts.push_back(0.5);
  if (mode == Mode::Truncated) return make_breaks(pts, p.window_lo(), p.window_hi());
  return make_breaks(pts, -kInf, kInf);
}

}  // namespace

ProfileParams::ProfileParams(double d_, double T_) : d(d_), T(T_) {
  if (!(d >= 2.0)) throw std::invalid_argument("ProfileParams: d must be >= 2");
  if (!(T > 0.0)) throw std::invalid_argument("ProfileParams: T must be > 0");
}

ProfileParams ProfileParams::with_default_window(double d) {
  return ProfileParams(d, std::log(d));
}

double window_mass(const ProfileParams& p) {
  // By the symmetry x -> 1 - x both tails carry F(lo).
  return 1.0 - 2.0 * cdf_untruncated(p.d, p.window_lo());
}

double log_rho(const ProfileParams& p, double x, Mode mode) {
  const double d = p.d;
  const double base = log1m_exp_neg_d(d) - softplus(-d * x) - softplus(d * (x - 1.0));
  if (mode == Mode::Untruncated) return base;
  if (x < p.window_lo() || x > p.window_hi()) return -kInf;
  return base - std::log(window_mass(p));
}

double rho(const ProfileParams& p, double x, Mode mode) { return std::exp(log_rho(p, x, mode)); }

double cdf(const ProfileParams& p, double x, Mode mode) {
  if (mode == Mode::Untruncated) return cdf_untruncated(p.d, x);
  if (x <= p.window_lo()) return 0.0;
  if (x >= p.window_hi()) return 1.0;
  return (cdf_untruncated(p.d, x) - cdf_untruncated(p.d, p.window_lo())) / window_mass(p);
}

double survival(const ProfileParams& p, double x, Mode mode) {
  // S(x) = F(1 - x) by symmetry of the density.
  if (mode == Mode::Untruncated) return cdf_untruncated(p.d, 1.0 - x);
  if (x <= p.window_lo()) return 1.0;
  if (x >= p.window_hi()) return 0.0;
  return (cdf_untruncated(p.d, 1.0 - x) - cdf_untruncated(p.d, p.window_lo())) / window_mass(p);
}

double inverse_cdf(const ProfileParams& p, double u, Mode mode) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("inverse_cdf: u must lie in (0, 1)");
  const double d = p.d;
  if (mode == Mode::Untruncated) {
    return u <= 0.5 ? inverse_untruncated(d, u) : 1.0 - inverse_untruncated(d, 1.0 - u);
  }
  const double tail = cdf_untruncated(d, p.window_lo());
  const double mass = window_mass(p);
  double x;
  if (u <= 0.5) {
    x = inverse_untruncated(d, tail + u * mass);
  } else {
    x = 1.0 - inverse_untruncated(d, tail + (1.0 - u) * mass);
  }
  return std::clamp(x, p.window_lo(), p.window_hi());
}

TruncatedSampler::TruncatedSampler(const ProfileParams& p)
    : p_(p),
      lower_tail_(cdf_untruncated(p.d, p.window_lo())),
      mass_(window_mass(p)),
      log_mass_(std::log(window_mass(p))) {}

double TruncatedSampler::draw(Rng& rng) const {
  const double u = rng.uniform_open01();
  double x;
  if (u <= 0.5) {
    x = inverse_untruncated(p_.d, lower_tail_ + u * mass_);
  } else {
    x = 1.0 - inverse_untruncated(p_.d, lower_tail_ + (1.0 - u) * mass_);
  }
  return std::clamp(x, p_.window_lo(), p_.window_hi());
}

double TruncatedSampler::weight_exponent(double x) const {
  if (x < p_.window_lo() || x > p_.window_hi()) return kInf;
  return log_mass_ - log_rho(p_, x, Mode::Untruncated);
}

std::vector<double> sample(const ProfileParams& p, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  TruncatedSampler sampler(p);
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = sampler.draw(rng);
  return out;
}

double entropy_H(const ProfileParams& p, Mode mode) {
  // rho <= 1 untruncated, so the integrand is nonnegative. The truncated law
  // is rho / m on I, giving H_T = (1/m) int_I -rho log rho + log m; integrating
  // rho / m directly would mix signs around rho / m = 1.
  const auto breaks = density_breaks(p, mode);
  auto f = [&](double x) {
    const double l = log_rho(p, x);
    return -std::exp(l) * l;
  };
  const double h = integrate_piecewise(f, breaks).value;
  if (mode == Mode::Untruncated) return h;
  const double m = window_mass(p);
  return h / m + std::log(m);
}

double bad_pair_Q(const ProfileParams& p, Mode mode) {
  auto f = [&](double x) { return rho(p, x, mode) * cdf(p, x - 1.0, mode); };
  std::vector<double> pts = layer_points(p.d, 1.0);
  pts.push_back(0.0);
  pts.push_back(2.0);
  std::vector<double> breaks;
  if (mode == Mode::Truncated) {
    // F_T(x - 1) vanishes for x < lo + 1.
    breaks = make_breaks(pts, p.window_lo() + 1.0, p.window_hi());
  } else {
    breaks = make_breaks(pts, -kInf, kInf);
  }
  return 2.0 * integrate_piecewise(f, breaks, 1e-13, 1e-18).value;
}

double norm_defect(const ProfileParams& p, Mode mode) {
  auto f = [&](double x) { return rho(p, x, mode); };
  return std::abs(integrate_piecewise(f, density_breaks(p, mode)).value - 1.0);
}

ProfileSummary profile_gain(const ProfileParams& p, Mode mode) {
  ProfileSummary s;
  s.H = entropy_H(p, mode);
  s.Q = bad_pair_Q(p, mode);
  s.gain = s.H - 0.5 * p.d * s.Q;
  s.norm_defect = norm_defect(p, mode);
  return s;
}

ExtremesReport neighbor_extremes(const ProfileParams& p, std::size_t d_neighbors,
                                 std::uint64_t replicas, std::uint64_t seed) {
  if (d_neighbors == 0) throw std::invalid_argument("neighbor_extremes: d_neighbors >= 1");
  if (replicas < 2) throw std::invalid_argument("neighbor_extremes: replicas >= 2");
  TruncatedSampler sampler(p);
  Rng rng(seed);
  RunningStats r1, r2, rlog, below;
  ExtremesReport out;
  out.d_neighbors = d_neighbors;
  out.replicas = replicas;
  out.scaled_max.reserve(replicas);
  for (std::uint64_t i = 0; i < replicas; ++i) {
    double hi = -kInf;
    double lo = kInf;
    for (std::size_t j = 0; j < d_neighbors; ++j) {
      const double x = sampler.draw(rng);
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    const double R = lo + 1.0 - hi;
    r1.add(R);
    r2.add(R * R);
    rlog.add(std::log1p(R));
    const double scaled = p.d * (hi - 1.0);
    out.scaled_max.push_back(scaled);
    below.add(scaled <= 0.0 ? 1.0 : 0.0);
  }
  out.mean_R = r1.mean();
  out.stderr_R = r1.stderr_of_mean();
  out.mean_R2 = r2.mean();
  out.stderr_R2 = r2.stderr_of_mean();
  out.mean_log1pR = rlog.mean();
  out.stderr_log1pR = rlog.stderr_of_mean();
  out.frac_scaled_max_nonpositive = below.mean();
  out.stderr_frac = below.stderr_of_mean();
  return out;
}

}  // namespace lipvol::profile
