#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace lipvol {

/// Streaming mean/variance (Welford). merge() is the monoidal combine used
/// when replicas are reduced, so the result does not depend on grouping up
/// to floating-point rounding; callers that need bit-identical output merge
/// in a fixed order.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double n1 = static_cast<double>(count_);
    const double n2 = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double total = n1 + n2;
    mean_ += delta * n2 / total;
    m2_ += other.m2_ + delta * delta * n1 * n2 / total;
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_of_mean() const {
    return count_ > 0 ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Mean of exp(y_i) accumulated in the log domain with a streaming max
/// shift. Also tracks the second moment so a delta-method standard error of
/// log(mean) is available.
class LogMeanExp {
 public:
  void add(double log_weight) {
    ++count_;
    if (log_weight == -std::numeric_limits<double>::infinity()) return;
    if (log_weight > shift_) {
      const double scale = std::exp(shift_ - log_weight);
      sum_ *= scale;
      sum_sq_ *= scale * scale;
      shift_ = log_weight;
    }
    const double w = std::exp(log_weight - shift_);
    sum_ += w;
    sum_sq_ += w * w;
  }

  std::uint64_t count() const { return count_; }

  /// log((1/count) * sum exp(y_i)); -inf when every weight is zero.
  double log_mean() const {
    if (count_ == 0 || sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(sum_) - std::log(static_cast<double>(count_));
  }

  /// Standard error of log_mean() by the delta method: se(mean)/mean.
  double stderr_log() const {
    if (count_ < 2 || sum_ == 0.0) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(count_);
    const double mean = sum_ / n;
    const double var = std::max(0.0, (sum_sq_ - n * mean * mean) / (n - 1.0));
    return std::sqrt(var / n) / mean;
  }

 private:
  std::uint64_t count_ = 0;
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

/// Neumaier-compensated sum of the given terms in the given order.
inline double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      comp += (sum - s) + t;
    } else {
      comp += (t - s) + sum;
    }
    sum = s;
  }
  return sum + comp;
}

}  // namespace lipvol
