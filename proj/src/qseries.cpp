#include "lipvol/qseries.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lipvol/quadrature.hpp"
#include "lipvol/rng.hpp"
#include "lipvol/stats.hpp"

namespace lipvol::qseries {

namespace {

constexpr double kTruncationTol = 1e-14;
constexpr double kRowTailTol = 1e-17;

void require_open_unit(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": q must lie in (0, 1)");
  }
}

void require_infinite_ok(double q, const char* what) {
  require_open_unit(q, what);
  if (q >= kMaxInfiniteQ) {
    throw std::invalid_argument(std::string(what) +
                                ": q too close to 1, truncation length would explode");
  }
}

// Tail bound for -sum_{j>J} log(1 - z q^j) with all factors z q^j < 1.
double tail_bound(double z, double q, double log_q, unsigned long J) {
  const double zq = z * std::exp(static_cast<double>(J + 1) * log_q);
  return zq / ((1.0 - q) * (1.0 - zq));
}

// -sum_{j>=0} log(1 - z q^j), truncated by the rule above.
QValue neg_log_z_pochhammer(double z, double q) {
  const double log_q = std::log(q);
  std::vector<double> terms;
  unsigned long j = 0;
  for (;; ++j) {
    const double zq = z * std::exp(static_cast<double>(j) * log_q);
    terms.push_back(-std::log1p(-zq));
    const double bound = tail_bound(z, q, log_q, j);
    if (bound < kTruncationTol) return {compensated_sum(terms), bound};
  }
}

}  // namespace

double q_pochhammer(double q, unsigned long r) {
  require_open_unit(q, "q_pochhammer");
  double out = 1.0;
  double qj = 1.0;
  for (unsigned long j = 1; j <= r; ++j) {
    qj *= q;
    out *= 1.0 - qj;
    if (out == 0.0) break;
  }
  return out;
}

QValue log_q_pochhammer_inf(double q) {
  require_infinite_ok(q, "log_q_pochhammer_inf");
  // (q;q)_inf = (z;q)_inf at z = q.
  const QValue neg = neg_log_z_pochhammer(q, q);
  return {-neg.value, neg.err};
}

QValue q_pochhammer_inf(double q) {
  const QValue lg = log_q_pochhammer_inf(q);
  const double value = std::exp(lg.value);
  return {value, -value * std::expm1(-lg.err)};
}

QValue inv_z_pochhammer_inf(double z, double q) {
  require_infinite_ok(q, "inv_z_pochhammer_inf");
  if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("inv_z_pochhammer_inf: need 0 <= z < 1");
  if (z == 0.0) return {1.0, 0.0};
  const QValue neg = neg_log_z_pochhammer(z, q);
  const double value = std::exp(neg.value);
  return {value, value * std::expm1(neg.err)};
}

std::vector<BigInt> gaussian_binomial_poly(unsigned n_top, unsigned r) {
  if (r > n_top) throw std::invalid_argument("gaussian_binomial: r > n_top");
  // row[k] = [m choose k]_q as coefficient vectors, m increasing.
  std::vector<std::vector<BigInt>> row(r + 1);
  row[0] = {BigInt(1)};
  for (unsigned m = 1; m <= n_top; ++m) {
    for (unsigned k = std::min(m, r); k >= 1; --k) {
      // [m,k] = [m-1,k-1] + q^k [m-1,k]
      const std::vector<BigInt>& a = row[k - 1];
      const std::vector<BigInt>& b = row[k];  // empty when k > m-1
      std::vector<BigInt> next(std::max(a.size(), b.empty() ? 0 : b.size() + k), BigInt(0));
      for (std::size_t i = 0; i < a.size(); ++i) next[i] += a[i];
      for (std::size_t i = 0; i < b.size(); ++i) next[i + k] += b[i];
      row[k] = std::move(next);
    }
  }
  return row[r];
}

ExactRational gaussian_binomial(unsigned n_top, unsigned r, const ExactRational& q) {
  if (r > n_top) throw std::invalid_argument("gaussian_binomial: r > n_top");
  if (q == 1 || q == -1) {
    const auto poly = gaussian_binomial_poly(n_top, r);
    ExactRational out(0);
    ExactRational qk(1);
    for (const auto& c : poly) {
      out += ExactRational(c) * qk;
      qk *= q;
    }
    return out;
  }
  ExactRational out(1);
  for (unsigned j = 1; j <= r; ++j) {
    out *= (ExactRational(1) - pow(q, n_top - r + j)) / (ExactRational(1) - pow(q, j));
  }
  out.canonicalize();
  return out;
}

ExactRational one_tail_A(unsigned N, unsigned r, const ExactRational& q) {
  ExactRational out = gaussian_binomial(N + r, r, q) / ExactRational(binomial(N + r, r));
  out.canonicalize();
  return out;
}

ExactRational one_tail_A_bruteforce(unsigned N, unsigned r, const ExactRational& q) {
  const unsigned letters = N + r;
  if (letters > kBruteforceMaxLetters) {
    throw std::invalid_argument("one_tail_A_bruteforce: N + r = " + std::to_string(letters) +
                                " exceeds the enumeration limit " +
                                std::to_string(kBruteforceMaxLetters));
  }
  // A set bit at position p means the p-th smallest variable is a y; each y
  // contributes one inversion per t below it.
  std::vector<std::uint64_t> histogram(static_cast<std::size_t>(N) * r + 1, 0);
  std::uint64_t words = 0;
  const std::uint64_t end = std::uint64_t{1} << letters;
  std::uint64_t mask = (std::uint64_t{1} << r) - 1;
  while (mask < end) {
    unsigned inversions = 0;
    unsigned ones_seen = 0;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const auto pos = static_cast<unsigned>(std::countr_zero(rest));
      inversions += pos - ones_seen;
      ++ones_seen;
    }
    ++histogram[inversions];
    ++words;
    if (mask == 0) break;
    // Gosper's hack: next mask with the same popcount.
    const std::uint64_t low = mask & (~mask + 1);
    const std::uint64_t ripple = mask + low;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
  ExactRational sum(0);
  ExactRational qk(1);
  for (auto count : histogram) {
    if (count != 0) sum += ExactRational(BigInt(static_cast<unsigned long>(count))) * qk;
    qk *= q;
  }
  ExactRational out = sum / ExactRational(BigInt(static_cast<unsigned long>(words)));
  out.canonicalize();
  return out;
}

ExactRational one_tail_A_upper(unsigned N, unsigned r, const ExactRational& q) {
  ExactRational out(1);
  for (unsigned j = 1; j <= r; ++j) out /= ExactRational(1) - pow(q, j);
  out /= ExactRational(binomial(N + r, r));
  out.canonicalize();
  return out;
}

ExactRational fixed_sets_bound(unsigned N, unsigned r, unsigned s, const ExactRational& q) {
  if (N == 0) throw std::invalid_argument("fixed_sets_bound: N must be >= 1 (anchor in S)");
  ExactRational out = pow(q, static_cast<unsigned long>(r) * s + r);
  out /= ExactRational(binomial(N - 1 + r, r));
  out /= ExactRational(binomial(N - 1 + s, s));
  for (unsigned j = 1; j <= r; ++j) out /= ExactRational(1) - pow(q, j);
  for (unsigned j = 1; j <= s; ++j) out /= ExactRational(1) - pow(q, j);
  out.canonicalize();
  return out;
}

namespace {

// int_0^1 q^{count(w)} dw where count is `up ? #{t_i < w} : #{t_i > w}`,
// over sorted t.
double piecewise_power_integral(std::vector<double> t, double q, bool up) {
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double next = k < n ? t[k] : 1.0;
    const auto count = static_cast<double>(up ? k : n - k);
    total += std::pow(q, count) * (next - prev);
    prev = next;
  }
  return total;
}

}  // namespace

double tail_factor_upper(const std::vector<double>& t, double q) {
  return piecewise_power_integral(t, q, true);
}

double tail_factor_lower(const std::vector<double>& t, double q) {
  // #{t_i > 1 - z} over z in [0,1] is #{t_i > w} over w = 1 - z in [0,1].
  return piecewise_power_integral(t, q, false);
}

CorrelationReport monotone_correlation_check(unsigned N, unsigned r, unsigned s,
                                             const ExactRational& q, std::uint64_t samples,
                                             std::uint64_t seed) {
  if (samples < 10000) throw std::invalid_argument("monotone_correlation_check: samples >= 10^4");
  if (!(q > 0 && q < 1)) throw std::invalid_argument("monotone_correlation_check: q in (0,1)");
  CorrelationReport report;
  report.samples = samples;
  report.rhs_exact = one_tail_A(N, r, q) * one_tail_A(N, s, q);
  report.rhs = to_double(report.rhs_exact);

  if (r == 0 || s == 0) {
    // One factor is identically 1; the integral of the other is A_{N,*}.
    report.exact = true;
    report.lhs_estimate = to_double(one_tail_A(N, r == 0 ? s : r, q));
    report.stderr = 0.0;
    report.pass = report.lhs_estimate <= report.rhs;
    return report;
  }

  const double qd = to_double(q);
  Rng rng(seed);
  RunningStats stats;
  std::vector<double> t(N);
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (auto& ti : t) ti = rng.uniform01();
    const double b = tail_factor_upper(t, qd);
    const double c = tail_factor_lower(t, qd);
    stats.add(std::pow(b, r) * std::pow(c, s));
  }
  report.lhs_estimate = stats.mean();
  report.stderr = stats.stderr_of_mean();
  report.pass = report.lhs_estimate <= report.rhs + 4.0 * report.stderr;
  return report;
}

namespace {

constexpr unsigned long kMaxTwoTailR = 1000000;

// log of sum exp(terms), summing in descending magnitude.
double log_sum_descending(std::vector<double>& log_terms) {
  if (log_terms.empty()) return -std::numeric_limits<double>::infinity();
  std::sort(log_terms.begin(), log_terms.end(), std::greater<>());
  const double top = log_terms.front();
  std::vector<double> scaled(log_terms.size());
  for (std::size_t i = 0; i < log_terms.size(); ++i) scaled[i] = std::exp(log_terms[i] - top);
  return top + std::log(compensated_sum(scaled));
}

}  // namespace

double log_two_tail_sum(double q, unsigned long R) {
  require_open_unit(q, "two_tail_sum");
  if (R > kMaxTwoTailR) throw std::invalid_argument("two_tail_sum: R exceeds 10^6");
  const double log_q = std::log(q);
  std::vector<double> log_poch(R + 1, 0.0);  // log (q;q)_r
  for (unsigned long r = 1; r <= R; ++r) {
    log_poch[r] = log_poch[r - 1] + std::log1p(-std::exp(static_cast<double>(r) * log_q));
  }
  std::vector<double> row_logs;
  row_logs.reserve(R + 1);
  std::vector<double> row;
  for (unsigned long r = 0; r <= R; ++r) {
    row.clear();
    const double qr = std::exp(static_cast<double>(r) * log_q);
    double row_max = -std::numeric_limits<double>::infinity();
    for (unsigned long s = 0; s <= R; ++s) {
      const double lt = static_cast<double>(r) * static_cast<double>(s) * log_q - log_poch[r] -
                        log_poch[s];
      row.push_back(lt);
      row_max = std::max(row_max, lt);
      // term(s+1)/term(s) = q^r / (1 - q^{s+1}), decreasing in s.
      const double ratio = qr / (-std::expm1(static_cast<double>(s + 1) * log_q));
      if (ratio < 1.0) {
        const double log_tail = lt + std::log(ratio) - std::log1p(-ratio);
        if (log_tail - row_max < std::log(kRowTailTol)) break;
      }
    }
    row_logs.push_back(log_sum_descending(row));
  }
  return log_sum_descending(row_logs);
}

double two_tail_sum(double q, unsigned long R) {
  const double lg = log_two_tail_sum(q, R);
  if (lg > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("two_tail_sum: value exceeds double range (log = " +
                              std::to_string(lg) + "); use log_two_tail_sum");
  }
  return std::exp(lg);
}

double two_tail_bound(double q, unsigned long R) {
  const double prefactor = static_cast<double>(R + 1) + static_cast<double>(R) / (1.0 - q);
  return prefactor * std::exp(-log_q_pochhammer_inf(q).value);
}

QValue row_sum_direct(double q, unsigned long r) {
  require_open_unit(q, "row_sum_direct");
  if (r == 0) throw std::invalid_argument("row_sum_direct: r must be >= 1 (row 0 diverges)");
  const double qr = std::pow(q, static_cast<double>(r));
  std::vector<double> terms;
  double term = 1.0;
  double partial = 0.0;
  double qs1 = q;  // q^{s+1}
  for (unsigned long s = 0;; ++s) {
    terms.push_back(term);
    partial += term;
    const double ratio = qr / (1.0 - qs1);
    if (ratio < 1.0) {
      const double tail = term * ratio / (1.0 - ratio);
      if (tail < kRowTailTol * partial) return {compensated_sum(terms), tail};
    }
    term *= ratio;
    qs1 *= q;
  }
}

QValue zeta_integral() {
  constexpr double eps = 1e-3;
  auto f = [](double t) { return -std::log(-std::expm1(-t)); };
  const auto quad = integrate_piecewise(f, {eps, 0.1, 1.0, 5.0, 20.0, 60.0,
                                            std::numeric_limits<double>::infinity()});
  // f(t) = -log t + t/2 - t^2/24 + t^4/2880 + O(t^6) near 0.
  const double head = eps * (1.0 - std::log(eps)) + eps * eps / 4.0 - eps * eps * eps / 72.0 +
                      std::pow(eps, 5) / 14400.0;
  const double series_remainder = std::pow(eps, 7) / 100000.0;
  return {head + quad.value, quad.abs_error + series_remainder};
}

}  // namespace lipvol::qseries
