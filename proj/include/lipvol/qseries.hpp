#pragma once

#include <cstdint>
#include <vector>

#include "lipvol/rational.hpp"

namespace lipvol::qseries {

/// A real value with a rigorous bound on its truncation error.
struct QValue {
  double value = 0.0;
  double err = 0.0;
};

/// (q;q)_r = prod_{j=1}^r (1 - q^j), 0 < q < 1.
double q_pochhammer(double q, unsigned long r);

/// Largest q accepted by the infinite products.
inline constexpr double kMaxInfiniteQ = 1.0 - 1e-12;

/// log (q;q)_inf with the truncation bound on the log.
///
/// Truncates at the first J with q^{J+1} / ((1-q)(1-q^{J+1})) < 1e-14, which
/// bounds the neglected -log prod_{j>J}(1-q^j). `err` is that bound. Works
/// in the log domain, so it stays usable for q = 1 - d/n where the product
/// itself underflows.
QValue log_q_pochhammer_inf(double q);

/// (q;q)_inf. `value` is the truncated product (an upper bound on the true
/// value); the true value lies in [value - err, value].
QValue q_pochhammer_inf(double q);

/// 1 / (z;q)_inf = prod_{j>=0} 1/(1 - z q^j) for 0 <= z < 1, with the same
/// truncation rule applied to the tail sum of z q^j.
QValue inv_z_pochhammer_inf(double z, double q);

/// Coefficients of the Gaussian binomial [n_top choose r]_q as a polynomial
/// in q; coefficient k counts binary words with r ones and n_top - r zeros
/// having k inversions. Built by the Pascal-type recurrence.
std::vector<BigInt> gaussian_binomial_poly(unsigned n_top, unsigned r);

/// [n_top choose r]_q = prod_{j=1}^r (1 - q^{n_top-r+j}) / (1 - q^j) at an
/// exact rational q. At q = 1 the polynomial form is evaluated instead,
/// which gives the ordinary binomial coefficient. Throws if r > n_top.
ExactRational gaussian_binomial(unsigned n_top, unsigned r, const ExactRational& q);

/// A_{N,r}(q) = C(N+r, r)^{-1} [N+r choose r]_q: the integral over
/// [0,1]^N x [0,1]^r of q^{#{(i,u) : y_u > t_i}}.
ExactRational one_tail_A(unsigned N, unsigned r, const ExactRational& q);

inline constexpr unsigned kBruteforceMaxLetters = 22;

/// Same quantity by enumerating all C(N+r, r) orderings of the N + r
/// variables as binary words and summing q^{inversions}. N + r <= 22.
ExactRational one_tail_A_bruteforce(unsigned N, unsigned r, const ExactRational& q);

/// C(N+r, r)^{-1} prod_{j=1}^r 1/(1-q^j): the upper bound on A_{N,r}(q)
/// obtained from 1 - q^{N+j} <= 1.
ExactRational one_tail_A_upper(unsigned N, unsigned r, const ExactRational& q);

/// Bound on the expected non-deep volume of a fixed (S, U, W) split with
/// |S| = N, |U| = r, |W| = s:
///   q^{rs+r} C(N-1+r, r)^{-1} C(N-1+s, s)^{-1} prod_{j<=r} 1/(1-q^j) prod_{j<=s} 1/(1-q^j).
/// Requires N >= 1 (the anchor belongs to S).
ExactRational fixed_sets_bound(unsigned N, unsigned r, unsigned s, const ExactRational& q);

struct CorrelationReport {
  double lhs_estimate = 0.0;  // MC estimate of the integral of B_r(t) C_s(t) over [0,1]^N
  double stderr = 0.0;
  double rhs = 0.0;           // A_{N,r}(q) A_{N,s}(q), exact then rounded
  ExactRational rhs_exact;
  std::uint64_t samples = 0;
  bool exact = false;         // r == 0 or s == 0: lhs is computed exactly
  bool pass = false;          // lhs_estimate <= rhs + 4 stderr
};

/// B_r(t) = b(t)^r with b(t) = int_0^1 q^{#{i : t_i < y}} dy (exact,
/// piecewise constant in y over the sorted t).
double tail_factor_upper(const std::vector<double>& t, double q);
/// C_s(t) = c(t)^s with c(t) = int_0^1 q^{#{i : t_i > 1 - z}} dz.
double tail_factor_lower(const std::vector<double>& t, double q);

/// Checks int B_r C_s <= A_{N,r} A_{N,s} with t ~ U[0,1]^N. samples >= 10^4.
CorrelationReport monotone_correlation_check(unsigned N, unsigned r, unsigned s,
                                             const ExactRational& q, std::uint64_t samples,
                                             std::uint64_t seed);

/// sum_{0<=r,s<=R} q^{rs} / ((q;q)_r (q;q)_s), returned as a log so that
/// large sums near q = 1 stay representable. Rows are summed in descending
/// magnitude with compensated summation; the tail of a row is dropped once a
/// geometric bound puts it below 1e-17 of the row.
double log_two_tail_sum(double q, unsigned long R);

/// exp(log_two_tail_sum). Throws std::overflow_error if not representable.
double two_tail_sum(double q, unsigned long R);

/// (R + 1 + R/(1-q)) / (q;q)_inf, the explicit bound on two_tail_sum.
double two_tail_bound(double q, unsigned long R);

/// sum_{s>=0} q^{rs} / (q;q)_s summed directly until the tail bound drops
/// below 1e-17 of the partial sum. Should equal 1/(q^r;q)_inf.
QValue row_sum_direct(double q, unsigned long r);

/// -int_0^inf log(1 - e^{-t}) dt (= pi^2/6) by adaptive quadrature on
/// [eps, inf) plus the small-t expansion on [0, eps].
QValue zeta_integral();

}  // namespace lipvol::qseries
