#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lipvol/qseries.hpp"
#include "lipvol/rational.hpp"
#include "lipvol/rng.hpp"

using namespace lipvol;
using namespace lipvol::qseries;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

ExactRational Q(long a, long b) { return make_rational(a, b); }

// Euler product with a fixed large cutoff; q^201 is far below double epsilon for q <= 1/2.
double euler_product_oracle(double q, int terms = 400) {
  double p = 1.0;
  for (int j = 1; j <= terms; ++j) p *= 1.0 - std::pow(q, j);
  return p;
}

double poch(double q, int r) {
  double p = 1.0;
  for (int j = 1; j <= r; ++j) p *= 1.0 - std::pow(q, j);
  return p;
}

// int_0^1 q^{#{i : t_i < y}} dy by sorting.
double b_oracle(std::vector<double> t, double q) {
  std::sort(t.begin(), t.end());
  double total = 0.0, prev = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    total += std::pow(q, static_cast<double>(k)) * (t[k] - prev);
    prev = t[k];
  }
  return total + std::pow(q, static_cast<double>(t.size())) * (1.0 - prev);
}

double c_oracle(std::vector<double> t, double q) {
  for (auto& x : t) x = 1.0 - x;
  return b_oracle(t, q);
}

}  // namespace

TEST_CASE("q_pochhammer examples") {
  CHECK(q_pochhammer(0.7, 0) == 1.0);
  CHECK(q_pochhammer(0.5, 1) == 0.5);
  CHECK(q_pochhammer(0.5, 2) == 0.375);
  CHECK_THROWS_AS(q_pochhammer(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(q_pochhammer(0.0, 2), std::invalid_argument);
}

TEST_CASE("q_pochhammer_inf examples") {
  const auto v = q_pochhammer_inf(0.5);
  CHECK(v.value == doctest::Approx(0.2887880951).epsilon(1e-9));
  CHECK(v.value == doctest::Approx(euler_product_oracle(0.5)).epsilon(1e-13));
  CHECK(v.err >= 0.0);
  CHECK(v.err < 1e-13);
  CHECK(q_pochhammer_inf(1e-9).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS(q_pochhammer_inf(1.0 - 1e-13));
  CHECK_THROWS(q_pochhammer_inf(1.5));
}

TEST_CASE("q_pochhammer_inf near one") {
  const double d = 5.0, n = 1e4;
  const double lv = -log_q_pochhammer_inf(1.0 - d / n).value;
  const double target = kZeta2 * n / d;
  CHECK(lv >= 0.98 * target);
  CHECK(lv <= 1.02 * target);
  for (auto [dd, nn] : {std::pair{2.0, 1e4}, std::pair{5.0, 1e4}, std::pair{10.0, 1e5}}) {
    const double ratio = -log_q_pochhammer_inf(1.0 - dd / nn).value * 6.0 * dd /
                         (std::numbers::pi * std::numbers::pi * nn);
    CHECK(std::abs(ratio - 1.0) <= 0.03);
  }
}

TEST_CASE("partial products bracket the infinite product") {
  for (double q : {0.1, 0.5, 0.9}) {
    const auto inf = q_pochhammer_inf(q);
    for (unsigned long r = 0; r <= 60; ++r) {
      const double part = q_pochhammer(q, r);
      CHECK(inf.value - inf.err <= part);
      const double tail = std::pow(q, r + 1) / ((1 - q) * (1 - std::pow(q, r + 1)));
      CHECK(part - inf.value <= inf.err + tail * part + 1e-15);
    }
  }
}

TEST_CASE("gaussian binomial examples") {
  CHECK(gaussian_binomial(2, 1, Q(1, 2)) == Q(3, 2));
  for (unsigned n = 0; n < 6; ++n) CHECK(gaussian_binomial(n, 0, Q(2, 7)) == 1);
  CHECK(gaussian_binomial(4, 2, ExactRational(1)) == 6);
  CHECK_THROWS(gaussian_binomial(2, 3, Q(1, 2)));
  const auto poly = gaussian_binomial_poly(4, 2);
  CHECK(poly == std::vector<BigInt>{1, 1, 2, 1, 1});
  for (unsigned n = 0; n <= 8; ++n) {
    for (unsigned r = 0; r <= n; ++r) {
      BigInt sum = 0;
      for (const auto& c : gaussian_binomial_poly(n, r)) sum += c;
      CHECK(sum == binomial(n, r));
      // product formula at q = 3/5 against the Horner evaluation of the polynomial
      ExactRational q = Q(3, 5), acc = 0;
      const auto coeffs = gaussian_binomial_poly(n, r);
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * q + ExactRational(*it);
      CHECK(gaussian_binomial(n, r, q) == acc);
    }
  }
}

TEST_CASE("one_tail_A examples") {
  CHECK(one_tail_A(1, 1, Q(1, 2)) == Q(3, 4));
  CHECK(one_tail_A(3, 0, Q(1, 2)) == 1);
  CHECK(one_tail_A(2, 1, Q(1, 2)) == Q(7, 12));
  CHECK(one_tail_A_bruteforce(1, 1, Q(1, 2)) == Q(3, 4));
  CHECK(one_tail_A_bruteforce(0, 5, Q(1, 3)) == 1);
  CHECK(one_tail_A_bruteforce(3, 3, Q(2, 5)) == one_tail_A(3, 3, Q(2, 5)));
  CHECK_THROWS(one_tail_A_bruteforce(12, 11, Q(1, 2)));
}

TEST_CASE("one_tail_A identity and upper bound on the grid") {
  for (const auto& q : {Q(1, 3), Q(1, 2), Q(9, 10)}) {
    for (unsigned N = 0; N <= 6; ++N) {
      for (unsigned r = 0; r <= 6; ++r) {
        const auto a = one_tail_A(N, r, q);
        CHECK(a == one_tail_A_bruteforce(N, r, q));
        ExactRational upper = 1 / ExactRational(binomial(N + r, r));
        for (unsigned j = 1; j <= r; ++j) upper /= 1 - pow(q, j);
        CHECK(one_tail_A_upper(N, r, q) == upper);
        CHECK(a <= upper);
      }
    }
  }
}

TEST_CASE("tail factors match sorted-sweep oracles") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> t(1 + trial % 6);
    for (auto& x : t) x = rng.uniform01();
    for (double q : {0.3, 0.9}) {
      CHECK(tail_factor_upper(t, q) == doctest::Approx(b_oracle(t, q)).epsilon(1e-12));
      CHECK(tail_factor_lower(t, q) == doctest::Approx(c_oracle(t, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotone correlation check") {
  const auto r0 = monotone_correlation_check(3, 0, 2, Q(1, 2), 10000, 1);
  CHECK(r0.exact);
  CHECK(r0.lhs_estimate == doctest::Approx(to_double(one_tail_A(3, 2, Q(1, 2)))));
  CHECK(r0.pass);

  const auto a = monotone_correlation_check(2, 1, 1, Q(1, 2), 100000, 7);
  CHECK(a.rhs == doctest::Approx(49.0 / 144.0));
  CHECK(a.lhs_estimate <= 49.0 / 144.0 + 4 * a.stderr);
  CHECK(a.pass);

  // Independent MC oracle for the same integral.
  Rng rng(99);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    std::vector<double> t{rng.uniform01(), rng.uniform01()};
    sum += b_oracle(t, 0.5) * c_oracle(t, 0.5);
  }
  CHECK(std::abs(sum / n - a.lhs_estimate) < 8 * a.stderr);

  const auto b = monotone_correlation_check(1, 1, 1, Q(9, 10), 100000, 3);
  CHECK(b.pass);
  CHECK_THROWS(monotone_correlation_check(1, 1, 1, Q(1, 2), 100, 3));
}

TEST_CASE("q-binomial theorem rows") {
  for (unsigned long r : {1UL, 2UL, 3UL}) {
    const double q = 0.5;
    const auto direct = row_sum_direct(q, r);
    const auto closed = inv_z_pochhammer_inf(std::pow(q, r), q);
    CHECK(std::abs(direct.value - closed.value) <= 1e-10);
    double oracle = 0.0;
    for (int s = 0; s < 200; ++s) oracle += std::pow(q, double(r) * s) / poch(q, s);
    CHECK(direct.value == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("two-tail sum") {
  CHECK(two_tail_sum(0.5, 0) == 1.0);
  double table = 0.0;
  for (int r = 0; r <= 2; ++r) {
    for (int s = 0; s <= 2; ++s) table += std::pow(0.5, r * s) / (poch(0.5, r) * poch(0.5, s));
  }
  CHECK(table == doctest::Approx(15.4444444444).epsilon(1e-10));
  CHECK(std::abs(two_tail_sum(0.5, 2) - table) <= 1e-9);
  CHECK(two_tail_sum(0.5, 2) <= two_tail_bound(0.5, 2));
  CHECK(two_tail_bound(0.5, 2) == doctest::Approx((3 + 2 / 0.5) / euler_product_oracle(0.5)));
  for (double q : {0.2, 0.7, 0.95}) {
    for (unsigned long R : {1UL, 5UL, 40UL}) CHECK(two_tail_sum(q, R) <= two_tail_bound(q, R));
  }
  CHECK_THROWS_AS(two_tail_sum(0.999, 20000), std::overflow_error);
  CHECK(std::isfinite(log_two_tail_sum(0.999, 20000)));
}

TEST_CASE("zeta integral") {
  const auto z = zeta_integral();
  CHECK(std::abs(z.value - kZeta2) < 1e-10);
  CHECK(z.value == doctest::Approx(1.6449340668).epsilon(1e-10));
  // Basel series to 10^6 with its Euler-Maclaurin tail.
  double basel = 0.0;
  const double N = 1e6;
  for (double k = N; k >= 1.0; k -= 1.0) basel += 1.0 / (k * k);
  basel += 1.0 / N - 1.0 / (2 * N * N) + 1.0 / (6 * N * N * N);
  CHECK(std::abs(z.value - basel) < 1e-10);
  // Small-t piece: int_0^eps -log(t) dt = eps (1 - log eps) dominates the head.
  const double eps = 1e-3;
  CHECK(eps * (1 - std::log(eps)) == doctest::Approx(0.0079077553).epsilon(1e-8));
}
