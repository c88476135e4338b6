#include "lipvol/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lipvol {

ExactRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  ExactRational q(num, den);
  q.canonicalize();
  return q;
}

ExactRational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') {
        throw std::invalid_argument("bad rational '" + std::string(text) + "'");
      }
    }
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return BigInt(digits, 10);
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return ExactRational(parse_int(text));
  return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string to_fraction_string(const ExactRational& q) {
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

double log_of(const BigInt& z) {
  if (z <= 0) throw std::domain_error("log of non-positive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double log_of(const ExactRational& q) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  return log_of(q.get_num()) - log_of(q.get_den());
}

double to_double(const ExactRational& q) {
  if (q == 0) return 0.0;
  // mpq_get_d truncates; scale through mpf at 128 bits for correct rounding
  // of ordinary values and exponent range safety.
  mpf_class f(q, 128);
  return f.get_d();
}

ExactRational pow(const ExactRational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  return ExactRational(num, den);  // already reduced: gcd is preserved by powers
}

BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

BigInt factorial(unsigned long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace lipvol
