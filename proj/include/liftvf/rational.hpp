#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liftvf {

using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const Integer& z) { return z.get_str(); }

// Accepts "n", "-n" and "n/d" with decimal digits.
inline Rational parse_rational(std::string_view text) {
  auto valid = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid(s, true)) throw std::invalid_argument("malformed rational: " + std::string(text));
    return Rational(Integer(s));
  }
  std::string num = s.substr(0, slash);
  std::string den = s.substr(slash + 1);
  if (!valid(num, true) || !valid(den, false))
    throw std::invalid_argument("malformed rational: " + std::string(text));
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

inline Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline std::size_t binomial_size(unsigned n, unsigned k) { return binomial(n, k).get_ui(); }

}  // namespace liftvf
