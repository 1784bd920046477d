#include <cctype>
#include <string>

#include "gridsec/error.hpp"
#include "gridsec/rational.hpp"

namespace gridsec {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw InvalidArgument("malformed number '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  if (s.empty()) malformed(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    std::string_view num_digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!all_digits(num_digits) || !all_digits(den)) malformed(text);
    mpz_class n(std::string(num_digits), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) malformed(text);
    if (num[0] == '-') n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
  }

  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp.empty() && (exp[0] == '-' || exp[0] == '+')) {
      exp_negative = exp[0] == '-';
      exp.remove_prefix(1);
    }
    if (!all_digits(exp) || exp.size() > 6) malformed(text);
    exponent = std::stol(std::string(exp));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      malformed(text);
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) malformed(text);
    digits = std::string(s);
  }

  mpz_class n(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(n, scale) : Rational(n * scale, 1);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& value) { return value.get_str(); }

}  // namespace gridsec
