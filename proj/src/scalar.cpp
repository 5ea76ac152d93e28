#include "jagerlab/scalar.hpp"

#include <cctype>
#include <charconv>

namespace jagerlab {

TolerancePolicy TolerancePolicy::defaults(Precision mode) {
  TolerancePolicy tol;
  if (mode == Precision::extended) tol.eps_compare = 1e-25;
  return tol;
}

void TolerancePolicy::validate() const {
  for (double eps : {eps_compare, eps_snap, eps_boundary}) {
    if (!std::isfinite(eps) || eps < 0.0) {
      throw std::invalid_argument("tolerances must be finite and non-negative");
    }
  }
}

RealInput::RealInput(Rational value, std::string text)
    : value_(std::move(value)), text_(std::move(text)) {}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// gmp reads a leading 0 as an octal prefix.
BigInt decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return BigInt(0);
  return BigInt{std::string(digits.substr(first))};
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer");
  BigInt value = decimal_integer(s);
  return negative ? BigInt(-value) : value;
}

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

RealInput RealInput::parse(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");

  try {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const BigInt num = parse_integer(text.substr(0, slash));
      const BigInt den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      RealInput r(Rational(num, den), original);
      r.rational_syntax_ = true;
      return r;
    }

    std::string_view mantissa = text;
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = text.substr(0, e);
      const auto exp_text = text.substr(e + 1);
      const char* first = exp_text.data();
      const char* last = first + exp_text.size();
      if (!exp_text.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc{} || ptr != last) throw std::invalid_argument("malformed exponent");
      if (exponent > 4000 || exponent < -4000) throw std::invalid_argument("exponent out of range");
    }

    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
      negative = mantissa.front() == '-';
      mantissa.remove_prefix(1);
    }
    std::string digits;
    long fraction_digits = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      const auto whole = mantissa.substr(0, dot);
      const auto frac = mantissa.substr(dot + 1);
      if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
          (!frac.empty() && !all_digits(frac))) {
        throw std::invalid_argument("malformed decimal");
      }
      digits = std::string(whole) + std::string(frac);
      fraction_digits = static_cast<long>(frac.size());
    } else {
      if (!all_digits(mantissa)) throw std::invalid_argument("malformed number");
      digits = std::string(mantissa);
    }

    BigInt num = decimal_integer(digits);
    if (negative) num = -num;
    const long scale = exponent - fraction_digits;
    Rational value = scale >= 0 ? Rational(num * pow10(static_cast<unsigned>(scale)))
                                : Rational(num, pow10(static_cast<unsigned>(-scale)));
    RealInput r(value, original);
    r.rational_syntax_ = fraction_digits == 0 && exponent == 0;
    return r;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number: " + original);
  }
}

RealInput RealInput::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite input");
  // gmp_rational assignment from double is exact.
  return RealInput(Rational(value));
}

}  // namespace jagerlab
