#pragma once

// Number types shared by every module. Core algorithms are templated on one of
// three scalar families: hardware double, fixed-width binary floats from
// Boost.Multiprecision (the "extended" ladder), and exact GMP rationals.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace jagerlab {

namespace bmp = boost::multiprecision;

enum class Precision { hardware, extended, exact };

template <unsigned Bits>
using Extended = bmp::number<bmp::cpp_bin_float<Bits, bmp::digit_base_2>, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
using BigInt = bmp::number<bmp::gmp_int, bmp::et_off>;

/// Raised when an operation is asked to leave its mathematical domain
/// (x outside (0,1], negative digit state, singular map input, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr unsigned mantissa_bits = std::numeric_limits<double>::digits;
  static constexpr Precision mode = Precision::hardware;
};

template <unsigned Bits>
struct ScalarTraits<Extended<Bits>> {
  static constexpr bool exact = false;
  static constexpr unsigned mantissa_bits = Bits;
  static constexpr Precision mode = Precision::extended;
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr unsigned mantissa_bits = 0;
  static constexpr Precision mode = Precision::exact;
};

template <typename T>
concept Scalar = requires {
  { ScalarTraits<T>::exact } -> std::convertible_to<bool>;
};

template <typename T>
concept FloatingScalar = Scalar<T> && !ScalarTraits<T>::exact;

template <typename T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

struct TolerancePolicy {
  double eps_compare = 1e-9;
  // Relative: a value within eps_snap * max(1, |t|) below an integer snaps up.
  double eps_snap = 1e-12;
  double eps_boundary = 1e-9;

  static TolerancePolicy defaults(Precision mode);
  /// Throws std::invalid_argument for negative or non-finite knobs.
  void validate() const;
};

template <Scalar T>
double to_double(const T& value) {
  if constexpr (std::is_same_v<T, double>) {
    return value;
  } else {
    return value.template convert_to<double>();
  }
}

template <Scalar T>
T from_int(std::int64_t value) {
  return T(value);
}

template <Scalar T>
T abs_value(const T& value) {
  return value < T(0) ? T(-value) : value;
}

/// log2 |value| without overflowing a double; -inf for zero.
template <Scalar T>
double log2_abs(const T& value) {
  if (value == T(0)) return -std::numeric_limits<double>::infinity();
  if constexpr (std::is_same_v<T, double>) {
    return std::log2(std::fabs(value));
  } else if constexpr (is_exact_v<T>) {
    const BigInt num = bmp::abs(bmp::numerator(value));
    const BigInt den = bmp::denominator(value);
    auto lg = [](const BigInt& v) {
      const auto top = bmp::msb(v);
      if (top < 60) return std::log2(v.template convert_to<double>());
      const BigInt head = v >> (top - 52);
      return std::log2(head.template convert_to<double>()) + double(top - 52);
    };
    return lg(num) - lg(den);
  } else {
    int exponent = 0;
    const T mantissa = bmp::frexp(abs_value(value), &exponent);
    return double(exponent) + std::log2(to_double(mantissa));
  }
}

/// Floor used for digit extraction. Values within eps_snap * max(1,|t|) below
/// an integer m return m; exact rationals always return the true floor.
template <Scalar T>
std::int64_t snap_floor(const T& t, const TolerancePolicy& tol) {
  constexpr std::int64_t kMaxDigit = std::int64_t{1} << 62;
  if constexpr (is_exact_v<T>) {
    if (t < T(0)) throw DomainError("snap_floor: negative argument");
    const BigInt whole = bmp::numerator(t) / bmp::denominator(t);
    if (whole > BigInt(kMaxDigit)) throw DomainError("snap_floor: digit overflow");
    return whole.template convert_to<std::int64_t>();
  } else {
    using std::floor;
    const T magnitude = abs_value(t) > T(1) ? abs_value(t) : T(1);
    const T slack = T(tol.eps_snap) * magnitude;
    if (t < -slack) throw DomainError("snap_floor: negative argument beyond snap tolerance");
    T whole = floor(t);
    if (whole + T(1) - t <= slack) whole += T(1);
    if (whole < T(0)) whole = T(0);
    if (whole > T(static_cast<double>(kMaxDigit))) throw DomainError("snap_floor: digit overflow");
    return static_cast<std::int64_t>(to_double(whole));
  }
}

/// A real input kept as an exact rational so it can be materialized at any
/// working precision: "p/q", integers, decimals ("0.3", "1e-3") or doubles.
class RealInput {
 public:
  RealInput() = default;
  explicit RealInput(Rational value, std::string text = {});

  static RealInput parse(std::string_view text);
  /// Exact binary value of `value`.
  static RealInput from_double(double value);

  const Rational& exact() const { return value_; }
  const std::string& text() const { return text_; }
  /// True for "p/q" and plain integer syntax.
  bool rational_syntax() const { return rational_syntax_; }

  template <Scalar T>
  T as() const {
    if constexpr (is_exact_v<T>) {
      return value_;
    } else if constexpr (std::is_same_v<T, double>) {
      return bmp::numerator(value_).convert_to<double>() /
             bmp::denominator(value_).convert_to<double>();
    } else {
      return T(bmp::numerator(value_).str()) / T(bmp::denominator(value_).str());
    }
  }
  double to_double() const { return as<double>(); }

 private:
  Rational value_{0};
  std::string text_;
  bool rational_syntax_ = false;
};

}  // namespace jagerlab
