#pragma once

// Exact reference computations for k-continued fractions, written without the
// library's matrix recurrences: values come from evaluating the finite tower
// innermost-first, denominators from q_n = prod_{j<=n} (-y_j).

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::mpq_rational;
using Z = boost::multiprecision::mpz_int;

inline std::uint64_t floor_nonneg(const Q& t) {
  if (t < 0) throw std::domain_error("oracle: negative digit");
  const Z f = boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  return f.convert_to<std::uint64_t>();
}

struct Orbit {
  std::vector<std::uint64_t> digits;  // a_1 .. a_N
  std::vector<Q> future;              // x_1 .. x_N
  bool terminated = false;
};

inline Orbit gauss_orbit(const Q& k, const Q& x0, std::size_t n_max) {
  Orbit o;
  Q x = x0;
  while (o.digits.size() < n_max) {
    const Q t = k / x - k;
    const auto a = floor_nonneg(t);
    x = t - Q(a);
    o.digits.push_back(a);
    o.future.push_back(x);
    if (x == 0) {
      o.terminated = true;
      break;
    }
  }
  return o;
}

/// k/(k + d_0 + k/(k + d_1 + ...)), evaluated from the innermost level out.
inline Q tower(const Q& k, const std::vector<std::uint64_t>& d) {
  Q t = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) t = k / (k + Q(*it) + t);
  return t;
}

inline std::vector<std::uint64_t> head(const std::vector<std::uint64_t>& d, std::size_t n) {
  return {d.begin(), d.begin() + static_cast<long>(n)};
}

/// y_n = -k - a_n - [a_{n-1}, ..., a_1]_k.
inline Q past(const Q& k, const std::vector<std::uint64_t>& d, std::size_t n) {
  std::vector<std::uint64_t> reversed(d.rend() - static_cast<long>(n - 1), d.rend());
  return -k - Q(d[n - 1]) - tower(k, reversed);
}

inline Q denominator_q(const Q& k, const std::vector<std::uint64_t>& d, std::size_t n) {
  Q q = 1;
  for (std::size_t j = 1; j <= n; ++j) q *= -past(k, d, j);
  return q;
}

inline Q k_power(const Q& k, std::size_t e) {
  Q r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= k;
  return r;
}

/// |x0 - p_n/q_n| q_n^2 / k^(n+1), with p_0/q_0 = 0/1.
inline Q theta(const Q& k, const Q& x0, const std::vector<std::uint64_t>& d, std::size_t n) {
  const Q value = n == 0 ? Q(0) : tower(k, head(d, n));
  const Q q = denominator_q(k, d, n);
  return abs(x0 - value) * q * q / k_power(k, n + 1);
}

inline std::pair<Q, Q> psi(const Q& k, const Q& x, const Q& y) {
  return {1 / (x - y), -x * y / (k * (x - y))};
}

}  // namespace oracle
