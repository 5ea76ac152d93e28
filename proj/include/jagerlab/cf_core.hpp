#pragma once

// k-continued fractions  x = k / (k + a_1 + k / (k + a_2 + ...)),  a_n >= 0.
//
// The shift behind the expansion is x -> k/x - k - a with a = floor(k/x - k);
// convergents come from products of the Mobius matrices [[0, k], [1, k + a]].

#include "jagerlab/scalar.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jagerlab {

using Digit = std::uint64_t;

/// The orbit reached an exact convergent before the requested index.
class OrbitEnded : public std::runtime_error {
 public:
  OrbitEnded(std::size_t terminal_index, std::size_t requested)
      : std::runtime_error("orbit ended at n=" + std::to_string(terminal_index) +
                           " before n=" + std::to_string(requested)),
        terminal_index_(terminal_index) {}
  std::size_t terminal_index() const { return terminal_index_; }

 private:
  std::size_t terminal_index_;
};

template <Scalar T>
class KParameter {
 public:
  explicit KParameter(T k) : k_(std::move(k)) {
    if (!(k_ > T(0))) throw DomainError("k must be positive");
  }
  const T& value() const { return k_; }
  bool below_one() const { return k_ < T(1); }

 private:
  T k_;
};

template <Scalar T>
struct GaussStep {
  Digit digit;
  T remainder;  // zero marks termination
};

template <Scalar T>
GaussStep<T> gauss_step(const KParameter<T>& k, const T& x, const TolerancePolicy& tol) {
  if (!(x > T(0)) || x > T(1)) throw DomainError("gauss_step: x must lie in (0,1]");
  const T t = k.value() / x - k.value();
  const std::int64_t a = snap_floor(t, tol);
  T rest = t - T(a);
  if constexpr (!is_exact_v<T>) {
    if (rest < T(tol.eps_snap)) rest = T(0);
  }
  return {static_cast<Digit>(a), std::move(rest)};
}

template <Scalar T>
struct Expansion {
  KParameter<T> k;
  T x0;
  std::vector<Digit> digits;
  bool terminated = false;
};

template <Scalar T>
Expansion<T> expand(const KParameter<T>& k, const T& x0, std::size_t n_max,
                    const TolerancePolicy& tol) {
  if (!(x0 > T(0)) || !(x0 < T(1))) throw DomainError("expand: x0 must lie in (0,1)");
  if (n_max < 1) throw DomainError("expand: n_max must be at least 1");
  Expansion<T> out{k, x0, {}, false};
  out.digits.reserve(n_max);
  T x = x0;
  while (out.digits.size() < n_max) {
    auto step = gauss_step(k, x, tol);
    out.digits.push_back(step.digit);
    if (step.remainder == T(0)) {
      out.terminated = true;
      break;
    }
    x = std::move(step.remainder);
  }
  return out;
}

/// [a_1, ..., a_n]_k evaluated innermost-first.
template <Scalar T>
T eval_finite(const KParameter<T>& k, const std::vector<Digit>& digits) {
  if (digits.empty()) throw DomainError("eval_finite: empty digit list");
  T tail(0);
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    tail = k.value() / (k.value() + T(*it) + tail);
  }
  return tail;
}

template <Scalar T>
Eigen::Matrix<T, 2, 2> digit_matrix(const KParameter<T>& k, Digit a) {
  Eigen::Matrix<T, 2, 2> m;
  m << T(0), k.value(), T(1), k.value() + T(a);
  return m;
}

/// Convergent numerators and denominators at index n, stored column-wise as
/// [[p_{n-1}, p_n], [q_{n-1}, q_n]] so that a step is one matrix product and
/// the determinant is p_{n-1} q_n - p_n q_{n-1} = (-k)^n.
template <Scalar T>
class ConvergentState {
 public:
  using Matrix = Eigen::Matrix<T, 2, 2>;

  static ConvergentState initial() { return ConvergentState(0, Matrix::Identity()); }

  ConvergentState(std::size_t n, Matrix m) : n_(n), m_(std::move(m)) {}

  std::size_t index() const { return n_; }
  const T& p_prev() const { return m_(0, 0); }
  const T& p() const { return m_(0, 1); }
  const T& q_prev() const { return m_(1, 0); }
  const T& q() const { return m_(1, 1); }
  const Matrix& matrix() const { return m_; }

  T value() const { return p() / q(); }
  T determinant() const { return m_.determinant(); }

 private:
  std::size_t n_;
  Matrix m_;
};

template <Scalar T>
ConvergentState<T> convergent_step(const ConvergentState<T>& state, Digit a,
                                   const KParameter<T>& k) {
  typename ConvergentState<T>::Matrix next = state.matrix() * digit_matrix(k, a);
  return ConvergentState<T>(state.index() + 1, std::move(next));
}

/// x_n = [a_{n+1}, a_{n+2}, ...]_k.
template <Scalar T>
T future(const KParameter<T>& k, const T& x0, std::size_t n, const TolerancePolicy& tol) {
  if (!(x0 > T(0)) || !(x0 < T(1))) throw DomainError("future: x0 must lie in (0,1)");
  T x = x0;
  for (std::size_t i = 1; i <= n; ++i) {
    x = gauss_step(k, x, tol).remainder;
    if (x == T(0)) throw OrbitEnded(i, n);
  }
  return x;
}

/// y_n = -k - a_n - [a_{n-1}, ..., a_1]_k, with y_1 = -k - a_1.
template <Scalar T>
T past_direct(const KParameter<T>& k, const std::vector<Digit>& digits, std::size_t n) {
  if (n < 1 || digits.size() < n) throw DomainError("past_direct: need 1 <= n <= digits");
  T y = -k.value() - T(digits[n - 1]);
  if (n > 1) {
    const std::vector<Digit> reversed(digits.rend() - static_cast<std::ptrdiff_t>(n - 1),
                                      digits.rend());
    y -= eval_finite(k, reversed);
  }
  return y;
}

/// y_{n+1} = -k - a_{n+1} + k / y_n, from [a_n, ..., a_1]_k = k / (-y_n).
template <Scalar T>
T past_step(const KParameter<T>& k, const T& y, Digit a_next) {
  if (y > -k.value()) throw DomainError("past_step: y must not exceed -k");
  return -k.value() - T(a_next) + k.value() / y;
}

/// Future/past state of one orbit. n = 0 is the start (y undefined).
template <Scalar T>
struct OrbitState {
  std::size_t n = 0;
  T x;
  T y{0};
  Digit last_digit = 0;

  bool ended() const { return n > 0 && x == T(0); }
};

template <Scalar T>
OrbitState<T> orbit_begin(const T& x0) {
  if (!(x0 > T(0)) || !(x0 < T(1))) throw DomainError("orbit: x0 must lie in (0,1)");
  return OrbitState<T>{0, x0, T(0), 0};
}

template <Scalar T>
OrbitState<T> orbit_advance(const OrbitState<T>& s, const KParameter<T>& k,
                            const TolerancePolicy& tol) {
  if (s.ended()) throw OrbitEnded(s.n, s.n + 1);
  auto step = gauss_step(k, s.x, tol);
  T y = s.n == 0 ? T(-k.value() - T(step.digit)) : past_step(k, s.y, step.digit);
  return OrbitState<T>{s.n + 1, std::move(step.remainder), std::move(y), step.digit};
}

}  // namespace jagerlab
