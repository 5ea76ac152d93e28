#pragma once

// Approximation coefficients, dynamic pairs, and the residual of the
// correspondence  Psi_k(x_n, y_n) = (theta_{n-1}, theta_n).
//
// theta_n = |x0 - p_n/q_n| q_n^2 / k^(n+1) with the raw convergent recurrence
// (determinant (-k)^n); the k^(n+1) factor normalizes the denominators so the
// correspondence is an identity for every k > 0, and theta_n lies in [0, 1/k).
// theta is always computed from x0 and the convergents, never through Psi.

#include "jagerlab/cf_core.hpp"
#include "jagerlab/geometry.hpp"
#include "jagerlab/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace jagerlab {

template <Scalar T>
struct ApproximationCoefficient {
  std::size_t n;
  T theta;
};

template <Scalar T>
struct DynamicPair {
  std::size_t n;
  T x;
  T y;
  bool terminal = false;  // x == 0: the orbit hit an exact convergent at n
};

/// (theta_{n-1}, theta_n), paired with the dynamic pair at the same n.
template <Scalar T>
struct JagerPoint {
  std::size_t n;
  T u;
  T v;
  bool terminal = false;
};

/// Everything one orbit produces up to n_max (or its terminal index N).
template <Scalar T>
struct OrbitTrace {
  Expansion<T> expansion;          // a_1 .. a_N
  std::vector<T> future;           // x_1 .. x_N, stored at [n-1]
  std::vector<T> past;             // y_1 .. y_N, stored at [n-1]
  std::vector<T> p, q;             // p_0 .. p_N, q_0 .. q_N
  std::vector<T> theta;            // theta_0 .. theta_N
  std::vector<double> cancellation_bits;  // log2 |x0 q_n| / |x0 q_n - p_n|, per theta index

  std::size_t length() const { return expansion.digits.size(); }
  bool terminated() const { return expansion.terminated; }
  double max_cancellation_bits() const {
    double m = 0.0;
    for (double b : cancellation_bits) m = std::max(m, b);
    return m;
  }
};

template <Scalar T>
OrbitTrace<T> trace_orbit(const KParameter<T>& k, const T& x0, std::size_t n_max,
                          const TolerancePolicy& tol) {
  if (n_max < 1) throw DomainError("trace_orbit: n_max must be at least 1");
  OrbitTrace<T> tr{Expansion<T>{k, x0, {}, false}, {}, {}, {}, {}, {}, {}};
  auto orbit = orbit_begin(x0);
  auto conv = ConvergentState<T>::initial();
  T k_power = k.value();  // k^(n+1)

  auto record_theta = [&](bool terminal) {
    tr.p.push_back(conv.p());
    tr.q.push_back(conv.q());
    if (terminal) {
      tr.theta.push_back(T(0));
      tr.cancellation_bits.push_back(0.0);
      return;
    }
    const T scaled = x0 * conv.q();
    const T gap = abs_value(T(scaled - conv.p()));
    tr.theta.push_back(T(gap * conv.q() / k_power));
    const double bits = gap == T(0) ? std::numeric_limits<double>::infinity()
                                    : log2_abs(scaled) - log2_abs(gap);
    tr.cancellation_bits.push_back(std::max(0.0, bits));
  };

  record_theta(false);
  while (tr.length() < n_max) {
    orbit = orbit_advance(orbit, k, tol);
    conv = convergent_step(conv, orbit.last_digit, k);
    k_power *= k.value();
    tr.expansion.digits.push_back(orbit.last_digit);
    tr.future.push_back(orbit.x);
    tr.past.push_back(orbit.y);
    const bool terminal = orbit.ended();
    record_theta(terminal);
    if (terminal) {
      tr.expansion.terminated = true;
      break;
    }
  }
  return tr;
}

namespace detail {

template <Scalar T>
void require_alive(const OrbitTrace<T>& tr, std::size_t n) {
  if (n > tr.length()) throw OrbitEnded(tr.length(), n);
}

}  // namespace detail

template <Scalar T>
ApproximationCoefficient<T> theta(const KParameter<T>& k, const T& x0, std::size_t n,
                                  const TolerancePolicy& tol) {
  if (n == 0) {
    if (!(x0 > T(0)) || !(x0 < T(1))) throw DomainError("theta: x0 must lie in (0,1)");
    return {0, T(x0 / k.value())};
  }
  const auto tr = trace_orbit(k, x0, n, tol);
  detail::require_alive(tr, n);
  return {n, tr.theta[n]};
}

template <Scalar T>
std::vector<ApproximationCoefficient<T>> theta_sequence(const KParameter<T>& k, const T& x0,
                                                        std::size_t n_max,
                                                        const TolerancePolicy& tol) {
  const auto tr = trace_orbit(k, x0, n_max, tol);
  std::vector<ApproximationCoefficient<T>> out;
  out.reserve(tr.theta.size());
  for (std::size_t n = 0; n < tr.theta.size(); ++n) out.push_back({n, tr.theta[n]});
  return out;
}

template <Scalar T>
DynamicPair<T> dynamic_pair(const OrbitTrace<T>& tr, std::size_t n) {
  if (n < 1) throw DomainError("dynamic_pair: n must be at least 1");
  detail::require_alive(tr, n);
  const bool terminal = tr.terminated() && n == tr.length();
  return {n, tr.future[n - 1], tr.past[n - 1], terminal};
}

template <Scalar T>
DynamicPair<T> dynamic_pair(const KParameter<T>& k, const T& x0, std::size_t n,
                            const TolerancePolicy& tol) {
  if (n < 1) throw DomainError("dynamic_pair: n must be at least 1");
  return dynamic_pair(trace_orbit(k, x0, n, tol), n);
}

template <Scalar T>
JagerPoint<T> jager_point(const OrbitTrace<T>& tr, std::size_t n) {
  if (n < 1) throw DomainError("jager_point: n must be at least 1");
  detail::require_alive(tr, n);
  const bool terminal = tr.terminated() && n == tr.length();
  return {n, tr.theta[n - 1], tr.theta[n], terminal};
}

/// max(|u - theta_{n-1}|, |v - theta_n|) with (u, v) = Psi_k(x_n, y_n).
template <Scalar T>
T correspondence_residual(const OrbitTrace<T>& tr, std::size_t n) {
  const auto pair = dynamic_pair(tr, n);
  const auto image = psi(tr.expansion.k, make_point<T>(pair.x, pair.y));
  const T du = abs_value(T(image.x() - tr.theta[n - 1]));
  const T dv = abs_value(T(image.y() - tr.theta[n]));
  return du > dv ? du : dv;
}

template <Scalar T>
T correspondence_residual(const KParameter<T>& k, const T& x0, std::size_t n,
                          const TolerancePolicy& tol) {
  if (n < 1) throw DomainError("correspondence_residual: n must be at least 1");
  return correspondence_residual(trace_orbit(k, x0, n, tol), n);
}

// ---------------------------------------------------------------------------
// Precision-managed orbit analysis. Inputs stay exact; the orbit is traced at
// the requested precision and re-traced on the next rung of the extended
// ladder whenever the cancellation in x0 - p_n/q_n leaves fewer than
// kGuardBits significant bits (relative error about 1e-12).

struct PrecisionConfig {
  Precision mode = Precision::hardware;
  unsigned bits = 128;  // starting rung for extended mode
  TolerancePolicy tol = TolerancePolicy::defaults(Precision::hardware);
  bool escalate = true;
};

inline constexpr double kGuardBits = 40.0;

/// Rungs of the extended ladder, in bits.
inline constexpr unsigned kExtendedRungs[] = {128, 256, 512, 1024, 2048};

struct PairRecord {
  std::size_t n;
  Digit digit;  // a_n
  double x, y;  // dynamic pair
  double u, v;  // (theta_{n-1}, theta_n)
  double residual;
  bool terminal;
};

struct OrbitAnalysis {
  double k = 0.0;
  double x0 = 0.0;
  std::vector<Digit> digits;
  bool terminated = false;
  std::vector<double> p, q, theta;  // indices 0 .. N
  std::vector<PairRecord> pairs;    // n = 1 .. N
  Precision mode_used = Precision::hardware;
  unsigned working_bits = 53;     // 0 for exact rationals
  bool precision_limited = false; // top rung reached; pairs truncated to the trusted prefix
};

OrbitAnalysis analyze_orbit(const RealInput& k, const RealInput& x0, std::size_t n_max,
                            const PrecisionConfig& config);

}  // namespace jagerlab
