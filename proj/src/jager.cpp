#include "jagerlab/jager.hpp"

#include <iterator>
#include <optional>
#include <stdexcept>

namespace jagerlab {
namespace {

template <Scalar T>
OrbitAnalysis summarize(const OrbitTrace<T>& tr, std::size_t trusted_pairs) {
  OrbitAnalysis out;
  out.k = to_double(tr.expansion.k.value());
  out.x0 = to_double(tr.expansion.x0);
  out.digits = tr.expansion.digits;
  out.terminated = tr.terminated();
  for (std::size_t i = 0; i < tr.theta.size(); ++i) {
    out.p.push_back(to_double(tr.p[i]));
    out.q.push_back(to_double(tr.q[i]));
    out.theta.push_back(to_double(tr.theta[i]));
  }
  const std::size_t pairs = std::min(trusted_pairs, tr.length());
  out.pairs.reserve(pairs);
  for (std::size_t n = 1; n <= pairs; ++n) {
    const auto dp = dynamic_pair(tr, n);
    out.pairs.push_back(PairRecord{n, tr.expansion.digits[n - 1], to_double(dp.x), to_double(dp.y),
                                   to_double(tr.theta[n - 1]), to_double(tr.theta[n]),
                                   to_double(correspondence_residual(tr, n)), dp.terminal});
  }
  out.mode_used = ScalarTraits<T>::mode;
  out.working_bits = ScalarTraits<T>::mantissa_bits;
  return out;
}

template <Scalar T>
OrbitTrace<T> trace_input(const RealInput& k, const RealInput& x0, std::size_t n_max,
                          const TolerancePolicy& tol) {
  return trace_orbit(KParameter<T>(k.as<T>()), x0.as<T>(), n_max, tol);
}

template <Scalar T>
double cancellation_limit() {
  return static_cast<double>(ScalarTraits<T>::mantissa_bits) - kGuardBits;
}

template <Scalar T>
bool trusted(const OrbitTrace<T>& tr) {
  return tr.max_cancellation_bits() <= cancellation_limit<T>();
}

/// Largest n such that theta_0..theta_n all keep kGuardBits significant bits.
template <Scalar T>
std::size_t trusted_prefix(const OrbitTrace<T>& tr) {
  const double limit = cancellation_limit<T>();
  std::size_t n = 0;
  while (n + 1 < tr.cancellation_bits.size() && tr.cancellation_bits[n + 1] <= limit) ++n;
  return n;
}

template <unsigned Bits>
OrbitAnalysis run_rung(const RealInput& k, const RealInput& x0, std::size_t n_max,
                       const PrecisionConfig& config, bool last) {
  const auto tr = trace_input<Extended<Bits>>(k, x0, n_max, config.tol);
  if (!last && config.escalate && !trusted(tr)) return {};
  if (trusted(tr) || !config.escalate) return summarize(tr, tr.length());
  auto out = summarize(tr, trusted_prefix(tr));
  out.precision_limited = true;
  return out;
}

OrbitAnalysis run_extended(const RealInput& k, const RealInput& x0, std::size_t n_max,
                           const PrecisionConfig& config) {
  if (config.bits > kExtendedRungs[std::size(kExtendedRungs) - 1]) {
    throw std::invalid_argument("extended precision is capped at 2048 bits");
  }
  // An empty result (no theta) means "escalate".
  auto attempt = [&](unsigned rung, auto runner, bool last) -> std::optional<OrbitAnalysis> {
    if (config.bits > rung) return std::nullopt;
    auto out = runner(k, x0, n_max, config, last || !config.escalate);
    if (out.theta.empty()) return std::nullopt;
    return out;
  };
  if (auto r = attempt(128, run_rung<128>, false)) return *r;
  if (auto r = attempt(256, run_rung<256>, false)) return *r;
  if (auto r = attempt(512, run_rung<512>, false)) return *r;
  if (auto r = attempt(1024, run_rung<1024>, false)) return *r;
  return *attempt(2048, run_rung<2048>, true);
}

}  // namespace

OrbitAnalysis analyze_orbit(const RealInput& k, const RealInput& x0, std::size_t n_max,
                            const PrecisionConfig& config) {
  config.tol.validate();
  switch (config.mode) {
    case Precision::exact: {
      const auto tr = trace_input<Rational>(k, x0, n_max, config.tol);
      return summarize(tr, tr.length());
    }
    case Precision::hardware: {
      const auto tr = trace_input<double>(k, x0, n_max, config.tol);
      if (!config.escalate || trusted(tr)) return summarize(tr, tr.length());
      PrecisionConfig ext = config;
      ext.bits = 128;
      return run_extended(k, x0, n_max, ext);
    }
    case Precision::extended:
      return run_extended(k, x0, n_max, config);
  }
  throw std::logic_error("unknown precision mode");
}

}  // namespace jagerlab
