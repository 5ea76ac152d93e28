#include "jagerlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace jagerlab {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Runs fn(i) for i in [0, count); results must be written by index.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<OrbitAnalysis> analyze_samples(const ExperimentConfig& cfg, const RealInput& k) {
  const double kd = k.to_double();
  std::vector<OrbitAnalysis> orbits(cfg.samples);
  parallel_for(cfg.samples, resolve_threads(cfg.threads), [&](std::size_t i) {
    const double x0 = sample_x0(cfg, kd, i);
    orbits[i] = analyze_orbit(k, RealInput::from_double(x0), cfg.n_max, cfg.precision);
  });
  return orbits;
}

Point2<double> pt(double u, double v) { return make_point<double>(u, v); }

}  // namespace

void ExperimentConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (n_min < 1 || n_min > n_max) throw std::invalid_argument("need 1 <= n_min <= n_max");
  for (const auto& k : k_list) {
    if (!(k.exact() > 0)) throw std::invalid_argument("k must be positive");
  }
  precision.tol.validate();
}

std::vector<RealInput> default_k_grid() {
  std::vector<RealInput> ks;
  for (const char* text : {"0.3", "0.5", "0.9", "1", "1.5", "2.7"}) ks.push_back(RealInput::parse(text));
  return ks;
}

double unit_sample(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  const std::uint64_t h = mix64(mix64(seed) ^ mix64(index ^ (stream * 0xD1B54A32D192ED03ULL)));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("JAGER_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double sample_x0(const ExperimentConfig& cfg, double k, std::uint64_t index) {
  const double t = unit_sample(cfg.seed, index);
  if (!cfg.stratified) return t;
  const double a = static_cast<double>(index % (cfg.stratify_max_digit + 1));
  const double lo = k / (k + a + 1.0);
  const double hi = k / (k + a);
  double x0 = lo + (hi - lo) * t;
  if (!(x0 < 1.0)) x0 = std::nextafter(1.0, 0.0);
  return x0;
}

PairBatch sample_jager_pairs(const ExperimentConfig& cfg, const RealInput& k) {
  cfg.validate();
  const auto orbits = analyze_samples(cfg, k);
  PairBatch batch;
  const double kd = k.to_double();
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& orbit = orbits[i];
    ++batch.stats.orbits;
    if (orbit.terminated) ++batch.stats.terminated;
    if (orbit.precision_limited) ++batch.stats.precision_limited;
    batch.stats.max_working_bits = std::max(batch.stats.max_working_bits, orbit.working_bits);
    for (const auto& pair : orbit.pairs) {
      if (pair.n < cfg.n_min || pair.n > cfg.n_max) continue;
      batch.pairs.push_back(PairSample{kd, i, orbit.x0, pair, orbit.terminated});
    }
  }
  batch.stats.pairs = batch.pairs.size();
  return batch;
}

PairBatch sample_jager_pairs(const ExperimentConfig& cfg) {
  PairBatch all;
  for (const auto& k : cfg.k_list) {
    auto batch = sample_jager_pairs(cfg, k);
    all.pairs.insert(all.pairs.end(), batch.pairs.begin(), batch.pairs.end());
    all.stats.orbits += batch.stats.orbits;
    all.stats.terminated += batch.stats.terminated;
    all.stats.precision_limited += batch.stats.precision_limited;
    all.stats.max_working_bits = std::max(all.stats.max_working_bits, batch.stats.max_working_bits);
  }
  all.stats.pairs = all.pairs.size();
  return all;
}

Witness make_witness(double k, double x, double x_prime) {
  if (!(k > 0.0)) throw DomainError("witness: k must be positive");
  if (!(k <= x_prime && x_prime < x && x < 1.0)) {
    throw DomainError("witness: need k <= x' < x < 1");
  }
  const KParameter<double> kk(k);
  const Point2<double> p1 = pt(x, -x_prime);
  const Point2<double> p2 = reflect(p1);
  const Point2<double> image = psi(kk, p1);
  return Witness{k, p1, p2, image, (p1 - p2).norm(), (psi(kk, p2) - image).norm()};
}

Witness injectivity_witness(double k, std::uint64_t seed) {
  if (!(k > 0.0)) throw DomainError("witness: k must be positive");
  if (k >= 1.0) {
    throw DomainError("witness: for k >= 1 every dynamic pair has x + y < 0, where Psi_k is injective");
  }
  // |p1 - p2| = sqrt(2) (x - x'); keep the gap a little above 0.1 / sqrt(2).
  constexpr double kGap = 0.075;
  if (1.0 - k <= kGap) {
    throw DomainError("witness: k too close to 1 for a separation above 0.1");
  }
  const double x_prime = k + (1.0 - kGap - k) * unit_sample(seed, 0, 7);
  const double x = x_prime + kGap + (1.0 - x_prime - kGap) * unit_sample(seed, 1, 7);
  return make_witness(k, std::min(x, std::nextafter(1.0, 0.0)), x_prime);
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed(); });
}

void VerificationReport::merge(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

CheckRecord correspondence_check(const ExperimentConfig& cfg, const RealInput& k, double threshold) {
  return correspondence_check(cfg, k, sample_jager_pairs(cfg, k), threshold);
}

CheckRecord correspondence_check(const ExperimentConfig& cfg, const RealInput& k,
                                 const PairBatch& batch, double threshold) {
  cfg.validate();
  CheckRecord rec;
  rec.name = "correspondence";
  rec.k = k.to_double();
  for (const auto& s : batch.pairs) {
    if (s.orbit_terminated) continue;
    ++rec.samples;
    rec.worst_residual = std::max(rec.worst_residual, s.pair.residual);
    if (!(s.pair.residual < threshold)) ++rec.failures;
  }
  if (k.exact() == 1) {
    // Golden orbit x0 = (sqrt 5 - 1)/2, irrational, so traced directly.
    using T = Extended<256>;
    const T x0 = (boost::multiprecision::sqrt(T(5)) - 1) / 2;
    const auto tr = trace_orbit(KParameter<T>(T(1)), x0, cfg.n_max, cfg.precision.tol);
    double golden = 0.0;
    for (std::size_t n = 1; n <= tr.length(); ++n) {
      golden = std::max(golden, to_double(correspondence_residual(tr, n)));
    }
    rec.metrics["golden_orbit_residual"] = golden;
    if (!(golden < 1e-9)) ++rec.failures;
  }
  rec.metrics["orbits"] = static_cast<double>(batch.stats.orbits);
  rec.metrics["terminated_orbits_skipped"] = static_cast<double>(batch.stats.terminated);
  rec.metrics["precision_limited_orbits"] = static_cast<double>(batch.stats.precision_limited);
  rec.metrics["max_working_bits"] = static_cast<double>(batch.stats.max_working_bits);
  rec.metrics["threshold"] = threshold;
  return rec;
}

CheckRecord hyperbola_check(const PairBatch& batch, double k, double slack) {
  CheckRecord rec;
  rec.name = "hyperbola_bound";
  rec.k = k;
  rec.worst_residual = -std::numeric_limits<double>::infinity();
  for (const auto& s : batch.pairs) {
    const double excess = 4.0 * s.k * s.pair.u * s.pair.v - 1.0;
    ++rec.samples;
    rec.worst_residual = std::max(rec.worst_residual, excess);
    if (excess > slack) ++rec.failures;
  }
  if (rec.samples == 0) rec.worst_residual = 0.0;
  rec.metrics["slack"] = slack;
  rec.note = "worst_residual is max(4 k u v - 1)";
  return rec;
}

std::vector<CheckRecord> containment_check(const PairBatch& batch, double k,
                                           const TolerancePolicy& tol) {
  const KParameter<double> kk(k);
  CheckRecord rec;
  rec.name = "containment_constructive";
  rec.k = k;
  CheckRecord recon;
  recon.name = "corollary_reconciliation";
  recon.k = k;
  recon.informational = true;
  CheckRecord probe;
  probe.name = "support_probe";
  probe.k = k;
  probe.informational = true;

  std::size_t agree = 0, literal_outside = 0, literal_boundary = 0;
  double max_v_small_u = 0.0, max_u = 0.0;
  std::size_t small_u = 0;
  for (const auto& s : batch.pairs) {
    const Point2<double> q = pt(s.pair.u, s.pair.v);
    const Membership c = gamma_contains(kk, q, GammaMode::constructive_union, tol);
    ++rec.samples;
    if (c == Membership::outside) {
      ++rec.failures;
      continue;
    }
    if (c == Membership::boundary) {
      ++rec.boundary_skips;
      continue;
    }
    const Membership lit = gamma_contains(kk, q, GammaMode::corollary_literal, tol);
    ++recon.samples;
    if (lit == Membership::inside) ++agree;
    if (lit == Membership::outside) ++literal_outside;
    if (lit == Membership::boundary) ++literal_boundary;
    max_u = std::max(max_u, s.pair.u);
    if (s.pair.u < 0.05) {
      ++small_u;
      max_v_small_u = std::max(max_v_small_u, s.pair.v);
    }
  }
  recon.metrics["agree_inside"] = static_cast<double>(agree);
  recon.metrics["literal_outside"] = static_cast<double>(literal_outside);
  recon.metrics["literal_boundary"] = static_cast<double>(literal_boundary);
  recon.note = "constructive-inside pairs classified against the corollary-literal region";

  probe.samples = small_u;
  probe.metrics["max_v_for_u_below_0.05"] = max_v_small_u;
  probe.metrics["literal_top_1_over_k_plus_1"] = 1.0 / (k + 1.0);
  probe.metrics["constructive_sup_1_over_k"] = 1.0 / k;
  probe.metrics["max_u"] = max_u;
  return {rec, recon, probe};
}

namespace {

struct Box {
  double u_lo, u_hi, v_lo, v_hi;
};

template <std::size_t N>
Box bounding_box(const std::array<Point2<double>, N>& pts) {
  Box b{pts[0].x(), pts[0].x(), pts[0].y(), pts[0].y()};
  for (const auto& p : pts) {
    b.u_lo = std::min(b.u_lo, p.x());
    b.u_hi = std::max(b.u_hi, p.x());
    b.v_lo = std::min(b.v_lo, p.y());
    b.v_hi = std::max(b.v_hi, p.y());
  }
  return b;
}

}  // namespace

CheckRecord region_two_sided_check(double k, Digit a, std::size_t samples, std::uint64_t seed,
                                   const TolerancePolicy& tol, Prediction prediction) {
  const KParameter<double> kk(k);
  const Strip<double> strip{kk, a};
  const bool folded = kk.below_one() && a == 0;
  const double eps = tol.eps_boundary;

  CheckRecord rec;
  rec.k = k;
  Box box{};
  std::function<Membership(const Point2<double>&)> predicted;
  if (folded) {
    rec.name = prediction == Prediction::literal ? "p0_literal_two_sided" : "p0_enclosed_two_sided";
    const auto c = p0_corners(kk);
    box = bounding_box(std::array<Point2<double>, 5>{c.right, c.left_base, c.left_top,
                                                     c.fold_upper, c.fold_lower});
    if (prediction == Prediction::literal) {
      predicted = [kk, eps](const Point2<double>& q) { return p0_sharp_contains(kk, q, eps); };
    } else {
      predicted = [kk, eps](const Point2<double>& q) { return p0_enclosed_contains(kk, q, eps); };
    }
  } else {
    const bool literal = prediction == Prediction::literal;
    rec.name = std::string(literal ? "pa_quad_literal_two_sided_a" : "pa_quad_corrected_two_sided_a") +
               std::to_string(a);
    const auto quad = literal ? pa_sharp_quad(kk, a) : pa_image_quad(kk, a);
    box = bounding_box(quad.vertices);
    predicted = [quad, eps](const Point2<double>& q) { return quad_classify(quad, q, eps); };
  }

  std::size_t forward_fail = 0, forward_skip = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point2<double> p = pt(unit_sample(seed, i, 1), strip.upper() - unit_sample(seed, i, 2));
    const Membership m = predicted(psi(kk, p));
    if (m == Membership::outside) ++forward_fail;
    if (m == Membership::boundary) ++forward_skip;
  }

  TolerancePolicy root_tol = tol;
  root_tol.eps_compare = 0.0;
  std::size_t reverse_fail = 0, reverse_skip = 0, accepted = 0, attempts = 0;
  const std::size_t max_attempts = samples * 10000;
  double worst_round_trip = 0.0;
  while (accepted < samples && attempts < max_attempts) {
    const std::size_t j = attempts++;
    const Point2<double> q = pt(box.u_lo + (box.u_hi - box.u_lo) * unit_sample(seed, j, 3),
                                box.v_lo + (box.v_hi - box.v_lo) * unit_sample(seed, j, 4));
    if (predicted(q) != Membership::inside) continue;
    ++accepted;
    const auto roots = psi_preimage(kk, q, root_tol);
    if (roots.empty()) {
      ++reverse_fail;
      continue;
    }
    const auto& root = roots.canonical();
    worst_round_trip = std::max(worst_round_trip, (psi(kk, root) - q).lpNorm<Eigen::Infinity>());
    const Membership m = strip_classify(strip, root, eps);
    if (m == Membership::outside) ++reverse_fail;
    if (m == Membership::boundary) ++reverse_skip;
  }

  rec.samples = samples + accepted;
  rec.failures = forward_fail + reverse_fail + (accepted < samples ? 1 : 0);
  rec.boundary_skips = forward_skip + reverse_skip;
  rec.worst_residual = worst_round_trip;
  rec.metrics["a"] = static_cast<double>(a);
  rec.metrics["forward_samples"] = static_cast<double>(samples);
  rec.metrics["forward_failures"] = static_cast<double>(forward_fail);
  rec.metrics["reverse_samples"] = static_cast<double>(accepted);
  rec.metrics["reverse_failures"] = static_cast<double>(reverse_fail);
  rec.metrics["reverse_attempts"] = static_cast<double>(attempts);
  if (accepted < samples) rec.note = "rejection sampler exhausted its attempt budget";
  return rec;
}

CheckRecord p0_boundary_curve_check(double k, std::size_t samples_per_curve,
                                    const TolerancePolicy& tol, Prediction prediction) {
  const KParameter<double> kk(k);
  CheckRecord rec;
  const bool literal = prediction == Prediction::literal;
  rec.name = literal ? "p0_literal_boundary_curves" : "p0_enclosed_boundary_curves";
  rec.k = k;
  for (const auto& curve : p0_boundary_curves(kk, samples_per_curve)) {
    std::size_t bad = 0;
    for (const auto& q : curve.points) {
      const Membership m = literal ? p0_sharp_contains(kk, q, tol.eps_boundary)
                                   : p0_enclosed_contains(kk, q, tol.eps_boundary);
      ++rec.samples;
      if (m != Membership::boundary) ++bad;
    }
    rec.failures += bad;
    rec.metrics[curve.label + "_failures"] = static_cast<double>(bad);
  }
  return rec;
}

CheckRecord witness_grid_check(const std::vector<double>& grid, const std::vector<double>& refused,
                               std::uint64_t seed) {
  CheckRecord rec;
  rec.name = "injectivity_witness";
  double worst_gap = 0.0, min_separation = std::numeric_limits<double>::infinity();
  for (double k : grid) {
    ++rec.samples;
    try {
      const auto w = injectivity_witness(k, seed);
      const KParameter<double> kk(k);
      const Strip<double> p0{kk, 0};
      const bool ok = strip_contains(p0, w.p1) && strip_contains(p0, w.p2) &&
                      w.p2 == reflect(w.p1) && w.image_gap < 1e-12 && w.separation > 0.1;
      worst_gap = std::max(worst_gap, w.image_gap);
      min_separation = std::min(min_separation, w.separation);
      if (!ok) ++rec.failures;
    } catch (const DomainError&) {
      ++rec.failures;
    }
  }
  std::size_t refusals = 0;
  for (double k : refused) {
    ++rec.samples;
    try {
      (void)injectivity_witness(k, seed);
      ++rec.failures;
    } catch (const DomainError&) {
      ++refusals;
    }
  }
  rec.worst_residual = worst_gap;
  rec.metrics["min_separation"] = min_separation;
  rec.metrics["refusals"] = static_cast<double>(refusals);
  return rec;
}

CheckRecord exact_oracle_check(std::size_t cases, std::size_t n_max, std::uint64_t seed,
                               double tolerance) {
  CheckRecord rec;
  rec.name = "exact_oracle";
  PrecisionConfig hw{Precision::hardware, 128, TolerancePolicy::defaults(Precision::hardware)};
  PrecisionConfig raw = hw;
  raw.escalate = false;
  PrecisionConfig exact{Precision::exact, 0, TolerancePolicy::defaults(Precision::exact)};
  std::size_t det_failures = 0, raw_digit_mismatch = 0, escalated = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const long kden = 1 + static_cast<long>(unit_sample(seed, i, 10) * 10);
    const long knum = 1 + static_cast<long>(unit_sample(seed, i, 11) * (3 * kden - 1));
    const long xden = 2 + static_cast<long>(unit_sample(seed, i, 12) * 11);
    const long xnum = 1 + static_cast<long>(unit_sample(seed, i, 13) * (xden - 1));
    const RealInput k(Rational(knum, kden));
    const RealInput x0(Rational(xnum, xden));

    const auto e = analyze_orbit(k, x0, n_max, exact);
    const auto h = analyze_orbit(k, x0, n_max, hw);
    const auto r = analyze_orbit(k, x0, n_max, raw);
    if (h.mode_used != Precision::hardware) ++escalated;
    if (r.digits != e.digits) ++raw_digit_mismatch;

    bool ok = h.digits == e.digits && h.terminated == e.terminated;
    if (ok) {
      for (std::size_t n = 0; n < e.theta.size(); ++n) {
        const double dv = std::fabs(h.p[n] / h.q[n] - e.p[n] / e.q[n]);
        const double dp = std::fabs(h.p[n] - e.p[n]) / std::max(1.0, std::fabs(e.p[n]));
        const double dq = std::fabs(h.q[n] - e.q[n]) / std::max(1.0, std::fabs(e.q[n]));
        const double dt = std::fabs(h.theta[n] - e.theta[n]);
        rec.worst_residual = std::max({rec.worst_residual, dv, dp, dq, dt});
        ++rec.samples;
        if (!(dv <= tolerance && dp <= tolerance && dq <= tolerance && dt <= tolerance)) ok = false;
      }
    }
    if (!ok) ++rec.failures;

    // p_{n-1} q_n - p_n q_{n-1} = (-k)^n, exactly.
    const KParameter<Rational> kq(k.exact());
    const auto tr = trace_orbit(kq, x0.exact(), n_max, exact.tol);
    Rational power(1);
    for (std::size_t n = 1; n < tr.p.size(); ++n) {
      power *= -kq.value();
      if (tr.p[n - 1] * tr.q[n] - tr.p[n] * tr.q[n - 1] != power) ++det_failures;
    }
  }
  rec.failures += det_failures;
  rec.metrics["cases"] = static_cast<double>(cases);
  rec.metrics["determinant_failures"] = static_cast<double>(det_failures);
  rec.metrics["escalated_cases"] = static_cast<double>(escalated);
  rec.metrics["unescalated_double_digit_mismatches"] = static_cast<double>(raw_digit_mismatch);
  return rec;
}

CheckRecord membership_cross_check(double k, std::size_t samples, std::uint64_t seed,
                                   const TolerancePolicy& tol) {
  const KParameter<double> kk(k);
  CheckRecord rec;
  rec.name = "membership_cross_validation";
  rec.k = k;
  const double span = 1.05 / k;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point2<double> q = pt(span * unit_sample(seed, i, 20), span * unit_sample(seed, i, 21));
    const Membership a = gamma_contains(kk, q, GammaMode::constructive_union, tol);
    const Membership b = gamma_contains(kk, q, GammaMode::piecewise, tol);
    ++rec.samples;
    if (a == Membership::boundary || b == Membership::boundary) {
      ++rec.boundary_skips;
      continue;
    }
    if (a != b) ++rec.failures;
  }
  return rec;
}

std::vector<CheckRecord> identity_checks(std::size_t samples, std::uint64_t seed,
                                         const TolerancePolicy& tol) {
  CheckRecord past;
  past.name = "past_step_vs_direct";
  CheckRecord trip;
  trip.name = "expansion_round_trip";
  CheckRecord fold;
  fold.name = "fold_invariance";
  CheckRecord root;
  root.name = "preimage_round_trip";
  std::size_t increases_below_one = 0;

  for (std::size_t i = 0; i < samples; ++i) {
    const KParameter<double> k(0.1 + 2.9 * unit_sample(seed, i, 30));

    // Random digit strings of length <= 30.
    const auto length = 1 + static_cast<std::size_t>(30 * unit_sample(seed, i, 31));
    std::vector<Digit> digits(length);
    for (std::size_t j = 0; j < length; ++j) {
      digits[j] = static_cast<Digit>(10 * unit_sample(seed, i * 64 + j, 32));
    }
    double y = past_direct(k, digits, 1);
    for (std::size_t n = 1; n <= length; ++n) {
      if (n > 1) y = past_step(k, y, digits[n - 1]);
      const double gap = std::fabs(y - past_direct(k, digits, n));
      ++past.samples;
      past.worst_residual = std::max(past.worst_residual, gap);
      if (gap > tol.eps_compare) ++past.failures;
    }

    // |x0 - [a_1..a_n]_k| shrinks to 0; monotonically only when k >= 1.
    const KParameter<double> kt(0.2 + 2.8 * unit_sample(seed, i, 33));
    const double x0 = unit_sample(seed, i, 34);
    const auto e = expand(kt, x0, 40, tol);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= e.digits.size(); ++n) {
      const std::vector<Digit> head(e.digits.begin(), e.digits.begin() + static_cast<long>(n));
      const double err = std::fabs(x0 - eval_finite(kt, head));
      if (err > previous + 1e-13) {
        if (kt.below_one()) {
          ++increases_below_one;
        } else {
          ++trip.failures;
        }
      }
      previous = err;
    }
    ++trip.samples;
    trip.worst_residual = std::max(trip.worst_residual, previous);
    if (previous > tol.eps_compare) ++trip.failures;

    // Psi_k(x, y) = Psi_k(-y, -x), and the canonical root inverts Psi_k below the fold.
    const Point2<double> p = pt(unit_sample(seed, i, 35), -k.value() - 4.0 * unit_sample(seed, i, 36));
    const double fgap = (psi(k, p) - psi(k, reflect(p))).lpNorm<Eigen::Infinity>();
    ++fold.samples;
    fold.worst_residual = std::max(fold.worst_residual, fgap);
    if (fgap > tol.eps_compare) ++fold.failures;
    if (p.x() + p.y() <= 0.0) {
      const auto roots = psi_preimage(k, psi(k, p), tol);
      const double rgap = roots.empty() ? std::numeric_limits<double>::infinity()
                                        : (roots.canonical() - p).lpNorm<Eigen::Infinity>();
      ++root.samples;
      root.worst_residual = std::max(root.worst_residual, rgap);
      if (!(rgap <= tol.eps_compare)) ++root.failures;
    }
  }
  trip.metrics["increases_below_one"] = static_cast<double>(increases_below_one);
  trip.note = "monotone decrease is required for k >= 1 only; increases for k < 1 are counted";
  return {past, trip, fold, root};
}

Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::all, Suite::correspondence, Suite::containment, Suite::regions, Suite::witness,
                  Suite::oracle, Suite::identities, Suite::membership}) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

const char* to_string(Suite suite) {
  switch (suite) {
    case Suite::all: return "all";
    case Suite::correspondence: return "correspondence";
    case Suite::containment: return "containment";
    case Suite::regions: return "regions";
    case Suite::witness: return "witness";
    case Suite::oracle: return "oracle";
    case Suite::identities: return "identities";
    case Suite::membership: return "membership";
  }
  return "?";
}

namespace {

CheckRecord as_informational(CheckRecord rec) {
  rec.informational = true;
  return rec;
}

}  // namespace

VerificationReport run_verification(const ExperimentConfig& config, Suite suite) {
  ExperimentConfig cfg = config;
  if (cfg.k_list.empty()) cfg.k_list = default_k_grid();
  cfg.validate();
  const TolerancePolicy& tol = cfg.precision.tol;
  const auto wants = [suite](Suite s) { return suite == Suite::all || suite == s; };
  VerificationReport report;

  if (wants(Suite::correspondence) || wants(Suite::containment)) {
    for (const auto& k : cfg.k_list) {
      const auto batch = sample_jager_pairs(cfg, k);
      if (wants(Suite::correspondence)) report.append(correspondence_check(cfg, k, batch));
      if (wants(Suite::containment)) {
        report.append(hyperbola_check(batch, k.to_double(), tol.eps_boundary));
        for (auto& rec : containment_check(batch, k.to_double(), tol)) report.append(std::move(rec));
      }
    }
  }

  if (wants(Suite::regions)) {
    const std::size_t n = std::min<std::size_t>(cfg.samples, 10000);
    const std::pair<double, Digit> quads[] = {{0.5, 1}, {0.5, 2}, {1.0, 0}, {2.0, 0}, {2.0, 3}};
    for (const auto& [k, a] : quads) {
      report.append(region_two_sided_check(k, a, n, cfg.seed, tol, Prediction::corrected));
      report.append(as_informational(region_two_sided_check(k, a, n, cfg.seed, tol, Prediction::literal)));
    }
    for (double k : {0.2, 0.5, 0.8}) {
      report.append(region_two_sided_check(k, 0, n, cfg.seed, tol, Prediction::corrected));
      report.append(p0_boundary_curve_check(k, 256, tol, Prediction::corrected));
      report.append(as_informational(region_two_sided_check(k, 0, n, cfg.seed, tol, Prediction::literal)));
      report.append(as_informational(p0_boundary_curve_check(k, 256, tol, Prediction::literal)));
    }
  }

  if (wants(Suite::witness)) {
    report.append(witness_grid_check({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, {1.0, 1.5, 2.7},
                                     cfg.seed));
  }
  if (wants(Suite::oracle)) report.append(exact_oracle_check(100, 15, cfg.seed));
  if (wants(Suite::identities)) {
    for (auto& rec : identity_checks(1000, cfg.seed, TolerancePolicy::defaults(Precision::hardware))) {
      report.append(std::move(rec));
    }
  }
  if (wants(Suite::membership)) {
    for (const auto& k : cfg.k_list) {
      report.append(membership_cross_check(k.to_double(), 20000, cfg.seed, tol));
    }
  }
  return report;
}

std::vector<LabeledCurve<double>> region_boundary(const RealInput& k, const RegionRequest& request) {
  const KParameter<double> kk(k.to_double());
  std::vector<LabeledCurve<double>> curves;
  auto add_quad = [&](Digit a) {
    const auto quad = pa_sharp_quad(kk, a);
    LabeledCurve<double> c{"pa_quad_" + std::to_string(a), {}};
    for (const auto& v : quad.vertices) c.points.push_back(v);
    c.points.push_back(quad.vertices[0]);
    curves.push_back(std::move(c));
  };
  switch (request.kind) {
    case RegionKind::p0:
      curves = p0_boundary_curves(kk, request.curve_samples);
      break;
    case RegionKind::pa_quad:
      add_quad(request.a);
      break;
    case RegionKind::gamma_constructive:
      if (kk.below_one()) curves = p0_boundary_curves(kk, request.curve_samples);
      for (Digit a = kk.below_one() ? 1 : 0; a <= request.max_digit; ++a) add_quad(a);
      break;
    case RegionKind::gamma_literal: {
      const auto v = corollary_quad_vertices(kk);
      for (std::size_t i = 0; i < 4; ++i) {
        curves.push_back({"corollary_edge_" + std::to_string(i + 1), {v[i], v[(i + 1) % 4]}});
      }
      if (kk.below_one()) {
        curves.push_back({"hyperbola_arc", sample_hyperbola(kk, 0.5, 1.0 / (2.0 * kk.value()),
                                                            request.curve_samples)});
      }
      break;
    }
  }
  return curves;
}

}  // namespace jagerlab
