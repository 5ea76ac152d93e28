#pragma once

// Monte Carlo harness over orbits and regions. Every stochastic quantity is a
// pure function of (seed, sample index), so results do not depend on the
// number of worker threads or on evaluation order.

#include "jagerlab/geometry.hpp"
#include "jagerlab/jager.hpp"
#include "jagerlab/scalar.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jagerlab {

struct ExperimentConfig {
  std::vector<RealInput> k_list;
  std::size_t samples = 10000;
  std::size_t n_min = 1;
  std::size_t n_max = 30;
  std::uint64_t seed = 42;
  PrecisionConfig precision{Precision::extended, 128, TolerancePolicy::defaults(Precision::extended)};
  // Draw x0 uniformly inside the first-digit interval of a = index mod (max + 1).
  bool stratified = false;
  Digit stratify_max_digit = 8;
  unsigned threads = 0;  // 0: JAGER_LAB_THREADS, else hardware concurrency

  void validate() const;
};

std::vector<RealInput> default_k_grid();

/// Counter-based uniform draw in (0,1) with 53 random bits, keyed by
/// (seed, index, stream).
double unit_sample(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

unsigned resolve_threads(unsigned requested);

struct PairSample {
  double k;
  std::uint64_t index;  // x0 seed index
  double x0;
  PairRecord pair;
  bool orbit_terminated = false;
};

struct SampleStats {
  std::size_t orbits = 0;
  std::size_t terminated = 0;
  std::size_t precision_limited = 0;
  std::size_t pairs = 0;
  unsigned max_working_bits = 0;  // 0 when every orbit ran in exact rationals
};

struct PairBatch {
  std::vector<PairSample> pairs;  // ordered by (k, index, n)
  SampleStats stats;
};

double sample_x0(const ExperimentConfig& cfg, double k, std::uint64_t index);

PairBatch sample_jager_pairs(const ExperimentConfig& cfg, const RealInput& k);
PairBatch sample_jager_pairs(const ExperimentConfig& cfg);

struct Witness {
  double k;
  Point2<double> p1;
  Point2<double> p2;
  Point2<double> image;
  double separation;
  double image_gap;  // |Psi(p1) - Psi(p2)|
};

/// Witness from p1 = (x, -x_prime), p2 = reflect(p1) with k <= x_prime < x < 1.
Witness make_witness(double k, double x, double x_prime);

/// Two distinct points of P_(k,0) with the same Psi_k image. Refuses k >= 1
/// (every dynamic pair then has x + y < 0, where Psi_k is injective) and k
/// too close to 1 for a separation above 0.1.
Witness injectivity_witness(double k, std::uint64_t seed);

struct CheckRecord {
  std::string name;
  std::optional<double> k;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t boundary_skips = 0;
  double worst_residual = 0.0;
  bool informational = false;
  std::map<std::string, double> metrics;
  std::string note;

  bool passed() const { return informational || failures == 0; }
};

struct VerificationReport {
  std::vector<CheckRecord> checks;

  bool passed() const;
  void append(CheckRecord record) { checks.push_back(std::move(record)); }
  void merge(const VerificationReport& other);
};

/// Psi_k(x_n, y_n) against (theta_{n-1}, theta_n) over sampled orbits.
/// Terminated orbits are skipped and counted. At k = 1 the golden orbit is
/// checked as a pinned case (residual < 1e-9).
CheckRecord correspondence_check(const ExperimentConfig& cfg, const RealInput& k,
                                 double threshold = 1e-8);
CheckRecord correspondence_check(const ExperimentConfig& cfg, const RealInput& k,
                                 const PairBatch& batch, double threshold = 1e-8);

/// 4 k theta_{n-1} theta_n <= 1 + slack over a sampled batch.
CheckRecord hyperbola_check(const PairBatch& batch, double k, double slack = 1e-9);

/// Constructive-union containment (pass/fail) plus, as separate
/// informational records, agreement with the corollary-literal region and the
/// small-u support probe.
std::vector<CheckRecord> containment_check(const PairBatch& batch, double k,
                                           const TolerancePolicy& tol);

/// Which description of Psi_k(P_(k,a)) a region check tests:
///  - literal: pa_sharp_quad, or p0_sharp_contains for k < 1 and a = 0;
///  - corrected: pa_image_quad, or p0_enclosed_contains.
enum class Prediction { literal, corrected };

/// Forward: uniform points of P_(k,a) map into the predicted image. Reverse:
/// rejection-sampled points of the predicted image have their canonical
/// preimage in P_(k,a). Points within eps_boundary of a boundary are skipped.
CheckRecord region_two_sided_check(double k, Digit a, std::size_t samples, std::uint64_t seed,
                                   const TolerancePolicy& tol,
                                   Prediction prediction = Prediction::literal);

/// Every sample of every P0 boundary curve must classify as "boundary".
CheckRecord p0_boundary_curve_check(double k, std::size_t samples_per_curve,
                                    const TolerancePolicy& tol,
                                    Prediction prediction = Prediction::literal);

/// Witness validity for each k in `grid`, plus refusal for each k in `refused`.
CheckRecord witness_grid_check(const std::vector<double>& grid, const std::vector<double>& refused,
                               std::uint64_t seed);

/// Hardware-mode digits, convergents and theta against exact rationals for
/// random small-denominator (k, x0); determinant identity checked exactly.
CheckRecord exact_oracle_check(std::size_t cases, std::size_t n_max, std::uint64_t seed,
                               double tolerance = 1e-9);

/// Constructive-union vs piecewise membership away from all boundaries.
CheckRecord membership_cross_check(double k, std::size_t samples, std::uint64_t seed,
                                   const TolerancePolicy& tol);

/// Algebraic identities on random inputs: past_step vs past_direct, the
/// expand/eval_finite round trip, fold invariance of Psi_k and the preimage
/// round trip below the fold.
std::vector<CheckRecord> identity_checks(std::size_t samples, std::uint64_t seed,
                                         const TolerancePolicy& tol);

enum class Suite { all, correspondence, containment, regions, witness, oracle, identities, membership };

Suite parse_suite(std::string_view name);
const char* to_string(Suite suite);

/// Runs the selected suite over cfg.k_list (default grid when empty). Region
/// suites gate on the corrected image descriptions; the literal statements
/// are recorded alongside as informational.
VerificationReport run_verification(const ExperimentConfig& cfg, Suite suite);

// ---------------------------------------------------------------------------
// Plot data and file formats.

enum class RegionKind { p0, pa_quad, gamma_constructive, gamma_literal };

struct RegionRequest {
  RegionKind kind = RegionKind::gamma_literal;
  Digit a = 0;                 // for pa_quad
  Digit max_digit = 12;        // quadrangles emitted for gamma_constructive
  std::size_t curve_samples = 256;
};

std::vector<LabeledCurve<double>> region_boundary(const RealInput& k, const RegionRequest& request);

void write_boundary_csv(std::ostream& out, const std::vector<LabeledCurve<double>>& curves);
void write_pairs_csv(std::ostream& out, const PairBatch& batch);
std::string report_to_json(const VerificationReport& report, int indent = 2);

struct PlotFiles {
  std::filesystem::path boundary;
  std::filesystem::path pairs;
  std::size_t pair_rows = 0;
};

/// Writes region_boundary.csv (corollary edges, constructive quadrangles and,
/// for k < 1, the P0 curves and the hyperbola arc) and jager_pairs.csv.
PlotFiles emit_plot_data(const RealInput& k, const std::filesystem::path& output_dir,
                         const ExperimentConfig& cfg);

std::string format_double(double value);

}  // namespace jagerlab
