// jager_lab: expansions, orbits, regions and verification suites for
// k-continued fractions.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or domain
// error.

#include "jagerlab/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace jagerlab;
using Json = nlohmann::ordered_json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string k;
  std::string x0;
  std::size_t n = 10;
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  std::string mode = "hw";
  unsigned bits = 128;
  std::optional<double> eps_compare, eps_snap, eps_boundary;
  std::string format = "csv";
  std::string out;
  std::string which;
  std::string suite = "all";
  std::string k_list;
  std::size_t n_min = 1;
  std::size_t n_max = 30;
  unsigned threads = 0;
  bool stratified = false;
};

void add_precision_flags(CLI::App* cmd, Options& o, const char* default_mode = "hw") {
  cmd->add_option("--mode", o.mode, "Arithmetic: hw (double, escalating), ext, exact")
      ->check(CLI::IsMember({"hw", "ext", "exact"}))
      ->default_str(default_mode);
  cmd->add_option("--bits", o.bits, "Starting precision for ext mode (128..2048)")->capture_default_str();
  cmd->add_option("--eps-compare", o.eps_compare, "Absolute comparison tolerance");
  cmd->add_option("--eps-snap", o.eps_snap, "Relative floor-snapping tolerance");
  cmd->add_option("--eps-boundary", o.eps_boundary, "Boundary dead zone for region membership");
}

void add_sampling_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "Random x0 per k")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for every stochastic quantity")->capture_default_str();
  cmd->add_option("--n-min", o.n_min, "Smallest pair index kept")->capture_default_str();
  cmd->add_option("--n-max", o.n_max, "Orbit length")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0: JAGER_LAB_THREADS or all cores)");
  cmd->add_flag("--stratified", o.stratified, "Draw x0 stratified by first digit");
}

Precision parse_mode(const std::string& mode) {
  if (mode == "ext") return Precision::extended;
  if (mode == "exact") return Precision::exact;
  return Precision::hardware;
}

PrecisionConfig precision_config(const Options& o) {
  PrecisionConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.bits = o.bits;
  cfg.tol = TolerancePolicy::defaults(cfg.mode);
  if (o.eps_compare) cfg.tol.eps_compare = *o.eps_compare;
  if (o.eps_snap) cfg.tol.eps_snap = *o.eps_snap;
  if (o.eps_boundary) cfg.tol.eps_boundary = *o.eps_boundary;
  try {
    cfg.tol.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.mode == Precision::extended && (o.bits < 1 || o.bits > 2048)) {
    throw UsageError("--bits must lie in [1, 2048]");
  }
  return cfg;
}

RealInput parse_real(const std::string& text, const char* flag) {
  try {
    return RealInput::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

RealInput parse_k(const std::string& text, Precision mode) {
  if (text.empty()) throw UsageError("--k is required");
  auto k = parse_real(text, "--k");
  if (!(k.exact() > 0)) throw UsageError("--k must be positive");
  if (mode == Precision::exact && !k.rational_syntax()) {
    throw UsageError("exact mode needs --k as an integer or num/den, got " + text);
  }
  return k;
}

RealInput parse_x0(const std::string& text, Precision mode) {
  if (text.empty()) throw UsageError("--x0 is required");
  auto x0 = parse_real(text, "--x0");
  if (!(x0.exact() > 0 && x0.exact() < 1)) throw UsageError("--x0 must lie in (0,1)");
  if (mode == Precision::exact && !x0.rational_syntax()) {
    throw UsageError("exact mode needs --x0 as num/den, got " + text);
  }
  return x0;
}

std::vector<RealInput> parse_k_list(const std::string& text) {
  std::vector<RealInput> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto k = parse_real(item, "--k-list");
    if (!(k.exact() > 0)) throw UsageError("--k-list entries must be positive");
    ks.push_back(std::move(k));
  }
  if (ks.empty()) throw UsageError("--k-list is empty");
  return ks;
}

const char* mode_name(Precision p) {
  switch (p) {
    case Precision::hardware: return "hardware";
    case Precision::extended: return "extended";
    case Precision::exact: return "exact";
  }
  return "?";
}

void emit_table(const Options& o, const Json& header, const std::vector<std::string>& columns,
                const std::vector<std::vector<Json>>& rows) {
  if (o.format == "json") {
    Json doc = header;
    doc["rows"] = Json::array();
    for (const auto& row : rows) {
      Json r;
      for (std::size_t i = 0; i < columns.size(); ++i) r[columns[i]] = row[i];
      doc["rows"].push_back(std::move(r));
    }
    std::cout << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < columns.size(); ++i) std::cout << (i ? "," : "") << columns[i];
  std::cout << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::cout << (i ? "," : "");
      if (row[i].is_number_float()) {
        std::cout << format_double(row[i].get<double>());
      } else if (row[i].is_boolean()) {
        std::cout << (row[i].get<bool>() ? 1 : 0);
      } else {
        std::cout << row[i].dump();
      }
    }
    std::cout << '\n';
  }
}

Json orbit_header(const OrbitAnalysis& a) {
  Json h;
  h["k"] = a.k;
  h["x0"] = a.x0;
  h["mode"] = mode_name(a.mode_used);
  h["working_bits"] = a.working_bits;
  h["terminated"] = a.terminated;
  h["precision_limited"] = a.precision_limited;
  return h;
}

OrbitAnalysis run_orbit(const Options& o) {
  const auto precision = precision_config(o);
  if (o.n < 1) throw UsageError("-n must be at least 1");
  return analyze_orbit(parse_k(o.k, precision.mode), parse_x0(o.x0, precision.mode), o.n, precision);
}

int cmd_expand(const Options& o) {
  const auto a = run_orbit(o);
  std::vector<std::vector<Json>> rows;
  for (std::size_t n = 1; n < a.theta.size(); ++n) {
    rows.push_back({n, a.digits[n - 1], a.p[n], a.q[n], a.p[n] / a.q[n], a.theta[n]});
  }
  emit_table(o, orbit_header(a), {"n", "a_n", "p_n", "q_n", "p_n/q_n", "theta_n"}, rows);
  if (a.terminated) std::cerr << "note: expansion terminated at n=" << a.digits.size() << '\n';
  if (a.precision_limited) std::cerr << "note: theta beyond the trusted prefix exceeds 2048-bit accuracy\n";
  return 0;
}

int cmd_orbit(const Options& o) {
  const auto a = run_orbit(o);
  std::vector<std::vector<Json>> rows;
  for (const auto& p : a.pairs) rows.push_back({p.n, p.x, p.y, p.u, p.v, p.residual});
  emit_table(o, orbit_header(a), {"n", "x_n", "y_n", "u", "v", "residual"}, rows);
  if (a.terminated) {
    std::cerr << "note: orbit terminated at n=" << a.digits.size() << "; table truncated\n";
  }
  if (a.precision_limited) {
    std::cerr << "note: table truncated to n=" << a.pairs.size() << " by the 2048-bit precision cap\n";
  }
  return 0;
}

RegionRequest parse_which(const std::string& which) {
  RegionRequest r;
  if (which == "p0") {
    r.kind = RegionKind::p0;
  } else if (which == "gamma-constructive") {
    r.kind = RegionKind::gamma_constructive;
  } else if (which == "gamma-literal") {
    r.kind = RegionKind::gamma_literal;
  } else if (which.rfind("pa:", 0) == 0) {
    r.kind = RegionKind::pa_quad;
    const std::string digits = which.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--which pa:<a> needs a nonnegative integer a");
    }
    r.a = std::stoull(digits);
  } else {
    throw UsageError("--which must be p0, pa:<a>, gamma-constructive or gamma-literal");
  }
  return r;
}

std::ofstream open_output(const std::filesystem::path& dir, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int cmd_region(const Options& o) {
  const auto k = parse_k(o.k, Precision::hardware);
  const auto curves = region_boundary(k, parse_which(o.which));
  if (o.out.empty()) {
    write_boundary_csv(std::cout, curves);
  } else {
    auto out = open_output(o.out, "region_boundary.csv");
    write_boundary_csv(out, curves);
    std::cout << (std::filesystem::path(o.out) / "region_boundary.csv").string() << '\n';
  }
  return 0;
}

int cmd_witness(const Options& o) {
  const auto k = parse_k(o.k, Precision::hardware);
  const auto w = injectivity_witness(k.to_double(), o.seed);
  Json j;
  j["k"] = w.k;
  j["p1"] = {w.p1.x(), w.p1.y()};
  j["p2"] = {w.p2.x(), w.p2.y()};
  j["image"] = {w.image.x(), w.image.y()};
  j["separation"] = w.separation;
  j["image_gap"] = w.image_gap;
  std::cout << j.dump(2) << '\n';
  return 0;
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig cfg;
  if (!o.k_list.empty()) cfg.k_list = parse_k_list(o.k_list);
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.threads = o.threads;
  cfg.stratified = o.stratified;
  cfg.precision = precision_config(o);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int cmd_verify(const Options& o, bool mode_given) {
  Suite suite;
  try {
    suite = parse_suite(o.suite);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  // Sampled orbits default to extended precision.
  Options p = o;
  if (!mode_given) p.mode = "ext";
  const auto cfg = experiment_config(p);
  const auto report = run_verification(cfg, suite);

  for (const auto& c : report.checks) {
    const char* status = c.informational ? "INFO" : (c.passed() ? "PASS" : "FAIL");
    std::cout << status << "  " << c.name;
    if (c.k) std::cout << "  k=" << *c.k;
    std::cout << "  samples=" << c.samples << "  failures=" << c.failures
              << "  boundary_skips=" << c.boundary_skips
              << "  worst=" << c.worst_residual << '\n';
  }
  std::cout << (report.passed() ? "verify: pass" : "verify: FAIL") << '\n';
  if (!o.out.empty()) {
    auto out = open_output(o.out, "report.json");
    out << report_to_json(report) << '\n';
  }
  return report.passed() ? 0 : kExitCheckFailed;
}

int cmd_plot(const Options& o, bool mode_given) {
  if (o.out.empty()) throw UsageError("plot needs --out DIR");
  Options p = o;
  if (!mode_given) p.mode = "ext";
  const auto cfg = experiment_config(p);
  const auto files = emit_plot_data(parse_k(o.k, Precision::hardware), o.out, cfg);
  std::cout << files.boundary.string() << '\n'
            << files.pairs.string() << " (" << files.pair_rows << " pairs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-continued fractions, Jager pairs and the regions Gamma_k"};
  app.require_subcommand(1);
  Options o;

  auto* expand = app.add_subcommand("expand", "Digits, convergents and theta_n of one x0");
  auto* orbit = app.add_subcommand("orbit", "Dynamic pairs, Jager pairs and correspondence residuals");
  for (auto* cmd : {expand, orbit}) {
    cmd->add_option("--k", o.k, "Parameter k > 0 (decimal or num/den)")->required();
    cmd->add_option("--x0", o.x0, "Starting point in (0,1)")->required();
    cmd->add_option("-n", o.n, "Number of steps")->capture_default_str();
    cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    add_precision_flags(cmd, o);
  }

  auto* region = app.add_subcommand("region", "Boundary polylines of a region as CSV");
  region->add_option("--k", o.k, "Parameter k > 0")->required();
  region->add_option("--which", o.which, "p0, pa:<a>, gamma-constructive or gamma-literal")->required();
  region->add_option("--out", o.out, "Directory for region_boundary.csv (default: stdout)");

  auto* witness = app.add_subcommand("witness", "Two points with the same Psi_k image (k < 1)");
  witness->add_option("--k", o.k, "Parameter 0 < k < 1")->required();
  witness->add_option("--seed", o.seed)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run verification suites and write report.json");
  verify->add_option("--suite", o.suite,
                     "all, correspondence, containment, regions, witness, oracle, identities, membership")
      ->capture_default_str();
  verify->add_option("--k-list", o.k_list, "Comma-separated k values (default 0.3,0.5,0.9,1,1.5,2.7)");
  verify->add_option("--out", o.out, "Directory for report.json");
  add_sampling_flags(verify, o);
  add_precision_flags(verify, o, "ext");

  auto* plot = app.add_subcommand("plot", "Write region_boundary.csv and jager_pairs.csv for one k");
  plot->add_option("--k", o.k, "Parameter k > 0")->required();
  plot->add_option("--out", o.out, "Output directory")->required();
  add_sampling_flags(plot, o);
  add_precision_flags(plot, o, "ext");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*expand) return cmd_expand(o);
    if (*orbit) return cmd_orbit(o);
    if (*region) return cmd_region(o);
    if (*witness) return cmd_witness(o);
    if (*verify) return cmd_verify(o, verify->count("--mode") > 0);
    if (*plot) return cmd_plot(o, plot->count("--mode") > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OrbitEnded& e) {
    std::cerr << "orbit ended: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
