#include "jagerlab/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace jagerlab {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_boundary_csv(std::ostream& out, const std::vector<LabeledCurve<double>>& curves) {
  out << "label,u,v\n";
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      out << curve.label << ',' << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
    }
  }
}

void write_pairs_csv(std::ostream& out, const PairBatch& batch) {
  out << "k,x0_seed_index,n,u,v,x_n,y_n,a_n\n";
  for (const auto& s : batch.pairs) {
    out << format_double(s.k) << ',' << s.index << ',' << s.pair.n << ',' << format_double(s.pair.u)
        << ',' << format_double(s.pair.v) << ',' << format_double(s.pair.x) << ','
        << format_double(s.pair.y) << ',' << s.pair.digit << '\n';
  }
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string report_to_json(const VerificationReport& report, int indent) {
  nlohmann::ordered_json root;
  root["passed"] = report.passed();
  root["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["k"] = c.k ? number_or_null(*c.k) : nlohmann::ordered_json(nullptr);
    j["samples"] = c.samples;
    j["failures"] = c.failures;
    j["boundary_skips"] = c.boundary_skips;
    j["worst_residual"] = number_or_null(c.worst_residual);
    j["informational"] = c.informational;
    j["passed"] = c.passed();
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [key, value] : c.metrics) metrics[key] = number_or_null(value);
    j["metrics"] = std::move(metrics);
    if (!c.note.empty()) j["note"] = c.note;
    root["checks"].push_back(std::move(j));
  }
  return root.dump(indent);
}

PlotFiles emit_plot_data(const RealInput& k, const std::filesystem::path& output_dir,
                         const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  PlotFiles files{output_dir / "region_boundary.csv", output_dir / "jager_pairs.csv", 0};

  RegionRequest literal;
  literal.kind = RegionKind::gamma_literal;
  RegionRequest constructive;
  constructive.kind = RegionKind::gamma_constructive;
  auto curves = region_boundary(k, literal);
  const auto more = region_boundary(k, constructive);
  curves.insert(curves.end(), more.begin(), more.end());

  std::ofstream boundary(files.boundary);
  if (!boundary) throw std::runtime_error("cannot write " + files.boundary.string());
  write_boundary_csv(boundary, curves);

  const auto batch = sample_jager_pairs(cfg, k);
  std::ofstream pairs(files.pairs);
  if (!pairs) throw std::runtime_error("cannot write " + files.pairs.string());
  write_pairs_csv(pairs, batch);
  files.pair_rows = batch.pairs.size();
  if (!boundary.good() || !pairs.good()) throw std::runtime_error("write failed in " + output_dir.string());
  return files;
}

}  // namespace jagerlab
