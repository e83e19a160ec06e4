#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hym/asymptotics.hpp"
#include "hym/disc_solver.hpp"

namespace hym {

struct OutputConfig {
  std::string directory = "out";
  bool svg = true;
};

/// Everything a hymlab run needs. Parsed from JSON; absent keys keep these
/// defaults, unknown keys are rejected.
struct RunConfig {
  GeometryConfig geometry;
  RadialSolverConfig solver = [] {
    RadialSolverConfig c;
    c.mesh.nodes_per_inverse_eps = 64;
    return c;
  }();
  DiscConfig disc;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  /// Single-solve commands.
  double epsilon = 0.1;
  OutputConfig output;

  /// Every module precondition, checked before any solve starts.
  void validate() const;
};

/// Throws ValidationError naming the offending key (e.g. "geometry.r0").
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_json(const RunConfig& cfg);

/// Shortest round-trip decimal form.
std::string format_number(double x);

/// report.json: keys config, per_epsilon, slopes, verdicts, invariants.
std::string report_json(const RunConfig& cfg, const SweepReport& rep, const DecayVerdict& verdict);
std::string invariants_json(const InvariantSummary& inv);

std::string radial_csv(const RadialSolution<Real>& sol);
std::string disc_csv(const DiscSolution<long double>& sol);
std::string m0_csv(const SweepReport& rep);
std::string timing_csv(const SweepReport& rep);

/// Log-log line chart, one series.
std::string svg_loglog(const std::string& title, const std::string& ylabel, const std::vector<double>& x,
                       const std::vector<double>& y);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hym
