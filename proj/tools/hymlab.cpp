#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hym/io.hpp"

using namespace hym;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kVerdict = 3 };

struct Options {
  std::string config;
  std::optional<double> epsilon;
  std::optional<std::string> out;
};

RunConfig resolve(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.out) c.output.directory = *o.out;
  c.validate();
  return c;
}

std::string eps_tag(double e) { return "eps" + format_number(e); }

GluedMetric glued(const RunConfig& c) {
  return GluedMetric(c.geometry, rescale_to_physical(solve_radial(c.epsilon, c.solver), c.geometry.r0));
}

int solve_radial_cmd(const RunConfig& c) {
  const auto sol = solve_radial(c.epsilon, c.solver);
  const fs::path path = fs::path(c.output.directory) / ("radial_" + eps_tag(c.epsilon) + ".csv");
  write_text(path, radial_csv(sol));
  const auto rep = verify_inequalities(sol);
  std::printf("solve-radial eps=%s N=%d iterations=%d residual=%.3e inequalities=%s -> %s\n",
              format_number(c.epsilon).c_str(), sol.mesh.n(), sol.iterations, to_double(sol.residual_sup),
              rep.all_pass() ? "pass" : "fail", path.string().c_str());
  return kOk;
}

int solve_disc_cmd(const RunConfig& c) {
  const auto sol = solve_disc(c.epsilon, c.disc);
  const fs::path path = fs::path(c.output.directory) / ("disc_" + eps_tag(c.epsilon) + ".csv");
  write_text(path, disc_csv(sol));
  std::printf("solve-disc eps=%s rings=%d angles=%d residual=%.3e angular_variation=%.3e -> %s\n",
              format_number(c.epsilon).c_str(), sol.nr, sol.ntheta, static_cast<double>(sol.residual_sup),
              static_cast<double>(sol.angular_variation), path.string().c_str());
  return kOk;
}

int green_cmd(const RunConfig& c) {
  const GreenField<double> G(c.geometry.divisor());
  const int n = 64;
  std::string csv = "x,y,G\n";
  double periodic = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z((i + 0.5) / n, (j + 0.5) / n);
      try {
        const double g = G(z);
        csv += format_number(z.real()) + "," + format_number(z.imag()) + "," + format_number(g) + "\n";
        periodic = std::max({periodic, std::abs(G(z + 1.0) - g), std::abs(G(z + Complex(0, 1)) - g)});
      } catch (const PoleError&) {
      }
    }
  const fs::path path = fs::path(c.output.directory) / "green.csv";
  write_text(path, csv);
  std::printf("green points=%d grid_mean=%.3e periodicity=%.3e -> %s\n", static_cast<int>(G.divisor().size()),
              G.grid_mean(), periodic, path.string().c_str());
  return kOk;
}

int assemble_cmd(const RunConfig& c) {
  const auto m = glued(c);
  const double r0 = c.geometry.r0;
  std::string csv = "chart,r,phi1,phi2,kappa,psi,det_error\n";
  double worst_det = 0, worst_glue = 0;
  for (int chart = 1; chart <= c.geometry.n; ++chart) {
    for (int k = 0; k < 400; ++k) {
      const double r = 2 * r0 * k / 400;
      const auto p = m.phi_pair(r);
      const Complex z = std::polar(r, 0.3);
      const double g = m.green().harmonic_part(chart - 1, m.atlas()[chart].center + z, c.geometry.chart_radius());
      const double det_err = std::abs(m.metric_hat(chart, z, true).determinant().real() / std::exp(2 * g) - 1);
      worst_det = std::max(worst_det, det_err);
      if (r > 1.5 * r0) worst_glue = std::max(worst_glue, m.gluing_mismatch(chart, z));
      csv += std::to_string(chart) + "," + format_number(r) + "," + format_number(p.phi1.v) + "," +
             format_number(p.phi2.v) + "," + format_number(m.kappa(r)) + "," + format_number(m.psi(r).value) + "," +
             format_number(det_err) + "\n";
    }
  }
  const fs::path path = fs::path(c.output.directory) / ("metric_" + eps_tag(c.epsilon) + ".csv");
  write_text(path, csv);
  std::printf("assemble eps=%s physical_eps=%.6g psi_sup=%.3e det_error=%.3e gluing=%.3e -> %s\n",
              format_number(c.epsilon).c_str(), m.epsilon(), m.psi_sup(), worst_det, worst_glue,
              path.string().c_str());
  return kOk;
}

int curvature_cmd(const RunConfig& c) {
  const auto m = glued(c);
  const double r0 = c.geometry.r0, h = r0 / 64;
  const Complex w(0.3, 0.2);
  std::string csv = "x,y,psi,lambda11_h,lambda11_h2,lambda11_extrapolated,trace_h,error_extrapolated,junction\n";
  double worst = 0, worst_junction = 0;
  for (int k = 0; k <= 32; ++k) {
    const Complex z = std::polar(r0 * (1 + 0.9 * k / 32.0), 0.7);
    const Mat2 an = m.lambda_analytic(1, z);
    const Mat2 n1 = m.lambda_numeric(1, z, w, h), n2 = m.lambda_numeric(1, z, w, h / 2);
    const Mat2 ex = (4.0 * n2 - n1) / 3.0;
    const double err = (ex - an).cwiseAbs().maxCoeff();
    // Stencils reaching across a C^2 junction of the cutoff are not smooth
    // enough for extrapolation; they are reported separately.
    const bool junction = straddles_junction(m, std::abs(z), h);
    (junction ? worst_junction : worst) = std::max(junction ? worst_junction : worst, err);
    csv += format_number(z.real()) + "," + format_number(z.imag()) + "," + format_number(an(0, 0).real()) + "," +
           format_number(n1(0, 0).real()) + "," + format_number(n2(0, 0).real()) + "," +
           format_number(ex(0, 0).real()) + "," + format_number(std::abs(n1.trace())) + "," + format_number(err) +
           "," + (junction ? "1" : "0") + "\n";
  }
  const fs::path path = fs::path(c.output.directory) / ("curvature_" + eps_tag(c.epsilon) + ".csv");
  write_text(path, csv);
  std::printf("curvature eps=%s h=%.3e richardson_error=%.3e junction_error=%.3e -> %s\n",
              format_number(c.epsilon).c_str(), h, worst, worst_junction, path.string().c_str());
  return kOk;
}

int invariants_cmd(const RunConfig& c) {
  const auto inv = evaluate_invariants(glued(c));
  const fs::path path = fs::path(c.output.directory) / ("invariants_" + eps_tag(c.epsilon) + ".json");
  write_text(path, invariants_json(inv));
  std::printf("invariants eps=%s trace_sup=%.3e c1_total=%.3e flux_discrepancy=%.3e volume/quoted=%.6f -> %s\n",
              format_number(c.epsilon).c_str(), inv.trace_sup, inv.c1_total, inv.flux.discrepancy(), inv.flux.ratio,
              path.string().c_str());
  return kOk;
}

int sweep_cmd(const RunConfig& c, bool plots) {
  if (c.epsilons.size() < 3) throw ValidationError("config: sweep.epsilons: need >= 3 values for the decay fit");
  const auto rep = sweep(c.epsilons, c.geometry, c.solver);
  const auto verdict = fit_superpolynomial(rep);
  const fs::path dir(c.output.directory);
  write_text(dir / "report.json", report_json(c, rep, verdict));
  write_text(dir / "m0_vs_eps.csv", m0_csv(rep));
  write_text(dir / "timing.csv", timing_csv(rep));
  if (plots && c.output.svg) {
    std::vector<double> m0, psi;
    for (const auto& r : rep.records) {
      m0.push_back(r.m_half.m0);
      psi.push_back(r.psi_sup);
    }
    write_text(dir / "m0_vs_eps.svg", svg_loglog("M0(1/2) against eps", "M0(1/2)", rep.epsilons, m0));
    write_text(dir / "psi_vs_eps.svg", svg_loglog("sup |psi| against eps", "sup |psi|", rep.epsilons, psi));
  }
  const bool ok = verdict.pass() && inequalities_pass(rep);
  std::string slopes;
  for (double s : rep.slopes) slopes += (slopes.empty() ? "" : ",") + format_number(std::round(s * 1000) / 1000);
  std::printf("%s eps=%zu m0_slopes=[%s] m0=%s psi=%s inequalities=%s -> %s\n", plots ? "sweep" : "verify",
              rep.epsilons.size(), slopes.c_str(), verdict.m0.pass ? "pass" : "fail",
              verdict.psi.pass ? "pass" : "fail", inequalities_pass(rep) ? "pass" : "fail",
              (dir / "report.json").string().c_str());
  return ok ? kOk : kVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hymlab: glued HYM metric numerics"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--epsilon", o.epsilon, "epsilon for single-solve commands");
  app.add_option("--out", o.out, "output directory");
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"solve-radial", "certified radial solve, writes radial_eps<e>.csv"},
      {"solve-disc", "2-D disc solve, writes disc_eps<e>.csv"},
      {"green", "torus Green function on a 64x64 grid, writes green.csv"},
      {"assemble", "glued metric data on the branch charts, writes metric_eps<e>.csv"},
      {"curvature", "numeric against analytic contraction, writes curvature_eps<e>.csv"},
      {"invariants", "trace, c1 and flux checks, writes invariants_eps<e>.json"},
      {"sweep", "epsilon sweep, writes report.json, m0_vs_eps.csv and plots"},
      {"verify", "sweep verdicts only; exit 3 when any fails"}};
  for (const auto& [name, help] : cmds) app.add_subcommand(name, help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const RunConfig c = resolve(o);
    if (cmd == "solve-radial") return solve_radial_cmd(c);
    if (cmd == "solve-disc") return solve_disc_cmd(c);
    if (cmd == "green") return green_cmd(c);
    if (cmd == "assemble") return assemble_cmd(c);
    if (cmd == "curvature") return curvature_cmd(c);
    if (cmd == "invariants") return invariants_cmd(c);
    if (cmd == "sweep") return sweep_cmd(c, true);
    if (cmd == "verify") return sweep_cmd(c, false);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kSolver;
  }
  return kValidation;
}
