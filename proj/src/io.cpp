#include "hym/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hym {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ValidationError("config: " + key + ": " + why);
}

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad(where.empty() ? k : where + "." + k, "unknown key");
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad(key, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) bad(key, "expected true or false");
  return j.get<bool>();
}

std::complex<double> get_point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) bad(key, "expected [x, y]");
  return {get_number(j[0], key + "[0]"), get_number(j[1], key + "[1]")};
}

std::vector<std::complex<double>> get_points(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected a list of [x, y]");
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_point(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

json point_json(std::complex<double> p) { return json::array({p.real(), p.imag()}); }

json points_json(const std::vector<std::complex<double>>& ps) {
  json a = json::array();
  for (auto p : ps) a.push_back(point_json(p));
  return a;
}

json config_to_json(const RunConfig& c) {
  return {
      {"geometry",
       {{"n", c.geometry.n},
        {"d", c.geometry.d},
        {"r0", c.geometry.r0},
        {"branch_points", points_json(c.geometry.branch_points)},
        {"divisor_points", points_json(c.geometry.divisor_points)},
        {"section", point_json(c.geometry.section)}}},
      {"solver",
       {{"tolerance", c.solver.tolerance},
        {"max_iterations", c.solver.max_iterations},
        {"nodes", c.solver.mesh.nodes},
        {"nodes_per_inverse_eps", c.solver.mesh.nodes_per_inverse_eps},
        {"inner_exponent", c.solver.mesh.inner_exponent}}},
      {"disc",
       {{"radial_nodes", c.disc.radial_nodes},
        {"angular_nodes", c.disc.angular_nodes},
        {"tolerance", c.disc.tolerance},
        {"max_iterations", c.disc.max_iterations}}},
      {"sweep", {{"epsilons", c.epsilons}}},
      {"epsilon", c.epsilon},
      {"output", {{"directory", c.output.directory}, {"svg", c.output.svg}}},
  };
}

json check_json(const InequalityCheck& c) {
  return {{"name", c.name},     {"bound", c.bound}, {"value", c.value},
          {"margin", c.margin}, {"pass", c.pass},   {"informational", c.informational}};
}

json m_json(const MValues& m) {
  return {{"t", m.t}, {"m0", m.m0}, {"m1", m.m1}, {"m2", m.m2}, {"m3", m.m3}};
}

json series_json(const SeriesVerdict& v) {
  return {{"pass", v.pass},
          {"slopes", v.slopes},
          {"monotone", v.monotone},
          {"slopes_increasing", v.slopes_increasing},
          {"final_slope_above_3", v.final_slope_above_3},
          {"reason", v.reason}};
}

json flux_json(const FluxRecord& f) {
  return {{"volume", f.volume_refined}, {"volume_coarse", f.volume}, {"boundary", f.boundary},
          {"paper", f.paper},           {"ratio", f.ratio},          {"discrepancy", f.discrepancy()},
          {"converged", f.converged}};
}

json invariants_to_json(const InvariantSummary& s) {
  return {{"epsilon", s.epsilon},
          {"trace_sup", s.trace_sup},
          {"c1_total", s.c1_total},
          {"flux", flux_json(s.flux)},
          {"flux_singular", flux_json(s.flux_singular)}};
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  validate_eps_list(epsilons);
  if (!(epsilon > 0 && epsilon < 0.5)) bad("epsilon", "must lie in (0, 1/2)");
  if (!(solver.tolerance > 0)) bad("solver.tolerance", "must be positive");
  if (solver.max_iterations < 1) bad("solver.max_iterations", "must be >= 1");
  if (solver.mesh.nodes < 64) bad("solver.nodes", "must be >= 64");
  if (solver.mesh.nodes_per_inverse_eps < 0) bad("solver.nodes_per_inverse_eps", "must be >= 0");
  if (!(solver.mesh.inner_exponent > 0)) bad("solver.inner_exponent", "must be positive");
  if (disc.radial_nodes < 16) bad("disc.radial_nodes", "must be >= 16");
  if (disc.angular_nodes < 32) bad("disc.angular_nodes", "must be >= 32");
  if (!(disc.tolerance > 0)) bad("disc.tolerance", "must be positive");
  if (output.directory.empty()) bad("output.directory", "must be non-empty");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  only_keys(j, "", {"geometry", "solver", "disc", "sweep", "epsilon", "output"});
  RunConfig c;
  if (j.contains("geometry")) {
    const auto& g = j["geometry"];
    only_keys(g, "geometry", {"n", "d", "r0", "branch_points", "divisor_points", "section"});
    if (g.contains("n")) c.geometry.n = get_int(g["n"], "geometry.n");
    if (g.contains("d")) c.geometry.d = get_int(g["d"], "geometry.d");
    if (g.contains("r0")) c.geometry.r0 = get_number(g["r0"], "geometry.r0");
    if (g.contains("branch_points")) c.geometry.branch_points = get_points(g["branch_points"], "geometry.branch_points");
    if (g.contains("divisor_points"))
      c.geometry.divisor_points = get_points(g["divisor_points"], "geometry.divisor_points");
    if (g.contains("section")) c.geometry.section = get_point(g["section"], "geometry.section");
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    only_keys(s, "solver", {"tolerance", "max_iterations", "nodes", "nodes_per_inverse_eps", "inner_exponent"});
    if (s.contains("tolerance")) c.solver.tolerance = get_number(s["tolerance"], "solver.tolerance");
    if (s.contains("max_iterations")) c.solver.max_iterations = get_int(s["max_iterations"], "solver.max_iterations");
    if (s.contains("nodes")) c.solver.mesh.nodes = get_int(s["nodes"], "solver.nodes");
    if (s.contains("nodes_per_inverse_eps"))
      c.solver.mesh.nodes_per_inverse_eps = get_number(s["nodes_per_inverse_eps"], "solver.nodes_per_inverse_eps");
    if (s.contains("inner_exponent"))
      c.solver.mesh.inner_exponent = get_number(s["inner_exponent"], "solver.inner_exponent");
  }
  if (j.contains("disc")) {
    const auto& d = j["disc"];
    only_keys(d, "disc", {"radial_nodes", "angular_nodes", "tolerance", "max_iterations"});
    if (d.contains("radial_nodes")) c.disc.radial_nodes = get_int(d["radial_nodes"], "disc.radial_nodes");
    if (d.contains("angular_nodes")) c.disc.angular_nodes = get_int(d["angular_nodes"], "disc.angular_nodes");
    if (d.contains("tolerance")) c.disc.tolerance = get_number(d["tolerance"], "disc.tolerance");
    if (d.contains("max_iterations")) c.disc.max_iterations = get_int(d["max_iterations"], "disc.max_iterations");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    only_keys(s, "sweep", {"epsilons"});
    if (s.contains("epsilons")) {
      if (!s["epsilons"].is_array()) bad("sweep.epsilons", "expected a list of numbers");
      c.epsilons.clear();
      for (std::size_t i = 0; i < s["epsilons"].size(); ++i)
        c.epsilons.push_back(get_number(s["epsilons"][i], "sweep.epsilons[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("epsilon")) c.epsilon = get_number(j["epsilon"], "epsilon");
  if (j.contains("output")) {
    const auto& o = j["output"];
    only_keys(o, "output", {"directory", "svg"});
    if (o.contains("directory")) {
      if (!o["directory"].is_string()) bad("output.directory", "expected a string");
      c.output.directory = o["directory"].get<std::string>();
    }
    if (o.contains("svg")) c.output.svg = get_bool(o["svg"], "output.svg");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const RunConfig& cfg) { return config_to_json(cfg).dump(2); }

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string report_json(const RunConfig& cfg, const SweepReport& rep, const DecayVerdict& verdict) {
  json per = json::array();
  for (const auto& r : rep.records) {
    json checks = json::array();
    for (const auto& c : r.inequalities.checks) checks.push_back(check_json(c));
    per.push_back({{"epsilon", r.epsilon},
                   {"physical_epsilon", r.physical_epsilon},
                   {"outside_regime", r.outside_regime},
                   {"regime", r.outside_regime ? "outside eps<1/8" : "inside eps<1/8"},
                   {"m_half", m_json(r.m_half)},
                   {"m_quarter", m_json(r.m_quarter)},
                   {"inequalities", {{"all_pass", r.inequalities.all_pass()}, {"checks", checks}}},
                   {"psi_sup", r.psi_sup},
                   {"residual_sup", r.residual_sup},
                   {"iterations", r.iterations},
                   {"nodes", r.nodes}});
  }
  json out;
  out["config"] = config_to_json(cfg);
  // Where the report is written does not belong in it.
  out["config"]["output"].erase("directory");
  out["per_epsilon"] = per;
  out["slopes"] = {{"m0_half", rep.slopes}, {"psi_sup", rep.psi_slopes}};
  out["verdicts"] = {{"m0_half", series_json(verdict.m0)},
                     {"psi_sup", series_json(verdict.psi)},
                     {"psi_tracks_m0", verdict.psi_tracks_m0},
                     {"inequalities", inequalities_pass(rep)},
                     {"pass", verdict.pass() && inequalities_pass(rep)}};
  out["invariants"] = rep.invariants ? invariants_to_json(*rep.invariants) : json(nullptr);
  return out.dump(2) + "\n";
}

std::string invariants_json(const InvariantSummary& inv) { return invariants_to_json(inv).dump(2) + "\n"; }

std::string radial_csv(const RadialSolution<Real>& sol) {
  std::string s = "r,u,du,d2u\n";
  for (int k = 0; k <= sol.mesh.n(); ++k)
    s += format_number(to_double(sol.mesh.r(k))) + "," + format_number(to_double(sol.values[k])) + "," +
         format_number(to_double(sol.d1[k])) + "," + format_number(to_double(sol.d2[k])) + "\n";
  return s;
}

std::string disc_csv(const DiscSolution<long double>& sol) {
  std::string s = "r,theta,u\n";
  s += "0,0," + format_number(static_cast<double>(sol.pole)) + "\n";
  for (int k = 1; k <= sol.nr; ++k)
    for (int j = 0; j < sol.ntheta; ++j)
      s += format_number(static_cast<double>(sol.radii[k])) + "," +
           format_number(2 * pi<double>() * j / sol.ntheta) + "," +
           format_number(static_cast<double>(sol.at(k, j))) + "\n";
  return s;
}

std::string m0_csv(const SweepReport& rep) {
  std::string s = "epsilon,physical_epsilon,m0_half,m0_quarter,m3_quarter,psi_sup,residual_sup\n";
  for (const auto& r : rep.records)
    s += format_number(r.epsilon) + "," + format_number(r.physical_epsilon) + "," + format_number(r.m_half.m0) + "," +
         format_number(r.m_quarter.m0) + "," + format_number(r.m_quarter.m3) + "," + format_number(r.psi_sup) +
         "," + format_number(r.residual_sup) + "\n";
  return s;
}

std::string timing_csv(const SweepReport& rep) {
  std::string s = "epsilon,wall_seconds\n";
  for (const auto& r : rep.records) s += format_number(r.epsilon) + "," + format_number(r.wall_seconds) + "\n";
  return s;
}

std::string svg_loglog(const std::string& title, const std::string& ylabel, const std::vector<double>& x,
                       const std::vector<double>& y) {
  const double W = 480, H = 360, L = 70, R = 20, T = 40, B = 50;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << "log10 eps</text>\n"
    << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">log10 " << ylabel << "</text>\n";
  if (lx.size() >= 2) {
    const auto [x0, x1] = std::minmax_element(lx.begin(), lx.end());
    const auto [y0, y1] = std::minmax_element(ly.begin(), ly.end());
    const double xa = *x0, xb = *x1, ya = *y0, yb = *y1 > *y0 ? *y1 : *y0 + 1;
    auto px = [&](double v) { return L + (v - xa) / (xb - xa) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - ya) / (yb - ya) * (H - T - B); };
    o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < lx.size(); ++i) o << (i ? " " : "") << px(lx[i]) << "," << py(ly[i]);
    o << "\"/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i)
      o << "<circle cx=\"" << px(lx[i]) << "\" cy=\"" << py(ly[i]) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    for (double v : {xa, xb})
      o << "<text x=\"" << px(v) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << format_number(std::round(v * 100) / 100) << "</text>\n";
    for (double v : {ya, yb})
      o << "<text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << format_number(std::round(v * 100) / 100) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace hym
