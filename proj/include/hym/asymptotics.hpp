#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "hym/invariants.hpp"
#include "hym/radial_profile.hpp"

namespace hym {

struct MValues {
  double t = 1;
  double m0 = 0, m1 = 0, m2 = 0, m3 = 0;
};

template <typename Scalar>
MValues to_values(const MReport<Scalar>& m) {
  return {m.t, to_double(m.m0), to_double(m.m1), to_double(m.m2), to_double(m.m3)};
}

/// One epsilon of a sweep. epsilon is the rescaled parameter handed to the
/// radial solver; physical_epsilon is the one entering the metric.
struct SweepRecord {
  double epsilon = 0;
  double physical_epsilon = 0;
  MValues m_half, m_quarter;
  InequalityReport inequalities;
  double psi_sup = 0;
  double residual_sup = 0;
  int iterations = 0;
  int nodes = 0;
  bool outside_regime = false;
  /// Kept out of serialized reports so they stay reproducible.
  double wall_seconds = 0;
};

struct InvariantSummary {
  double epsilon = 0;
  double trace_sup = 0;
  double c1_total = 0;
  FluxRecord flux;
  FluxRecord flux_singular;
};

struct SweepReport {
  GeometryConfig geometry;
  RadialSolverConfig solver;
  std::vector<double> epsilons;
  std::vector<SweepRecord> records;
  /// Local log-log slopes of M0(1/2) and sup|psi| between consecutive epsilons.
  std::vector<double> slopes;
  std::vector<double> psi_slopes;
  std::optional<InvariantSummary> invariants;
};

/// A solve failed mid-sweep; partial() holds the records finished so far.
class SweepError : public SolverError {
 public:
  SweepError(const std::string& what, SweepReport partial) : SolverError(what), partial_(std::move(partial)) {}
  const SweepReport& partial() const { return partial_; }

 private:
  SweepReport partial_;
};

inline double log_slope(double e0, double e1, double y0, double y1) {
  return std::log(y1 / y0) / std::log(e1 / e0);
}

inline std::vector<double> local_slopes(const std::vector<double>& eps, const std::vector<double>& y) {
  std::vector<double> s;
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) s.push_back(log_slope(eps[i], eps[i + 1], y[i], y[i + 1]));
  return s;
}

/// Sorted descending, distinct, each in (0, 1/2), at least two entries.
inline std::vector<double> validate_eps_list(std::vector<double> eps) {
  if (eps.size() < 2) throw ValidationError("sweep: need >= 2 epsilons for slopes");
  for (double e : eps)
    if (!(e > 0 && e < 0.5)) throw ValidationError("sweep: epsilon " + std::to_string(e) + " outside (0, 1/2)");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end()) throw ValidationError("sweep: repeated epsilon");
  return eps;
}

inline SweepRecord make_record(const RadialSolution<Real>& sol, const GeometryConfig& g) {
  SweepRecord rec;
  rec.epsilon = sol.epsilon;
  rec.m_half = to_values(m_functions(sol, 0.5));
  rec.m_quarter = to_values(m_functions(sol, 0.25));
  rec.inequalities = verify_inequalities(sol);
  rec.residual_sup = to_double(sol.residual_sup);
  rec.iterations = sol.iterations;
  rec.nodes = sol.mesh.n();
  rec.outside_regime = sol.outside_regime();
  const GluedMetric m(g, rescale_to_physical(sol, g.r0));
  rec.physical_epsilon = m.epsilon();
  rec.psi_sup = m.psi_sup();
  return rec;
}

/// Trace identity, c1 total and flux balance on the glued metric.
inline InvariantSummary evaluate_invariants(const GluedMetric& m) {
  InvariantSummary s;
  s.epsilon = m.profile().epsilon_bar();
  const auto grids = atlas_grids(m);
  for (const auto& grid : grids)
    if (m.is_branch(grid.chart())) s.trace_sup = std::max(s.trace_sup, trace_identity_check(m, grid).sup_error);
  s.c1_total = c1_vanishing_check(m, grids);
  const double r0 = m.geometry().r0;
  s.flux = flux_vs_volume(grids[1], glued_phi(m), r0);
  s.flux_singular = flux_vs_volume(grids[1], singular_phi(), r0);
  return s;
}

/// Solves every epsilon concurrently, then assembles records in descending
/// epsilon. Invariants are evaluated at the largest epsilon inside the
/// regime eps < 1/8, else at the smallest one.
inline SweepReport sweep(const std::vector<double>& eps_list, const GeometryConfig& geometry,
                         const RadialSolverConfig& cfg = {}) {
  geometry.validate();
  SweepReport rep;
  rep.geometry = geometry;
  rep.solver = cfg;
  rep.epsilons = validate_eps_list(eps_list);
  struct Outcome {
    std::optional<SweepRecord> record;
    std::exception_ptr error;
  };
  std::vector<std::future<Outcome>> jobs;
  for (double e : rep.epsilons)
    jobs.push_back(std::async(std::launch::async, [e, &geometry, &cfg] {
      Outcome o;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        o.record = make_record(solve_radial(e, cfg), geometry);
        o.record->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        o.error = std::current_exception();
      }
      return o;
    }));
  std::vector<Outcome> outcomes;
  for (auto& j : jobs) outcomes.push_back(j.get());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].error) {
      std::string what = "unknown failure";
      try {
        std::rethrow_exception(outcomes[i].error);
      } catch (const std::exception& ex) {
        what = ex.what();
      }
      for (std::size_t k = i + 1; k < outcomes.size(); ++k)
        if (outcomes[k].record) rep.records.push_back(*outcomes[k].record);
      throw SweepError("sweep: solve at eps = " + std::to_string(rep.epsilons[i]) + " failed: " + what,
                       std::move(rep));
    }
    rep.records.push_back(*outcomes[i].record);
  }
  std::vector<double> m0, psi;
  for (const auto& r : rep.records) {
    m0.push_back(r.m_half.m0);
    psi.push_back(r.psi_sup);
  }
  rep.slopes = local_slopes(rep.epsilons, m0);
  rep.psi_slopes = local_slopes(rep.epsilons, psi);

  std::size_t pick = rep.records.size() - 1;
  for (std::size_t i = 0; i < rep.records.size(); ++i)
    if (!rep.records[i].outside_regime) {
      pick = i;
      break;
    }
  const GluedMetric m(geometry, rescale_to_physical(solve_radial(rep.epsilons[pick], cfg), geometry.r0));
  rep.invariants = evaluate_invariants(m);
  return rep;
}

/// Slope analysis of one epsilon-indexed series.
struct SeriesVerdict {
  std::vector<double> slopes;
  bool monotone = false;            ///< values decrease with epsilon
  bool slopes_increasing = false;
  bool final_slope_above_3 = false;
  bool finite = false;
  bool pass = false;
  std::string reason;
};

inline SeriesVerdict fit_series(const std::vector<double>& eps, const std::vector<double>& values) {
  if (eps.size() != values.size()) throw ValidationError("fit_superpolynomial: length mismatch");
  if (eps.size() < 3) throw ValidationError("fit_superpolynomial: need >= 3 epsilons");
  SeriesVerdict v;
  v.finite = std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x) && x > 0; });
  v.monotone = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (!(values[i + 1] <= values[i])) v.monotone = false;
  if (v.finite) v.slopes = local_slopes(eps, values);
  v.slopes_increasing = v.finite;
  for (std::size_t i = 0; i + 1 < v.slopes.size(); ++i)
    if (!(v.slopes[i + 1] > v.slopes[i])) v.slopes_increasing = false;
  v.final_slope_above_3 = v.finite && v.slopes.back() > 3;
  v.pass = v.finite && v.monotone && v.slopes_increasing && v.final_slope_above_3;
  if (!v.finite) v.reason = "non-positive or non-finite values";
  else if (!v.monotone) v.reason = "values not monotone in epsilon";
  else if (!v.slopes_increasing) v.reason = "slopes not strictly increasing";
  else if (!v.final_slope_above_3) v.reason = "final slope <= 3";
  return v;
}

struct DecayVerdict {
  SeriesVerdict m0;
  SeriesVerdict psi;
  /// psi slope_i > M0 slope_i - 1 for every i (1/eps prefactor in psi).
  bool psi_tracks_m0 = false;
  bool pass() const { return m0.pass && psi.pass; }
};

inline DecayVerdict fit_superpolynomial(const SweepReport& rep) {
  std::vector<double> m0, psi;
  for (const auto& r : rep.records) {
    m0.push_back(r.m_half.m0);
    psi.push_back(r.psi_sup);
  }
  DecayVerdict v;
  v.m0 = fit_series(rep.epsilons, m0);
  v.psi = fit_series(rep.epsilons, psi);
  v.psi_tracks_m0 = v.m0.slopes.size() == v.psi.slopes.size() && !v.m0.slopes.empty();
  for (std::size_t i = 0; i < v.m0.slopes.size() && i < v.psi.slopes.size(); ++i)
    if (!(v.psi.slopes[i] > v.m0.slopes[i] - 1)) v.psi_tracks_m0 = false;
  return v;
}

/// Every record's inequality map passes (out-of-regime records excluded).
inline bool inequalities_pass(const SweepReport& rep) {
  return std::all_of(rep.records.begin(), rep.records.end(),
                     [](const SweepRecord& r) { return r.outside_regime || r.inequalities.all_pass(); });
}

}  // namespace hym
