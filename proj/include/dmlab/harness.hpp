// Seeded verification campaigns for the operator inequalities: hypothesis
// checks, per-resolution ratio statistics, five-space norm comparisons, Fejér
// convergence tables, and CSV/JSON report emission.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dmlab/grid.hpp"
#include "dmlab/musielak.hpp"

namespace dmlab {

struct ExperimentConfig {
  std::string name;                      // campaign, see verify_names()
  std::string phi_spec = "power:p=2";
  std::vector<int> resolutions = {6, 8, 10};
  int trials = 100;
  std::uint64_t seed = 1;
  double r = 2.0;         // vector/aggregation exponent where the campaign uses one
  double t_star = 1.0;    // weighted-stopping evaluation point (atoms campaigns)
  std::string kind = "s"; // decomposition kind (atoms campaigns)
  std::string law = "mixed";  // input law, or "mixed" to rotate all four
  bool strict = true;         // reject on hypothesis failure instead of annotating
  double stability_factor = 4.0;  // allowed spread of max ratios across resolutions
};

/// Outcome of the campaign's theorem-hypothesis sampling.
struct HypothesisReport {
  bool checked = false;  // false when the campaign has nothing to verify
  bool pass = true;
  std::string detail;    // summary of the checks and sampled constants
};

struct ResolutionStats {
  int resolution = 0;
  int trials = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  int worst_index = -1;  // trial lane of the max ratio, -1 if none counted
};

struct VerificationReport {
  std::string name;
  std::string phi_spec;
  std::uint64_t seed = 0;
  HypothesisReport hypothesis;
  bool hypothesis_rejected = false;  // strict mode stopped before any trial
  std::vector<ResolutionStats> rows;
  double stability_factor = 4.0;
  double stability_spread = 0.0;     // max over rows / min over rows of max_ratio
  bool has_ceiling = false;
  double ceiling = 0.0;              // only meaningful when has_ceiling
  bool pass = false;
};

/// Registered campaign names.
const std::vector<std::string>& verify_names();

/// Run one campaign: per resolution, `trials` seeded random inputs, each
/// reduced to one lhs/rhs norm ratio. Deterministic in (seed, config).
VerificationReport verify(const ExperimentConfig& config);

/// CSV with header inequality,phi_spec,resolution,trials,max_ratio,
/// median_ratio,worst_seed_index,pass — ratios %.12g, LF endings, phi quoted.
std::string report_csv(const VerificationReport& report);
void write_report_csv(const VerificationReport& report, const std::string& path);

/// Full JSON mirror including the hypothesis sub-report.
std::string report_json(const VerificationReport& report);

/// The five equivalent martingale Hardy quasi-norms of one input and their
/// pairwise ratios; defined=false (ratios zeroed) for the zero martingale.
struct FiveSpaceReport {
  std::array<std::string, 5> names;
  std::array<double, 5> norms{};
  std::array<std::array<double, 5>, 5> ratios{};
  bool defined = false;
};
FiveSpaceReport five_space_report(const DyadicMartingale& m, const MusielakFunction& phi);

/// One row of the Fejér/partial-sum convergence table; the final row reports
/// the analytic n -> infinity limit (exact zeros for finite spectra).
struct ConvergenceRow {
  std::int64_t n = 0;
  double fejer_error = 0.0;
  double partial_error = 0.0;
  bool analytic_limit = false;
};

/// || sigma_n f - f ||_phi and || s_n f - f ||_phi along a sorted schedule,
/// plus the analytic-limit row. Throws if the schedule is unsorted or empty.
std::vector<ConvergenceRow> fejer_convergence(const SampledFunction& f,
                                              const MusielakFunction& phi,
                                              const std::vector<std::int64_t>& schedule);

}  // namespace dmlab
