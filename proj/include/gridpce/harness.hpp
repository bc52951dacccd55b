#ifndef GRIDPCE_HARNESS_HPP
#define GRIDPCE_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridpce/design.hpp"
#include "gridpce/models.hpp"
#include "gridpce/postproc.hpp"
#include "gridpce/regression.hpp"

namespace gridpce {

// Protocol of one stability study: replicate PCE fits per (method, N_S)
// cell, aggregated against a Monte Carlo reference.
struct StabilityStudyConfig {
  std::vector<DesignMethod> methods{DesignMethod::LHS, DesignMethod::MmLHS};
  std::vector<int> sample_sizes{20, 30, 40, 50, 60, 70, 80, 90, 100};
  int replicates = 25;
  int pce_degree = 7;
  double pce_qnorm = 1.0;
  int n_candidates = 1000;
  int oracle_samples = 10000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
};

struct StabilityCell {
  DesignMethod method = DesignMethod::LHS;
  int n_samples = 0;
  double mean_of_means = 0.0;
  double std_of_means = 0.0;
  double mean_of_stds = 0.0;
  double std_of_stds = 0.0;
  double err_mean = 0.0;  // |mean_of_means - ref_mean| / |ref_mean|
  double err_std = 0.0;
  int n_failed = 0;  // replicates whose fit failed (excluded from aggregates)
};

struct OracleMoments {
  double mean = 0.0;
  double robust_std_dev = 0.0;
  double se_mean = 0.0;        // Monte Carlo standard error of the mean
  double se_robust_std = 0.0;  // bootstrap standard error of the robust std
  int n = 0;
};

struct StabilityReport {
  std::vector<StabilityCell> cells;  // method-major, then sample size
  OracleMoments reference;

  const StabilityCell* find(DesignMethod method, int n_samples) const;
};

// Plain Monte Carlo reference: mean and robust std of n model draws, with
// standard-error estimates.  Deterministic per seed.
OracleMoments mcs_oracle(const StudyModel& model, int n, std::uint64_t seed, int workers = 0);

// Runs the full stability protocol: per (method, N_S, replicate) builds a
// design, evaluates the model, fits a Hybrid-LARS PCE and extracts its
// moments; aggregates across replicates.  Replicates run concurrently;
// the result is independent of scheduling.
StabilityReport run_study(const StudyModel& model, const StabilityStudyConfig& cfg);

// One design -> evaluate -> fit pass; shared by run_study and the CLI.
PceModel fit_pce_on_design(const StudyModel& model, const ExperimentDesign& design,
                           int degree, double qnorm);

// Evaluates the model on every design row (parallel over rows).
Eigen::VectorXd evaluate_on_design(const StudyModel& model, const ExperimentDesign& design,
                                   int workers = 0);

// Static-partition parallel loop; each index writes only its own slot.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace gridpce

#endif  // GRIDPCE_HARNESS_HPP
