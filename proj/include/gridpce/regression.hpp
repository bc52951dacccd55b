#ifndef GRIDPCE_REGRESSION_HPP
#define GRIDPCE_REGRESSION_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gridpce/basis.hpp"
#include "gridpce/design.hpp"
#include "gridpce/marginal.hpp"

namespace gridpce {

struct FitDiagnostics {
  double loo_error = 0.0;        // corrected relative leave-one-out error
  double empirical_error = 0.0;  // relative mean-square training error
  int active_set_size = 0;
  int n_samples = 0;
};

// A fitted PCE: basis, coefficient vector (same length as the basis,
// inactive terms exactly zero), the input model, and fit diagnostics.
struct PceModel {
  BasisSet basis;
  Eigen::VectorXd coefficients;
  JointInput joint;
  FitDiagnostics diagnostics;
  std::uint64_t design_seed = 0;

  nlohmann::ordered_json to_json() const;
  static PceModel from_json(const nlohmann::json& j);
};

// argmin_c ||A c - y||_2 via rank-revealing QR.  Throws SingularityError
// (carrying the numerical rank) when A is column rank deficient, and
// DomainError when rows < cols.
Eigen::VectorXd ols_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

// One step of the least-angle regression path.
struct LarsStep {
  std::vector<int> active;       // column indices into A, intercept first
  Eigen::VectorXd coefficients;  // full-length snapshot, inactive entries zero
};

// Classic LARS path with the intercept column always active and excluded
// from standardization.  Step k adds the column most correlated with the
// current residual; the path ends when correlations vanish, the active
// set reaches min(N-1, P-1) non-intercept columns, or the equiangular
// system degenerates.  The first emitted step is the intercept-only model.
std::vector<LarsStep> lars_path(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                int intercept_col = 0);

// Corrected relative leave-one-out error of `coeffs` on the active design
// matrix:
//
//   eps = [ (1/N) sum_i ((y_i - yhat_i) / (1 - h_i))^2 / Var(y) ] * T
//   T   = N/(N-P) * (1 + tr((A^T A / N)^{-1}) / N)
//
// h_i are hat-matrix leverages of A.  Throws LeverageSaturationError when
// any h_i reaches 1.  Var(y) = 0 returns 0 if residuals vanish, +inf
// otherwise.
double loo_error(const Eigen::MatrixXd& a_active, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& coeffs);

struct HybridLarsOptions {
  // Stop scanning the path once the LOO score has increased this many
  // consecutive steps.
  int early_stop_rises = 2;
  // Optional accuracy target: stop at the first model whose LOO error is
  // below this value (<= 0 disables; default is pure minimisation).
  double target_loo = 0.0;
};

// Hybrid-LARS: LARS selects candidate active sets, each is refit by OLS
// and scored by corrected leave-one-out error; the best-scoring model is
// returned with inactive coefficients exactly zero.
PceModel hybrid_lars_fit(const ExperimentDesign& x, const Eigen::VectorXd& y,
                         const BasisSet& basis,
                         const std::vector<RecurrenceCoeffs>& recurrences,
                         const HybridLarsOptions& options = {});

}  // namespace gridpce

#endif  // GRIDPCE_REGRESSION_HPP
