#ifndef GRIDPCE_POSTPROC_HPP
#define GRIDPCE_POSTPROC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gridpce/regression.hpp"

namespace gridpce {

enum class MomentSource { PceAnalytic, McsEmpirical };

std::string to_string(MomentSource s);

// Mean/std summary with the 3-sigma planning bound.
struct MomentReport {
  double mean = 0.0;
  double std_dev = 0.0;
  double three_sigma_lower = 0.0;  // mean - 3*std
  MomentSource source = MomentSource::PceAnalytic;

  static MomentReport from(double mean, double std_dev, MomentSource source);
  nlohmann::ordered_json to_json() const;
};

// Mean of the PCE output: the coefficient of the zero multi-index.
double pce_mean(const PceModel& m);

// Variance of the PCE output: sum of squared non-zero-index coefficients.
double pce_variance(const PceModel& m);

// n surrogate evaluations on fresh Monte Carlo input draws from the
// model's joint input; deterministic per seed.
std::vector<double> surrogate_sample(const PceModel& m, int n, std::uint64_t seed);

// Evaluates the PCE polynomial at one input point.  Builds the
// recurrences on every call; use PceEvaluator for batches.
double evaluate_pce(const PceModel& m, const Eigen::VectorXd& point);

// Reusable evaluator: precomputes per-dimension recurrences once.
class PceEvaluator {
 public:
  explicit PceEvaluator(const PceModel& m);
  double operator()(const Eigen::VectorXd& point) const;

 private:
  const PceModel* model_;
  std::vector<RecurrenceCoeffs> recurrences_;
};

// Median absolute deviation scale estimate,
// normal_consistency ? 1.4826 * mad : mad.  Requires at least 2 values.
double robust_std(const std::vector<double>& data, bool normal_consistency = true);

double median(std::vector<double> data);

}  // namespace gridpce

#endif  // GRIDPCE_POSTPROC_HPP
