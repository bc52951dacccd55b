#include "gridpce/postproc.hpp"

#include <algorithm>
#include <cmath>

#include "gridpce/errors.hpp"
#include "gridpce/rng.hpp"

namespace gridpce {

std::string to_string(MomentSource s) {
  return s == MomentSource::PceAnalytic ? "pce_analytic" : "mcs_empirical";
}

MomentReport MomentReport::from(double mean, double std_dev, MomentSource source) {
  if (!(std_dev >= 0.0)) throw DomainError("MomentReport requires std >= 0");
  MomentReport r;
  r.mean = mean;
  r.std_dev = std_dev;
  r.three_sigma_lower = mean - 3.0 * std_dev;
  r.source = source;
  return r;
}

nlohmann::ordered_json MomentReport::to_json() const {
  return {{"mean", mean},
          {"std", std_dev},
          {"three_sigma_lower", three_sigma_lower},
          {"source", to_string(source)}};
}

double pce_mean(const PceModel& m) {
  if (m.coefficients.size() < 1) throw DomainError("pce_mean: empty model");
  return m.coefficients[0];
}

double pce_variance(const PceModel& m) {
  if (m.coefficients.size() != m.basis.size())
    throw DomainError("pce_variance: coefficient/basis size mismatch");
  double var = 0.0;
  for (int j = 1; j < m.basis.size(); ++j) var += m.coefficients[j] * m.coefficients[j];
  return var;
}

PceEvaluator::PceEvaluator(const PceModel& m) : model_(&m) {
  recurrences_.reserve(m.joint.marginals.size());
  for (const auto& marg : m.joint.marginals)
    recurrences_.push_back(stieltjes_recurrence(marg, m.basis.p));
}

double PceEvaluator::operator()(const Eigen::VectorXd& point) const {
  return eval_multivariate(model_->basis, recurrences_, point).dot(model_->coefficients);
}

double evaluate_pce(const PceModel& m, const Eigen::VectorXd& point) {
  return PceEvaluator(m)(point);
}

std::vector<double> surrogate_sample(const PceModel& m, int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("surrogate_sample requires n >= 1");
  const int dim = m.joint.dim();
  if (dim != m.basis.dim()) throw DomainError("surrogate_sample: joint/basis dimension mismatch");

  std::vector<RecurrenceCoeffs> recurrences;
  recurrences.reserve(static_cast<std::size_t>(dim));
  for (const auto& marg : m.joint.marginals)
    recurrences.push_back(stieltjes_recurrence(marg, m.basis.p));

  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  Eigen::VectorXd point(dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j)
      point[j] = m.joint.marginals[static_cast<std::size_t>(j)].quantile(rng.uniform_open01());
    out[static_cast<std::size_t>(i)] = eval_multivariate(m.basis, recurrences, point).dot(m.coefficients);
  }
  return out;
}

double median(std::vector<double> data) {
  if (data.empty()) throw DomainError("median of empty data");
  const auto mid = data.size() / 2;
  std::nth_element(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(mid), data.end());
  double m = data[mid];
  if (data.size() % 2 == 0) {
    const auto lower = std::max_element(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + *lower);
  }
  return m;
}

double robust_std(const std::vector<double>& data, bool normal_consistency) {
  if (data.size() < 2) throw DomainError("robust_std requires at least 2 values");
  const double med = median(data);
  std::vector<double> dev(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::abs(data[i] - med);
  const double mad = median(std::move(dev));
  return normal_consistency ? 1.4826 * mad : mad;
}

}  // namespace gridpce
