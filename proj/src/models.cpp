#include "gridpce/models.hpp"

#include <cmath>

#include "gridpce/errors.hpp"

namespace gridpce {

SparsePolynomialModel::SparsePolynomialModel(JointInput joint, std::vector<Term> terms)
    : joint_(std::move(joint)), terms_(std::move(terms)) {
  for (const auto& term : terms_)
    if (static_cast<int>(term.exponents.size()) != joint_.dim())
      throw DomainError("sparse polynomial term dimension mismatch");
}

double SparsePolynomialModel::evaluate(const Eigen::VectorXd& input) const {
  if (input.size() != joint_.dim()) throw DomainError("sparse polynomial input dimension mismatch");
  double total = 0.0;
  for (const auto& term : terms_) {
    double prod = term.coefficient;
    for (int d = 0; d < joint_.dim(); ++d) {
      const int e = term.exponents[static_cast<std::size_t>(d)];
      for (int k = 0; k < e; ++k) prod *= input[d];
    }
    total += prod;
  }
  return total;
}

IshigamiModel::IshigamiModel(double a, double b) : a_(a), b_(b) {
  joint_.marginals = {Marginal::uniform(-M_PI, M_PI), Marginal::uniform(-M_PI, M_PI),
                      Marginal::uniform(-M_PI, M_PI)};
}

double IshigamiModel::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != 3) throw DomainError("ishigami input must have dimension 3");
  const double s1 = std::sin(x[0]);
  return s1 + a_ * std::sin(x[1]) * std::sin(x[1]) + b_ * std::pow(x[2], 4) * s1;
}

double IshigamiModel::analytic_mean() const { return a_ / 2.0; }

double IshigamiModel::analytic_variance() const {
  const double pi4 = std::pow(M_PI, 4);
  const double pi8 = pi4 * pi4;
  return a_ * a_ / 8.0 + b_ * pi4 / 5.0 + b_ * b_ * pi8 / 18.0 + 0.5;
}

GridStudyModel::GridStudyModel(NetworkCase net, FragilityCurve fragility, WeatherEvent weather)
    : net_(std::move(net)), fragility_(std::move(fragility)), weather_(std::move(weather)) {
  for (int id : weather_.exposed_branches) {
    bool found = false;
    for (const auto& br : net_.branches) found = found || br.id == id;
    if (!found)
      throw DomainError("exposed branch id " + std::to_string(id) + " not present in the case");
  }
  joint_ = failure_time_joint(fragility_, weather_);
}

CascadeOutcome GridStudyModel::simulate(const Eigen::VectorXd& tau) const {
  return simulate_event(net_, tau, weather_);
}

double GridStudyModel::evaluate(const Eigen::VectorXd& tau) const {
  return simulate(tau).phi_ls;
}

}  // namespace gridpce
