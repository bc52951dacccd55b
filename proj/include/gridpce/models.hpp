#ifndef GRIDPCE_MODELS_HPP
#define GRIDPCE_MODELS_HPP

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridpce/cascade.hpp"
#include "gridpce/marginal.hpp"

namespace gridpce {

// A stochastic simulator for the harness: a deterministic map evaluated
// on random inputs described by a joint distribution.
class StudyModel {
 public:
  virtual ~StudyModel() = default;
  virtual const JointInput& joint() const = 0;
  virtual double evaluate(const Eigen::VectorXd& input) const = 0;
  virtual std::string name() const = 0;
  int dim() const { return joint().dim(); }
};

// y = sum_k c_k * prod_i x_i^e_{k,i}; analytic mean/variance via Gauss
// quadrature are exposed for oracle-free checks.
class SparsePolynomialModel : public StudyModel {
 public:
  struct Term {
    double coefficient;
    std::vector<int> exponents;
  };

  SparsePolynomialModel(JointInput joint, std::vector<Term> terms);

  const JointInput& joint() const override { return joint_; }
  double evaluate(const Eigen::VectorXd& input) const override;
  std::string name() const override { return "sparse-poly"; }

 private:
  JointInput joint_;
  std::vector<Term> terms_;
};

// Ishigami function, f = sin x1 + a sin^2 x2 + b x3^4 sin x1 on
// uniform(-pi, pi)^3.
class IshigamiModel : public StudyModel {
 public:
  explicit IshigamiModel(double a = 7.0, double b = 0.1);

  const JointInput& joint() const override { return joint_; }
  double evaluate(const Eigen::VectorXd& input) const override;
  std::string name() const override { return "ishigami"; }

  double analytic_mean() const;
  double analytic_variance() const;

 private:
  double a_, b_;
  JointInput joint_;
};

// The grid resilience simulator: inputs are exposed-branch failure times,
// output is phi_ls.
class GridStudyModel : public StudyModel {
 public:
  GridStudyModel(NetworkCase net, FragilityCurve fragility, WeatherEvent weather);

  const JointInput& joint() const override { return joint_; }
  double evaluate(const Eigen::VectorXd& tau) const override;
  std::string name() const override { return "grid"; }

  const NetworkCase& network() const { return net_; }
  const WeatherEvent& weather() const { return weather_; }
  CascadeOutcome simulate(const Eigen::VectorXd& tau) const;

 private:
  NetworkCase net_;
  FragilityCurve fragility_;
  WeatherEvent weather_;
  JointInput joint_;
};

}  // namespace gridpce

#endif  // GRIDPCE_MODELS_HPP
