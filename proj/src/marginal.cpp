#include "gridpce/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridpce/errors.hpp"

namespace gridpce {

namespace {

constexpr double kMassTol = 1e-10;

void check_atoms(const std::vector<double>& values, const std::vector<double>& weights,
                 const char* what) {
  if (values.empty() || values.size() != weights.size())
    throw DomainError(std::string(what) + ": atom value/weight lists must be non-empty and equal length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw DomainError(std::string(what) + ": non-finite atom value");
    if (!(weights[i] >= 0.0)) throw DomainError(std::string(what) + ": negative atom weight");
    if (i > 0 && values[i] < values[i - 1])
      throw DomainError(std::string(what) + ": atom values must be sorted ascending");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTol)
    throw DomainError(std::string(what) + ": masses sum to " + std::to_string(total) + ", expected 1");
}

}  // namespace

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::Uniform: return "uniform";
    case MarginalKind::Gaussian: return "gaussian";
    case MarginalKind::DiscreteHourly: return "discrete_hourly";
    case MarginalKind::Empirical: return "empirical";
  }
  return "unknown";
}

MarginalKind marginal_kind_from_string(const std::string& name) {
  if (name == "uniform") return MarginalKind::Uniform;
  if (name == "gaussian") return MarginalKind::Gaussian;
  if (name == "discrete_hourly") return MarginalKind::DiscreteHourly;
  if (name == "empirical") return MarginalKind::Empirical;
  throw DomainError("unknown marginal kind '" + name + "'");
}

Marginal Marginal::uniform(double lo, double hi) {
  if (!(lo < hi)) throw DomainError("uniform marginal requires lo < hi");
  Marginal m;
  m.kind_ = MarginalKind::Uniform;
  m.a_ = lo;
  m.b_ = hi;
  return m;
}

Marginal Marginal::gaussian(double mean, double std_dev) {
  if (!(std_dev > 0.0)) throw DomainError("gaussian marginal requires std > 0");
  Marginal m;
  m.kind_ = MarginalKind::Gaussian;
  m.a_ = mean;
  m.b_ = std_dev;
  return m;
}

Marginal Marginal::discrete_hourly(std::vector<double> hours, std::vector<double> mass) {
  check_atoms(hours, mass, "discrete_hourly");
  Marginal m;
  m.kind_ = MarginalKind::DiscreteHourly;
  m.atom_values_ = std::move(hours);
  m.atom_weights_ = std::move(mass);
  m.a_ = m.atom_values_.front();
  m.b_ = m.atom_values_.back();
  return m;
}

Marginal Marginal::empirical(std::vector<double> values, std::vector<double> weights) {
  check_atoms(values, weights, "empirical");
  Marginal m;
  m.kind_ = MarginalKind::Empirical;
  m.atom_values_ = std::move(values);
  m.atom_weights_ = std::move(weights);
  m.a_ = m.atom_values_.front();
  m.b_ = m.atom_values_.back();
  return m;
}

std::pair<double, double> Marginal::support() const {
  if (kind_ == MarginalKind::Gaussian) {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return {a_, b_};
}

double Marginal::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0, 1]");
  switch (kind_) {
    case MarginalKind::Uniform:
      return a_ + u * (b_ - a_);
    case MarginalKind::Gaussian:
      return a_ + b_ * normal_quantile(u);
    case MarginalKind::DiscreteHourly:
    case MarginalKind::Empirical: {
      double cum = 0.0;
      for (std::size_t i = 0; i < atom_values_.size(); ++i) {
        cum += atom_weights_[i];
        if (cum >= u) return atom_values_[i];
      }
      return atom_values_.back();  // u within rounding of 1
    }
  }
  return 0.0;
}

double Marginal::cdf(double x) const {
  switch (kind_) {
    case MarginalKind::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case MarginalKind::Gaussian:
      return normal_cdf((x - a_) / b_);
    case MarginalKind::DiscreteHourly:
    case MarginalKind::Empirical: {
      double cum = 0.0;
      for (std::size_t i = 0; i < atom_values_.size() && atom_values_[i] <= x; ++i)
        cum += atom_weights_[i];
      return cum;
    }
  }
  return 0.0;
}

double Marginal::pdf(double x) const {
  switch (kind_) {
    case MarginalKind::Uniform:
      return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case MarginalKind::Gaussian: {
      const double z = (x - a_) / b_;
      return std::exp(-0.5 * z * z) / (b_ * std::sqrt(2.0 * M_PI));
    }
    case MarginalKind::DiscreteHourly:
    case MarginalKind::Empirical: {
      const double tol = 1e-9 * std::max(1.0, std::abs(x));
      for (std::size_t i = 0; i < atom_values_.size(); ++i)
        if (std::abs(atom_values_[i] - x) <= tol) return atom_weights_[i];
      return 0.0;
    }
  }
  return 0.0;
}

nlohmann::ordered_json Marginal::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind_);
  nlohmann::ordered_json params;
  switch (kind_) {
    case MarginalKind::Uniform:
      params["lo"] = a_;
      params["hi"] = b_;
      break;
    case MarginalKind::Gaussian:
      params["mean"] = a_;
      params["std"] = b_;
      break;
    case MarginalKind::DiscreteHourly:
      params["hours"] = atom_values_;
      params["mass"] = atom_weights_;
      break;
    case MarginalKind::Empirical:
      params["values"] = atom_values_;
      params["weights"] = atom_weights_;
      break;
  }
  j["params"] = params;
  if (kind_ == MarginalKind::Gaussian) {
    j["support"] = nullptr;  // unbounded
  } else {
    j["support"] = {a_, b_};
  }
  return j;
}

Marginal Marginal::from_json(const nlohmann::json& j) {
  const auto kind = marginal_kind_from_string(j.at("kind").get<std::string>());
  const auto& p = j.at("params");
  switch (kind) {
    case MarginalKind::Uniform:
      return uniform(p.at("lo").get<double>(), p.at("hi").get<double>());
    case MarginalKind::Gaussian:
      return gaussian(p.at("mean").get<double>(), p.at("std").get<double>());
    case MarginalKind::DiscreteHourly:
      return discrete_hourly(p.at("hours").get<std::vector<double>>(),
                             p.at("mass").get<std::vector<double>>());
    case MarginalKind::Empirical:
      return empirical(p.at("values").get<std::vector<double>>(),
                       p.at("weights").get<std::vector<double>>());
  }
  throw DomainError("unreachable marginal kind");
}

nlohmann::ordered_json JointInput::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& m : marginals) arr.push_back(m.to_json());
  return arr;
}

JointInput JointInput::from_json(const nlohmann::json& j) {
  JointInput joint;
  for (const auto& item : j) joint.marginals.push_back(Marginal::from_json(item));
  return joint;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// AS241 algorithm PPND16: inverse standard normal, ~1 ulp in double.
double normal_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("normal_quantile argument outside [0, 1]");
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return std::numeric_limits<double>::infinity();

  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }

  double r = (q < 0.0) ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -value : value;
}

}  // namespace gridpce
