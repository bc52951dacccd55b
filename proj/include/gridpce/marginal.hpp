#ifndef GRIDPCE_MARGINAL_HPP
#define GRIDPCE_MARGINAL_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gridpce {

enum class MarginalKind { Uniform, Gaussian, DiscreteHourly, Empirical };

std::string to_string(MarginalKind kind);
MarginalKind marginal_kind_from_string(const std::string& name);

// One failure-time marginal.  Immutable after construction; all queries
// are pure.  Discrete kinds (DiscreteHourly, Empirical) are finite atom
// measures; the atom lists are kept sorted by value.
class Marginal {
 public:
  static Marginal uniform(double lo, double hi);
  static Marginal gaussian(double mean, double std_dev);
  // Atoms at the given hours with the given probability masses.  Masses
  // must sum to 1 within 1e-10.
  static Marginal discrete_hourly(std::vector<double> hours, std::vector<double> mass);
  // Sorted support values with probability weights summing to 1.
  static Marginal empirical(std::vector<double> values, std::vector<double> weights);

  MarginalKind kind() const { return kind_; }
  bool discrete() const {
    return kind_ == MarginalKind::DiscreteHourly || kind_ == MarginalKind::Empirical;
  }

  // Closed support interval; (-inf, inf) for Gaussian.
  std::pair<double, double> support() const;

  // Inverse CDF.  For discrete kinds returns the smallest atom whose
  // cumulative mass reaches u.  Throws DomainError outside [0, 1].
  double quantile(double u) const;

  double cdf(double x) const;

  // Density for continuous kinds; probability mass of the atom equal to x
  // (within a tiny tolerance) for discrete kinds.
  double pdf(double x) const;

  const std::vector<double>& atom_values() const { return atom_values_; }
  const std::vector<double>& atom_weights() const { return atom_weights_; }

  // Parameters for the continuous kinds: {lo, hi} or {mean, std}.
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  nlohmann::ordered_json to_json() const;
  static Marginal from_json(const nlohmann::json& j);

  bool operator==(const Marginal& other) const = default;

 private:
  Marginal() = default;

  MarginalKind kind_ = MarginalKind::Uniform;
  double a_ = 0.0;  // lo / mean
  double b_ = 1.0;  // hi / std
  std::vector<double> atom_values_;
  std::vector<double> atom_weights_;
};

// Ordered list of mutually independent marginals; dimension M of the
// random input vector.
struct JointInput {
  std::vector<Marginal> marginals;

  JointInput() = default;
  explicit JointInput(std::vector<Marginal> m) : marginals(std::move(m)) {}

  int dim() const { return static_cast<int>(marginals.size()); }

  nlohmann::ordered_json to_json() const;
  static JointInput from_json(const nlohmann::json& j);
};

// Standard normal CDF and inverse (Wichura's AS241, double precision).
double normal_cdf(double z);
double normal_quantile(double u);

}  // namespace gridpce

#endif  // GRIDPCE_MARGINAL_HPP
