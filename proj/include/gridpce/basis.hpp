#ifndef GRIDPCE_BASIS_HPP
#define GRIDPCE_BASIS_HPP

#include <vector>

#include <Eigen/Dense>

#include "gridpce/design.hpp"
#include "gridpce/orthopoly.hpp"

namespace gridpce {

// Multi-index of per-dimension polynomial degrees, length M.
using MultiIndex = std::vector<int>;

// Truncated multivariate basis: the multi-indices satisfying the q-norm
// bound (sum_i alpha_i^q)^(1/q) <= p, ordered by total degree then
// descending lexicographically.  The zero index is always first.
struct BasisSet {
  std::vector<MultiIndex> indices;
  int p = 0;
  double q = 1.0;

  int size() const { return static_cast<int>(indices.size()); }
  int dim() const { return indices.empty() ? 0 : static_cast<int>(indices.front().size()); }

  nlohmann::ordered_json to_json() const;
  static BasisSet from_json(const nlohmann::json& j);
};

BasisSet qnorm_truncation(int dim, int p, double q);

// Entry j is prod_i psi_{alpha_i}^{(i)}(point_i) for multi-index j.
Eigen::VectorXd eval_multivariate(const BasisSet& bs,
                                  const std::vector<RecurrenceCoeffs>& recurrences,
                                  const Eigen::VectorXd& point);

// Row i is eval_multivariate at design sample i; column 0 is all ones.
Eigen::MatrixXd design_matrix(const BasisSet& bs,
                              const std::vector<RecurrenceCoeffs>& recurrences,
                              const ExperimentDesign& x);

// Same, for a raw sample matrix (rows are points).
Eigen::MatrixXd design_matrix(const BasisSet& bs,
                              const std::vector<RecurrenceCoeffs>& recurrences,
                              const Eigen::MatrixXd& points);

}  // namespace gridpce

#endif  // GRIDPCE_BASIS_HPP
