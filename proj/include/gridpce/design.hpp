#ifndef GRIDPCE_DESIGN_HPP
#define GRIDPCE_DESIGN_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "gridpce/marginal.hpp"

namespace gridpce {

enum class DesignMethod { MCS, LHS, MmLHS };

std::string to_string(DesignMethod m);
DesignMethod design_method_from_string(const std::string& name);

// An experiment: N_S x M input sample matrix with provenance.  `samples`
// holds physical-space points (hours); `quantiles` the same points in
// quantile space [0,1]^M, which is where pairwise distances are measured.
struct ExperimentDesign {
  Eigen::MatrixXd samples;
  Eigen::MatrixXd quantiles;
  JointInput joint;
  DesignMethod method = DesignMethod::MCS;
  std::uint64_t seed = 0;
  int n_candidates = 0;  // MmLHS only

  int n() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }

  nlohmann::ordered_json metadata_json() const;
};

// n independent draws, column i distributed per marginal i.
ExperimentDesign mcs_design(const JointInput& joint, int n, std::uint64_t seed);

// Latin hypercube: in quantile space each column has exactly one point in
// each stratum [i/n, (i+1)/n), with an independent random permutation per
// column and uniform jitter within strata.
ExperimentDesign lhs_design(const JointInput& joint, int n, std::uint64_t seed);

// Best-of-N_C candidate LHS designs under the maximin criterion, measured
// in quantile space.  Ties break to the lowest candidate index.  The
// candidate pool is reproducible: candidate i is lhs_design with seed
// mmlhs_candidate_seed(seed, i).
ExperimentDesign mmlhs_design(const JointInput& joint, int n, int n_candidates,
                              std::uint64_t seed);

std::uint64_t mmlhs_candidate_seed(std::uint64_t master_seed, int candidate_index);

// Minimum Euclidean distance over all unordered point pairs, in quantile
// space.  Throws DomainError for designs with fewer than two points.
double min_pairwise_distance(const ExperimentDesign& d);

}  // namespace gridpce

#endif  // GRIDPCE_DESIGN_HPP
