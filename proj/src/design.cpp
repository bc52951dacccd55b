#include "gridpce/design.hpp"

#include <cmath>
#include <limits>

#include "gridpce/errors.hpp"
#include "gridpce/rng.hpp"

namespace gridpce {

std::string to_string(DesignMethod m) {
  switch (m) {
    case DesignMethod::MCS: return "mcs";
    case DesignMethod::LHS: return "lhs";
    case DesignMethod::MmLHS: return "mmlhs";
  }
  return "unknown";
}

DesignMethod design_method_from_string(const std::string& name) {
  if (name == "mcs") return DesignMethod::MCS;
  if (name == "lhs") return DesignMethod::LHS;
  if (name == "mmlhs") return DesignMethod::MmLHS;
  throw DomainError("unknown design method '" + name + "'");
}

nlohmann::ordered_json ExperimentDesign::metadata_json() const {
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["seed"] = seed;
  j["n_samples"] = n();
  j["dim"] = dim();
  if (method == DesignMethod::MmLHS) j["n_candidates"] = n_candidates;
  return j;
}

namespace {

void check_design_args(const JointInput& joint, int n) {
  if (joint.dim() < 1) throw DomainError("experiment design requires at least one marginal");
  if (n < 1) throw DomainError("experiment design requires n >= 1");
}

void fill_physical(const JointInput& joint, ExperimentDesign& d) {
  d.joint = joint;
  d.samples.resize(d.quantiles.rows(), d.quantiles.cols());
  for (int j = 0; j < d.quantiles.cols(); ++j) {
    const Marginal& m = joint.marginals[static_cast<std::size_t>(j)];
    for (int i = 0; i < d.quantiles.rows(); ++i)
      d.samples(i, j) = m.quantile(d.quantiles(i, j));
  }
}

}  // namespace

ExperimentDesign mcs_design(const JointInput& joint, int n, std::uint64_t seed) {
  check_design_args(joint, n);
  Rng rng(seed);
  ExperimentDesign d;
  d.method = DesignMethod::MCS;
  d.seed = seed;
  d.quantiles.resize(n, joint.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < joint.dim(); ++j) d.quantiles(i, j) = rng.uniform_open01();
  fill_physical(joint, d);
  return d;
}

ExperimentDesign lhs_design(const JointInput& joint, int n, std::uint64_t seed) {
  check_design_args(joint, n);
  Rng rng(seed);
  ExperimentDesign d;
  d.method = DesignMethod::LHS;
  d.seed = seed;
  d.quantiles.resize(n, joint.dim());
  for (int j = 0; j < joint.dim(); ++j) {
    const auto perm = rng.permutation(n);
    for (int i = 0; i < n; ++i) {
      double jitter = rng.uniform01();
      // Keep strictly inside the stratum so unbounded quantiles stay finite.
      jitter = std::min(std::max(jitter, 1e-12), 1.0 - 1e-12);
      d.quantiles(i, j) = (perm[static_cast<std::size_t>(i)] + jitter) / n;
    }
  }
  fill_physical(joint, d);
  return d;
}

std::uint64_t mmlhs_candidate_seed(std::uint64_t master_seed, int candidate_index) {
  return split_seed(master_seed, static_cast<std::uint64_t>(candidate_index));
}

ExperimentDesign mmlhs_design(const JointInput& joint, int n, int n_candidates,
                              std::uint64_t seed) {
  check_design_args(joint, n);
  if (n < 2) throw DomainError("mmlhs_design requires n >= 2");
  if (n_candidates < 1) throw DomainError("mmlhs_design requires n_candidates >= 1");

  ExperimentDesign best;
  double best_dmin = -1.0;
  for (int c = 0; c < n_candidates; ++c) {
    ExperimentDesign cand = lhs_design(joint, n, mmlhs_candidate_seed(seed, c));
    const double dmin = min_pairwise_distance(cand);
    if (dmin > best_dmin) {  // ties keep the lowest candidate index
      best_dmin = dmin;
      best = std::move(cand);
    }
  }
  best.method = DesignMethod::MmLHS;
  best.seed = seed;
  best.n_candidates = n_candidates;
  return best;
}

double min_pairwise_distance(const ExperimentDesign& d) {
  const int n = d.n();
  if (n < 2) throw DomainError("min_pairwise_distance requires at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const double dist = (d.quantiles.row(i) - d.quantiles.row(k)).norm();
      if (dist < best) best = dist;
    }
  return best;
}

}  // namespace gridpce
