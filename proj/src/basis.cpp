#include "gridpce/basis.hpp"

#include <cmath>

#include "gridpce/errors.hpp"

namespace gridpce {

namespace {

// Enumerates compositions of `total` into `dim` parts, first part highest,
// which yields the descending-lexicographic order within a degree shell.
void enumerate_degree(int dim, int total, MultiIndex& scratch, int pos,
                      std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    scratch[static_cast<std::size_t>(pos)] = total;
    out.push_back(scratch);
    return;
  }
  for (int a = total; a >= 0; --a) {
    scratch[static_cast<std::size_t>(pos)] = a;
    enumerate_degree(dim, total - a, scratch, pos + 1, out);
  }
}

bool within_qnorm(const MultiIndex& alpha, int p, double q) {
  if (q == 1.0) {
    int total = 0;
    for (int a : alpha) total += a;
    return total <= p;
  }
  double sum = 0.0;
  for (int a : alpha)
    if (a > 0) sum += std::pow(static_cast<double>(a), q);
  return std::pow(sum, 1.0 / q) <= static_cast<double>(p) + 1e-12;
}

}  // namespace

BasisSet qnorm_truncation(int dim, int p, double q) {
  if (dim < 1) throw DomainError("qnorm_truncation requires dim >= 1");
  if (p < 0) throw DomainError("qnorm_truncation requires p >= 0");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("qnorm_truncation requires 0 < q <= 1");

  BasisSet bs;
  bs.p = p;
  bs.q = q;
  MultiIndex scratch(static_cast<std::size_t>(dim), 0);
  // Any index passing the q-norm bound with q <= 1 has total degree <= p,
  // so the degree-shell sweep enumerates every member exactly once.
  for (int total = 0; total <= p; ++total) {
    std::vector<MultiIndex> shell;
    enumerate_degree(dim, total, scratch, 0, shell);
    for (auto& alpha : shell)
      if (within_qnorm(alpha, p, q)) bs.indices.push_back(std::move(alpha));
  }
  return bs;
}

nlohmann::ordered_json BasisSet::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["q"] = q;
  j["indices"] = indices;
  return j;
}

BasisSet BasisSet::from_json(const nlohmann::json& j) {
  BasisSet bs;
  bs.p = j.at("p").get<int>();
  bs.q = j.at("q").get<double>();
  bs.indices = j.at("indices").get<std::vector<MultiIndex>>();
  return bs;
}

namespace {

// psi_k(x) per dimension for k = 0..p, laid out dim-major.
void univariate_table(const BasisSet& bs, const std::vector<RecurrenceCoeffs>& recurrences,
                      const double* point, int dim, std::vector<double>& table, int stride) {
  for (int d = 0; d < dim; ++d) {
    const auto& rc = recurrences[static_cast<std::size_t>(d)];
    if (rc.max_degree() < bs.p)
      throw DomainError("recurrence for dimension " + std::to_string(d) +
                        " does not reach basis degree " + std::to_string(bs.p));
    eval_orthonormal_all(rc, bs.p, point[d], &table[static_cast<std::size_t>(d) * stride]);
  }
}

}  // namespace

Eigen::VectorXd eval_multivariate(const BasisSet& bs,
                                  const std::vector<RecurrenceCoeffs>& recurrences,
                                  const Eigen::VectorXd& point) {
  const int dim = bs.dim();
  if (point.size() != dim || static_cast<int>(recurrences.size()) != dim)
    throw DomainError("eval_multivariate dimension mismatch");

  const int stride = bs.p + 1;
  std::vector<double> table(static_cast<std::size_t>(dim) * stride);
  univariate_table(bs, recurrences, point.data(), dim, table, stride);

  Eigen::VectorXd out(bs.size());
  for (int j = 0; j < bs.size(); ++j) {
    double prod = 1.0;
    const auto& alpha = bs.indices[static_cast<std::size_t>(j)];
    for (int d = 0; d < dim; ++d)
      prod *= table[static_cast<std::size_t>(d) * stride + alpha[static_cast<std::size_t>(d)]];
    out[j] = prod;
  }
  return out;
}

Eigen::MatrixXd design_matrix(const BasisSet& bs,
                              const std::vector<RecurrenceCoeffs>& recurrences,
                              const Eigen::MatrixXd& points) {
  const int dim = bs.dim();
  if (points.cols() != dim || static_cast<int>(recurrences.size()) != dim)
    throw DomainError("design_matrix dimension mismatch");

  const int stride = bs.p + 1;
  Eigen::MatrixXd a(points.rows(), bs.size());
  std::vector<double> table(static_cast<std::size_t>(dim) * stride);
  Eigen::VectorXd row(dim);
  for (int i = 0; i < points.rows(); ++i) {
    row = points.row(i);
    univariate_table(bs, recurrences, row.data(), dim, table, stride);
    for (int j = 0; j < bs.size(); ++j) {
      double prod = 1.0;
      const auto& alpha = bs.indices[static_cast<std::size_t>(j)];
      for (int d = 0; d < dim; ++d)
        prod *= table[static_cast<std::size_t>(d) * stride + alpha[static_cast<std::size_t>(d)]];
      a(i, j) = prod;
    }
  }
  return a;
}

Eigen::MatrixXd design_matrix(const BasisSet& bs,
                              const std::vector<RecurrenceCoeffs>& recurrences,
                              const ExperimentDesign& x) {
  return design_matrix(bs, recurrences, x.samples);
}

}  // namespace gridpce
