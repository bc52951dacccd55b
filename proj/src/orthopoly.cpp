#include "gridpce/orthopoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gridpce/errors.hpp"

namespace gridpce {

namespace {

// Nodes are the eigenvalues of the Jacobi matrix built from a classical
// monic recurrence (a_k, b_k) with b_0 = 1; weights come from the
// Christoffel function, w_i = 1 / sum_{k<n} psi_k(x_i)^2.
QuadratureRule golub_welsch(const std::vector<double>& a, const std::vector<double>& b, int n) {
  Eigen::VectorXd diag(n), subdiag(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = a[static_cast<std::size_t>(k)];
  for (int k = 1; k < n; ++k)
    subdiag[k - 1] = std::sqrt(b[static_cast<std::size_t>(k)]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolve failed while building a Gauss rule");

  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = solver.eigenvalues()[i];
    // Christoffel sum over the orthonormal recurrence.  Extreme Hermite
    // nodes can overflow the sum; their weights underflow to 0.
    double prev = 0.0, cur = 1.0, sum = 1.0;
    bool overflowed = false;
    for (int k = 0; k + 1 < n; ++k) {
      const double next =
          ((x - a[static_cast<std::size_t>(k)]) * cur -
           std::sqrt(b[static_cast<std::size_t>(k)]) * prev) /
          std::sqrt(b[static_cast<std::size_t>(k) + 1]);
      prev = cur;
      cur = next;
      sum += cur * cur;
      if (sum > 1e290) {
        overflowed = true;
        break;
      }
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = overflowed ? 0.0 : 1.0 / sum;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_rule(const Marginal& m, int n) {
  if (n < 1) throw DomainError("gauss_rule requires n >= 1");
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b[0] = 1.0;

  switch (m.kind()) {
    case MarginalKind::Uniform: {
      // Monic Legendre on [-1,1]: b_k = k^2 / (4k^2 - 1).
      for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k) * k;
        b[static_cast<std::size_t>(k)] = kk / (4.0 * kk - 1.0);
      }
      QuadratureRule rule = golub_welsch(a, b, n);
      const double lo = m.param_a(), hi = m.param_b();
      for (auto& x : rule.nodes) x = lo + (hi - lo) * (x + 1.0) * 0.5;
      return rule;
    }
    case MarginalKind::Gaussian: {
      // Probabilists' Hermite: b_k = k.
      for (int k = 1; k < n; ++k) b[static_cast<std::size_t>(k)] = k;
      QuadratureRule rule = golub_welsch(a, b, n);
      const double mean = m.param_a(), sd = m.param_b();
      for (auto& x : rule.nodes) x = mean + sd * x;
      return rule;
    }
    default:
      throw DomainError("gauss_rule is defined for continuous marginals only");
  }
}

QuadratureRule discretize_marginal(const Marginal& m, int p_max) {
  if (m.discrete()) {
    return {m.atom_values(), m.atom_weights()};
  }
  const int n = std::max(64, 4 * 64 * p_max);
  return gauss_rule(m, n);
}

RecurrenceCoeffs stieltjes_recurrence(const Marginal& m, int p_max) {
  if (p_max < 0) throw DomainError("stieltjes_recurrence requires p_max >= 0");

  const QuadratureRule q = discretize_marginal(m, p_max);
  const auto n = q.nodes.size();

  RecurrenceCoeffs rc;
  rc.alpha.assign(static_cast<std::size_t>(p_max) + 1, 0.0);
  rc.beta.assign(static_cast<std::size_t>(p_max) + 1, 0.0);
  rc.beta[0] = 1.0;  // probability measure

  // Lanczos-style reduction: carry psi_{k-1}, psi_k on all nodes.
  std::vector<double> prev(n, 0.0), cur(n, 1.0), next(n);
  double beta_scale = 1.0;

  for (int k = 0; k <= p_max; ++k) {
    double ak = 0.0;
    for (std::size_t i = 0; i < n; ++i) ak += q.weights[i] * q.nodes[i] * cur[i] * cur[i];
    rc.alpha[static_cast<std::size_t>(k)] = ak;
    if (k == p_max) break;

    const double sq_bk = std::sqrt(rc.beta[static_cast<std::size_t>(k)]);
    double bnext = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = (q.nodes[i] - ak) * cur[i] - sq_bk * prev[i];
      bnext += q.weights[i] * next[i] * next[i];
    }
    if (!(bnext > 1e-12 * beta_scale))
      throw IllConditioningError("indefinite moment sequence in Stieltjes procedure", k + 1);
    rc.beta[static_cast<std::size_t>(k) + 1] = bnext;
    beta_scale = std::max(beta_scale, bnext);

    const double sq_bnext = std::sqrt(bnext);
    for (std::size_t i = 0; i < n; ++i) {
      prev[i] = cur[i];
      cur[i] = next[i] / sq_bnext;
    }
  }
  return rc;
}

double eval_orthonormal(const RecurrenceCoeffs& rc, int degree, double x) {
  if (degree < 0 || degree > rc.max_degree())
    throw DomainError("eval_orthonormal degree " + std::to_string(degree) +
                      " exceeds recurrence max degree " + std::to_string(rc.max_degree()));
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < degree; ++k) {
    const double next = ((x - rc.alpha[static_cast<std::size_t>(k)]) * cur -
                         std::sqrt(rc.beta[static_cast<std::size_t>(k)]) * prev) /
                        std::sqrt(rc.beta[static_cast<std::size_t>(k) + 1]);
    prev = cur;
    cur = next;
  }
  return cur;
}

void eval_orthonormal_all(const RecurrenceCoeffs& rc, int up_to, double x, double* out) {
  if (up_to < 0 || up_to > rc.max_degree())
    throw DomainError("eval_orthonormal_all degree out of range");
  out[0] = 1.0;
  if (up_to == 0) return;
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < up_to; ++k) {
    const double next = ((x - rc.alpha[static_cast<std::size_t>(k)]) * cur -
                         std::sqrt(rc.beta[static_cast<std::size_t>(k)]) * prev) /
                        std::sqrt(rc.beta[static_cast<std::size_t>(k) + 1]);
    prev = cur;
    cur = next;
    out[k + 1] = cur;
  }
}

}  // namespace gridpce
