#ifndef GRIDPCE_ORTHOPOLY_HPP
#define GRIDPCE_ORTHOPOLY_HPP

#include <vector>

#include "gridpce/marginal.hpp"

namespace gridpce {

// Three-term recurrence coefficients for the polynomials orthonormal
// w.r.t. one marginal:
//
//   psi_{k+1}(x) = ((x - alpha[k]) psi_k(x) - sqrt(beta[k]) psi_{k-1}(x)) / sqrt(beta[k+1])
//
// with psi_0 = 1, psi_{-1} = 0 and beta[0] = 1 (unit total mass).  Both
// vectors have length p_max + 1.
struct RecurrenceCoeffs {
  std::vector<double> alpha;
  std::vector<double> beta;

  int max_degree() const { return static_cast<int>(alpha.size()) - 1; }
};

// Discretized Stieltjes procedure: the marginal is replaced by a finite
// point measure (Gauss rule for continuous kinds, its own atoms for
// discrete kinds) and the recurrence is built by Lanczos-style orthogonal
// reduction.  Throws IllConditioningError when the moment sequence is
// numerically indefinite, e.g. when a discrete marginal with n atoms is
// asked for degree >= n.
RecurrenceCoeffs stieltjes_recurrence(const Marginal& m, int p_max);

// Evaluates psi_degree(x) by forward recurrence.  Throws DomainError when
// degree exceeds the coefficients' max degree.
double eval_orthonormal(const RecurrenceCoeffs& rc, int degree, double x);

// Evaluates psi_0(x) .. psi_up_to(x) in one forward pass.
void eval_orthonormal_all(const RecurrenceCoeffs& rc, int up_to, double x, double* out);

// A quadrature rule / discrete measure: nodes with positive weights.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss rule with n nodes for the probability measure of a continuous
// marginal (Gauss-Legendre for Uniform, Gauss-Hermite for Gaussian),
// nodes in the marginal's physical coordinates, weights summing to 1.
QuadratureRule gauss_rule(const Marginal& m, int n);

// The finite measure the Stieltjes procedure runs on: gauss_rule with
// n = max(64, 4*64*p_max) for continuous kinds, the atom list itself for
// discrete kinds.
QuadratureRule discretize_marginal(const Marginal& m, int p_max);

}  // namespace gridpce

#endif  // GRIDPCE_ORTHOPOLY_HPP
