#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "gridpce/errors.hpp"
#include "gridpce/marginal.hpp"
#include "gridpce/orthopoly.hpp"
#include "gridpce/rng.hpp"

using namespace gridpce;

namespace {

// Composite-Simpson quadrature oracle, independent of the Gauss rules
// used inside the Stieltjes implementation.
double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / (2.0 * panels);
  double total = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) total += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return total * h / 3.0;
}

// E[psi_i(X) psi_j(X)] under the marginal, by Simpson for continuous
// kinds and exact atom sums for discrete kinds.
double inner_product_oracle(const Marginal& m, const RecurrenceCoeffs& rc, int i, int j) {
  if (m.discrete()) {
    double total = 0.0;
    for (std::size_t a = 0; a < m.atom_values().size(); ++a)
      total += m.atom_weights()[a] * eval_orthonormal(rc, i, m.atom_values()[a]) *
               eval_orthonormal(rc, j, m.atom_values()[a]);
    return total;
  }
  double lo, hi;
  if (m.kind() == MarginalKind::Gaussian) {
    lo = m.param_a() - 13.0 * m.param_b();
    hi = m.param_a() + 13.0 * m.param_b();
  } else {
    lo = m.support().first;
    hi = m.support().second;
  }
  return simpson(
      [&](double x) {
        return m.pdf(x) * eval_orthonormal(rc, i, x) * eval_orthonormal(rc, j, x);
      },
      lo, hi, 6000);
}

}  // namespace

TEST_CASE("quantile examples") {
  CHECK(Marginal::uniform(0, 24).quantile(0.5) == doctest::Approx(12.0));
  CHECK(Marginal::gaussian(0, 1).quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));

  // cumulative mass walk: 0.2 < 0.25 lands on the first atom
  const auto dh = Marginal::discrete_hourly({3.0, 7.0}, {0.25, 0.75});
  CHECK(dh.quantile(0.2) == 3.0);
  CHECK(dh.quantile(0.25) == 3.0);
  CHECK(dh.quantile(0.2500001) == 7.0);
  CHECK(dh.quantile(1.0) == 7.0);

  CHECK_THROWS_AS(Marginal::uniform(0, 1).quantile(-0.01), DomainError);
  CHECK_THROWS_AS(Marginal::uniform(0, 1).quantile(1.01), DomainError);
}

TEST_CASE("quantile/cdf round trip on continuous marginals") {
  const Marginal kinds[] = {Marginal::uniform(-3.0, 17.5), Marginal::gaussian(2.0, 4.5)};
  Rng rng(12345);
  for (const auto& m : kinds) {
    for (int k = 0; k < 1000; ++k) {
      const double u = rng.uniform_open01();
      CHECK(std::abs(m.cdf(m.quantile(u)) - u) <= 1e-9);
    }
  }
}

TEST_CASE("quantile is non-decreasing") {
  const auto atoms = Marginal::discrete_hourly({1, 2, 3, 4}, {0.1, 0.4, 0.3, 0.2});
  const Marginal kinds[] = {Marginal::uniform(0, 24), Marginal::gaussian(12, 3), atoms};
  for (const auto& m : kinds) {
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
      const double q = m.quantile(i / 200.0);
      CHECK(q >= prev);
      prev = q;
    }
  }
}

TEST_CASE("mass sums validated at construction") {
  CHECK_THROWS_AS(Marginal::discrete_hourly({1, 2}, {0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(Marginal::empirical({1, 2}, {0.25, 0.25}), DomainError);
  CHECK_NOTHROW(Marginal::discrete_hourly({1, 2}, {0.5, 0.5}));
}

TEST_CASE("stieltjes matches normalized Legendre on uniform(-1,1)") {
  const auto m = Marginal::uniform(-1, 1);
  const auto rc = stieltjes_recurrence(m, 6);

  // Known recurrence for the uniform probability measure on [-1,1]:
  // alpha_k = 0, beta_k = k^2 / (4k^2 - 1).
  for (int k = 0; k <= 6; ++k) {
    CHECK(std::abs(rc.alpha[static_cast<std::size_t>(k)]) <= 1e-10);
    const double expected = k == 0 ? 1.0 : (double(k) * k) / (4.0 * k * k - 1.0);
    CHECK(rc.beta[static_cast<std::size_t>(k)] == doctest::Approx(expected).epsilon(1e-10));
  }

  // psi_1(x) = sqrt(3) x; hand-verified: int (sqrt(3)x)^2 (1/2) dx over [-1,1] = 1.
  CHECK(eval_orthonormal(rc, 1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(eval_orthonormal(rc, 1, 0.5) == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-12));
}

TEST_CASE("stieltjes matches normalized probabilists' Hermite on gaussian(0,1)") {
  const auto m = Marginal::gaussian(0, 1);
  const auto rc = stieltjes_recurrence(m, 6);
  for (int k = 0; k <= 6; ++k) {
    CHECK(std::abs(rc.alpha[static_cast<std::size_t>(k)]) <= 1e-10);
    const double expected = k == 0 ? 1.0 : double(k);
    CHECK(rc.beta[static_cast<std::size_t>(k)] == doctest::Approx(expected).epsilon(1e-10));
  }

  // psi_2(x) = (x^2 - 1)/sqrt(2)
  CHECK(eval_orthonormal(rc, 2, 0.0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(eval_orthonormal(rc, 2, 2.0) == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("degree-0 recurrence is the constant 1") {
  const auto rc = stieltjes_recurrence(Marginal::uniform(0, 1), 0);
  CHECK(eval_orthonormal(rc, 0, 0.37) == 1.0);
  CHECK_THROWS_AS(eval_orthonormal(rc, 1, 0.0), DomainError);
}

TEST_CASE("orthonormality against an independent quadrature oracle") {
  const int p = 5;
  const Marginal continuous[] = {Marginal::uniform(2.0, 26.0), Marginal::gaussian(-1.0, 2.5)};
  for (const auto& m : continuous) {
    const auto rc = stieltjes_recurrence(m, p);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(inner_product_oracle(m, rc, i, j) - expected) <= 1e-8);
      }
  }

  // Discrete kinds: empirical 10-atom measure, degree up to 5.
  std::vector<double> values, weights;
  Rng rng(99);
  double total = 0.0;
  for (int i = 0; i < 10; ++i) {
    values.push_back(i + 1.0);
    weights.push_back(0.05 + rng.uniform01());
    total += weights.back();
  }
  for (auto& w : weights) w /= total;
  // exact renormalization so construction passes the 1e-10 gate
  double sum = 0.0;
  for (double w : weights) sum += w;
  weights.back() += 1.0 - sum;
  const auto emp = Marginal::empirical(values, weights);
  const auto rc = stieltjes_recurrence(emp, p);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      CHECK(std::abs(inner_product_oracle(emp, rc, i, j) - expected) <= 1e-6);
    }
}

TEST_CASE("discrete measure supports at most n_atoms orthonormal polynomials") {
  const auto m = Marginal::discrete_hourly({1, 2, 3}, {0.2, 0.5, 0.3});
  CHECK_NOTHROW(stieltjes_recurrence(m, 2));
  CHECK_THROWS_AS(stieltjes_recurrence(m, 3), IllConditioningError);
  try {
    stieltjes_recurrence(m, 3);
  } catch (const IllConditioningError& e) {
    CHECK(e.degree() == 3);
  }
}

TEST_CASE("marginal JSON round trip") {
  const Marginal kinds[] = {
      Marginal::uniform(0, 24), Marginal::gaussian(3, 0.5),
      Marginal::discrete_hourly({1, 2, 3}, {0.25, 0.5, 0.25}),
      Marginal::empirical({0.5, 1.5, 9.0}, {0.2, 0.3, 0.5})};
  for (const auto& m : kinds) {
    const auto j = m.to_json();
    const auto back = Marginal::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back == m);
  }

  JointInput joint({Marginal::uniform(0, 1), Marginal::gaussian(0, 1)});
  const auto back = JointInput::from_json(nlohmann::json::parse(joint.to_json().dump()));
  CHECK(back.dim() == 2);
  CHECK(back.marginals[0] == joint.marginals[0]);
  CHECK(back.marginals[1] == joint.marginals[1]);
}
