#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gridpce/errors.hpp"
#include "gridpce/harness.hpp"

using namespace gridpce;

namespace {

SparsePolynomialModel constant_model(double value) {
  JointInput joint({Marginal::uniform(0, 1), Marginal::uniform(0, 1)});
  return SparsePolynomialModel(joint, {{value, {0, 0}}});
}

SparsePolynomialModel quadratic_model() {
  JointInput joint({Marginal::uniform(-1, 1), Marginal::uniform(-1, 1)});
  return SparsePolynomialModel(joint, {{1.0, {0, 0}}, {2.0, {1, 0}}, {-0.5, {2, 0}}, {0.75, {1, 1}}});
}

}  // namespace

TEST_CASE("mcs oracle on trivial models") {
  const auto constant = constant_model(4.5);
  const auto moments = mcs_oracle(constant, 500, 11);
  CHECK(moments.mean == doctest::Approx(4.5));
  CHECK(moments.robust_std_dev == 0.0);
  CHECK(moments.se_mean == 0.0);

  JointInput joint({Marginal::uniform(0, 1)});
  const SparsePolynomialModel identity(joint, {{1.0, {1}}});
  const auto id_moments = mcs_oracle(identity, 100000, 17);
  CHECK(std::abs(id_moments.mean - 0.5) < 0.003);  // 3 sigma CLT bound
  CHECK(id_moments.se_mean == doctest::Approx(std::sqrt(1.0 / 12.0 / 100000.0)).epsilon(0.05));

  CHECK_THROWS_AS(mcs_oracle(constant, 1, 3), DomainError);
}

TEST_CASE("mcs oracle is deterministic per seed") {
  const auto model = quadratic_model();
  const auto a = mcs_oracle(model, 5000, 123, 4);
  const auto b = mcs_oracle(model, 5000, 123, 2);  // worker count must not matter
  CHECK(a.mean == b.mean);
  CHECK(a.robust_std_dev == b.robust_std_dev);
  CHECK(a.se_robust_std == b.se_robust_std);
}

TEST_CASE("stability study on a constant model has zero spread") {
  const auto model = constant_model(3.25);
  StabilityStudyConfig cfg;
  cfg.methods = {DesignMethod::LHS};
  cfg.sample_sizes = {10, 20};
  cfg.replicates = 2;
  cfg.pce_degree = 2;
  cfg.oracle_samples = 200;
  cfg.seed = 5;
  const auto report = run_study(model, cfg);
  REQUIRE(report.cells.size() == 2);
  for (const auto& cell : report.cells) {
    CHECK(cell.mean_of_means == doctest::Approx(3.25));
    CHECK(cell.std_of_means == 0.0);
    CHECK(cell.mean_of_stds == doctest::Approx(0.0).epsilon(0).scale(1).epsilon(1e-12));
    CHECK(cell.n_failed == 0);
  }
}

TEST_CASE("quadratic model is recovered exactly at generous sample sizes") {
  const auto model = quadratic_model();
  StabilityStudyConfig cfg;
  cfg.methods = {DesignMethod::MmLHS};
  cfg.sample_sizes = {30};  // 3x the 10-element basis
  cfg.replicates = 5;
  cfg.pce_degree = 3;
  cfg.oracle_samples = 2000;
  cfg.seed = 77;
  const auto report = run_study(model, cfg);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].std_of_means < 1e-6);
  CHECK(report.cells[0].std_of_stds < 1e-6);
  CHECK(report.cells[0].n_failed == 0);
}

TEST_CASE("stability report reruns bit-identically") {
  const auto model = quadratic_model();
  StabilityStudyConfig cfg;
  cfg.methods = {DesignMethod::MCS, DesignMethod::LHS};
  cfg.sample_sizes = {15, 25};
  cfg.replicates = 4;
  cfg.pce_degree = 2;
  cfg.oracle_samples = 500;
  cfg.seed = 99;
  cfg.workers = 3;
  const auto a = run_study(model, cfg);
  cfg.workers = 1;
  const auto b = run_study(model, cfg);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].mean_of_means == b.cells[i].mean_of_means);
    CHECK(a.cells[i].std_of_means == b.cells[i].std_of_means);
    CHECK(a.cells[i].mean_of_stds == b.cells[i].mean_of_stds);
    CHECK(a.cells[i].std_of_stds == b.cells[i].std_of_stds);
  }
  CHECK(a.reference.mean == b.reference.mean);
}

TEST_CASE("ishigami analytic moments match a large monte carlo check") {
  const IshigamiModel model;
  CHECK(model.analytic_mean() == doctest::Approx(3.5));
  // a^2/8 + b pi^4/5 + b^2 pi^8/18 + 1/2
  CHECK(model.analytic_variance() == doctest::Approx(13.844587940719254).epsilon(1e-12));

  const auto oracle = mcs_oracle(model, 200000, 42);
  CHECK(std::abs(oracle.mean - model.analytic_mean()) <= 4.0 * oracle.se_mean);
}

TEST_CASE("replicate spreads shrink from the smallest to the largest size") {
  const auto model = quadratic_model();
  StabilityStudyConfig cfg;
  cfg.methods = {DesignMethod::LHS, DesignMethod::MmLHS};
  cfg.sample_sizes = {12, 60};
  cfg.replicates = 12;
  cfg.pce_degree = 3;
  cfg.oracle_samples = 1000;
  cfg.seed = 2718;
  const auto report = run_study(model, cfg);
  for (const auto method : cfg.methods) {
    const auto* small = report.find(method, 12);
    const auto* large = report.find(method, 60);
    REQUIRE(small != nullptr);
    REQUIRE(large != nullptr);
    CHECK(large->std_of_means <= small->std_of_means);
    CHECK(large->std_of_stds <= small->std_of_stds);
  }
}

TEST_CASE("ishigami fit meets the loo target and a held-out check") {
  const IshigamiModel model;
  const auto design = mmlhs_design(model.joint(), 300, 100, 511);
  const auto pce = fit_pce_on_design(model, design, 9, 1.0);
  CHECK(pce.diagnostics.loo_error < 0.01);

  // held-out validation error on fresh Monte Carlo points
  const auto validation = mcs_design(model.joint(), 10000, 8123);
  PceEvaluator eval(pce);
  double sse = 0.0, mean = 0.0;
  Eigen::VectorXd truth(validation.n());
  for (int i = 0; i < validation.n(); ++i) {
    truth[i] = model.evaluate(validation.samples.row(i));
    mean += truth[i];
  }
  mean /= validation.n();
  double tss = 0.0;
  for (int i = 0; i < validation.n(); ++i) {
    const double p = eval(validation.samples.row(i).transpose());
    sse += (truth[i] - p) * (truth[i] - p);
    tss += (truth[i] - mean) * (truth[i] - mean);
  }
  CHECK(sse / tss < 0.01);
}

TEST_CASE("failed replicates are excluded and counted") {
  const auto model = quadratic_model();
  StabilityStudyConfig cfg;
  cfg.methods = {DesignMethod::LHS};
  cfg.sample_sizes = {2};  // below the minimum fit size: every replicate fails
  cfg.replicates = 4;
  cfg.pce_degree = 2;
  cfg.oracle_samples = 100;
  cfg.seed = 8;
  const auto report = run_study(model, cfg);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].n_failed == 4);
  CHECK(report.cells[0].std_of_means == 0.0);
}
