#include "gridpce/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gridpce/errors.hpp"
#include "gridpce/rng.hpp"

namespace gridpce {

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (count <= 0) return;
  int n_workers = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = std::min(n_workers, count);

  if (n_workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += n_workers) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Eigen::VectorXd evaluate_on_design(const StudyModel& model, const ExperimentDesign& design,
                                   int workers) {
  Eigen::VectorXd y(design.n());
  parallel_for(design.n(), workers, [&](int i) { y[i] = model.evaluate(design.samples.row(i)); });
  return y;
}

PceModel fit_pce_on_design(const StudyModel& model, const ExperimentDesign& design,
                           int degree, double qnorm) {
  const BasisSet basis = qnorm_truncation(design.dim(), degree, qnorm);
  std::vector<RecurrenceCoeffs> recurrences;
  recurrences.reserve(model.joint().marginals.size());
  for (const auto& m : model.joint().marginals)
    recurrences.push_back(stieltjes_recurrence(m, degree));
  const Eigen::VectorXd y = evaluate_on_design(model, design);
  return hybrid_lars_fit(design, y, basis, recurrences);
}

OracleMoments mcs_oracle(const StudyModel& model, int n, std::uint64_t seed, int workers) {
  if (n < 2) throw DomainError("mcs_oracle requires n >= 2");

  const auto& joint = model.joint();
  std::vector<double> values(static_cast<std::size_t>(n));
  parallel_for(n, workers, [&](int i) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd point(joint.dim());
    for (int j = 0; j < joint.dim(); ++j)
      point[j] = joint.marginals[static_cast<std::size_t>(j)].quantile(rng.uniform_open01());
    values[static_cast<std::size_t>(i)] = model.evaluate(point);
  });

  OracleMoments out;
  out.n = n;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (n - 1);
  out.mean = mean;
  out.se_mean = std::sqrt(var / n);
  out.robust_std_dev = robust_std(values);

  // Bootstrap standard error of the robust std (32 seeded resamples).
  constexpr int kBoot = 32;
  std::vector<double> boot(kBoot);
  parallel_for(kBoot, workers, [&](int b) {
    Rng rng(split_seed(seed ^ 0x626f6f74ULL, static_cast<std::uint64_t>(b)));
    std::vector<double> resample(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      resample[static_cast<std::size_t>(i)] =
          values[static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(n)))];
    boot[static_cast<std::size_t>(b)] = robust_std(resample);
  });
  double boot_mean = 0.0;
  for (double v : boot) boot_mean += v;
  boot_mean /= kBoot;
  double boot_var = 0.0;
  for (double v : boot) boot_var += (v - boot_mean) * (v - boot_mean);
  out.se_robust_std = std::sqrt(boot_var / (kBoot - 1));
  return out;
}

namespace {

// Common random numbers across methods: the replicate seed depends only
// on (master, size, replicate), so per-cell spreads compare methods on a
// paired candidate-pool draw instead of adding independent seed noise.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t size_idx, int replicate) {
  return split_seed(split_seed(master, 0x73697a65ULL + size_idx),
                    static_cast<std::uint64_t>(replicate));
}

ExperimentDesign make_design(const JointInput& joint, DesignMethod method, int n,
                             int n_candidates, std::uint64_t seed) {
  switch (method) {
    case DesignMethod::MCS: return mcs_design(joint, n, seed);
    case DesignMethod::LHS: return lhs_design(joint, n, seed);
    case DesignMethod::MmLHS: return mmlhs_design(joint, n, n_candidates, seed);
  }
  throw DomainError("unknown design method");
}

struct Aggregate {
  double mean = 0.0;
  double sample_std = 0.0;
};

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  for (double v : values) a.mean += v;
  a.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double var = 0.0;
    for (double v : values) var += (v - a.mean) * (v - a.mean);
    a.sample_std = std::sqrt(var / static_cast<double>(values.size() - 1));
  }
  return a;
}

}  // namespace

const StabilityCell* StabilityReport::find(DesignMethod method, int n_samples) const {
  for (const auto& cell : cells)
    if (cell.method == method && cell.n_samples == n_samples) return &cell;
  return nullptr;
}

StabilityReport run_study(const StudyModel& model, const StabilityStudyConfig& cfg) {
  if (cfg.replicates < 2) throw DomainError("stability study requires replicates >= 2");
  for (int n : cfg.sample_sizes)
    if (n < 2) throw DomainError("stability study sample sizes must be >= 2");

  StabilityReport report;
  report.reference = mcs_oracle(model, cfg.oracle_samples, split_seed(cfg.seed, 0x6f7261636cULL),
                                cfg.workers);

  // Precompute recurrences once; the joint is shared by every replicate.
  std::vector<RecurrenceCoeffs> recurrences;
  for (const auto& m : model.joint().marginals)
    recurrences.push_back(stieltjes_recurrence(m, cfg.pce_degree));

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (std::size_t si = 0; si < cfg.sample_sizes.size(); ++si) {
      const DesignMethod method = cfg.methods[mi];
      const int n_s = cfg.sample_sizes[static_cast<std::size_t>(si)];
      const BasisSet basis = qnorm_truncation(model.dim(), cfg.pce_degree, cfg.pce_qnorm);

      std::vector<double> means(static_cast<std::size_t>(cfg.replicates),
                                std::numeric_limits<double>::quiet_NaN());
      std::vector<double> stds(static_cast<std::size_t>(cfg.replicates),
                               std::numeric_limits<double>::quiet_NaN());

      parallel_for(cfg.replicates, cfg.workers, [&](int rep) {
        try {
          const auto seed = replicate_seed(cfg.seed, si + 1, rep + 1);
          const ExperimentDesign design =
              make_design(model.joint(), method, n_s, cfg.n_candidates, seed);
          const Eigen::VectorXd y = evaluate_on_design(model, design, 1);
          const PceModel pce = hybrid_lars_fit(design, y, basis, recurrences);
          means[static_cast<std::size_t>(rep)] = pce_mean(pce);
          stds[static_cast<std::size_t>(rep)] = std::sqrt(pce_variance(pce));
        } catch (const NumericalError&) {
          // fit failure: slot stays NaN and is counted below
        } catch (const DomainError&) {
        }
      });

      StabilityCell cell;
      cell.method = method;
      cell.n_samples = n_s;
      std::vector<double> ok_means, ok_stds;
      for (int rep = 0; rep < cfg.replicates; ++rep) {
        if (std::isnan(means[static_cast<std::size_t>(rep)])) {
          ++cell.n_failed;
          continue;
        }
        ok_means.push_back(means[static_cast<std::size_t>(rep)]);
        ok_stds.push_back(stds[static_cast<std::size_t>(rep)]);
      }
      const Aggregate am = aggregate(ok_means);
      const Aggregate as = aggregate(ok_stds);
      cell.mean_of_means = am.mean;
      cell.std_of_means = am.sample_std;
      cell.mean_of_stds = as.mean;
      cell.std_of_stds = as.sample_std;
      if (report.reference.mean != 0.0)
        cell.err_mean = std::abs(am.mean - report.reference.mean) / std::abs(report.reference.mean);
      if (report.reference.robust_std_dev != 0.0)
        cell.err_std =
            std::abs(as.mean - report.reference.robust_std_dev) / report.reference.robust_std_dev;
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace gridpce
