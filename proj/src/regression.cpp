#include "gridpce/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridpce/errors.hpp"

namespace gridpce {

Eigen::VectorXd ols_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  if (a.rows() != y.size()) throw DomainError("ols_fit: row count mismatch");
  if (a.rows() < a.cols()) throw DomainError("ols_fit requires rows >= cols");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < a.cols())
    throw SingularityError("ols_fit: design matrix is rank deficient", qr.rank());
  return qr.solve(y);
}

namespace {

struct Standardized {
  Eigen::MatrixXd z;            // standardized non-intercept columns
  std::vector<int> cols;        // original column index per z column
  Eigen::VectorXd mean, norm;   // per z column
  Eigen::VectorXd y_centered;
  double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         int intercept_col) {
  const auto n = a.rows();
  Standardized s;
  s.y_mean = y.mean();
  s.y_centered = y.array() - s.y_mean;

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (j == intercept_col) continue;
    keep.push_back(j);
  }
  s.z.resize(n, static_cast<Eigen::Index>(keep.size()));
  s.mean.resize(static_cast<Eigen::Index>(keep.size()));
  s.norm.resize(static_cast<Eigen::Index>(keep.size()));
  Eigen::Index out = 0;
  for (Eigen::Index j : keep) {
    const double mu = a.col(j).mean();
    Eigen::VectorXd c = a.col(j).array() - mu;
    const double nrm = c.norm();
    s.mean[out] = mu;
    s.norm[out] = nrm;
    // Constant columns cannot be standardized; they stay in the matrix
    // with zero norm and are never selectable.
    s.z.col(out) = (nrm > 1e-12) ? Eigen::VectorXd(c / nrm) : Eigen::VectorXd::Zero(n);
    s.cols.push_back(static_cast<int>(j));
    ++out;
  }
  return s;
}

}  // namespace

std::vector<LarsStep> lars_path(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                                int intercept_col) {
  if (a.rows() != y.size()) throw DomainError("lars_path: row count mismatch");
  if (intercept_col < 0 || intercept_col >= a.cols())
    throw DomainError("lars_path: intercept column out of range");

  const auto n = a.rows();
  const auto p = a.cols();
  const Standardized s = standardize(a, y, intercept_col);
  const auto pz = s.z.cols();

  const int max_active =
      static_cast<int>(std::min<Eigen::Index>(n - 1, p - 1));

  std::vector<LarsStep> path;
  auto emit = [&](const std::vector<int>& active_z, const Eigen::VectorXd& beta_z) {
    // Map standardized coefficients back to the original columns.
    LarsStep step;
    step.coefficients = Eigen::VectorXd::Zero(p);
    double intercept = s.y_mean;
    step.active.push_back(intercept_col);
    for (std::size_t k = 0; k < active_z.size(); ++k) {
      const int zj = active_z[k];
      const double bz = beta_z[static_cast<Eigen::Index>(zj)];
      const double coef = bz / s.norm[zj];
      step.coefficients[s.cols[static_cast<std::size_t>(zj)]] = coef;
      intercept -= coef * s.mean[zj];
      step.active.push_back(s.cols[static_cast<std::size_t>(zj)]);
    }
    step.coefficients[intercept_col] = intercept;
    path.push_back(std::move(step));
  };

  std::vector<int> active;
  std::vector<char> in_active(static_cast<std::size_t>(pz), 0);
  std::vector<double> sign(static_cast<std::size_t>(pz), 1.0);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(pz);
  Eigen::VectorXd residual = s.y_centered;

  const double y_scale = std::max(s.y_centered.norm(), 1e-300);
  const double corr_tol = 1e-12 * y_scale;

  emit(active, beta);  // intercept-only model

  while (static_cast<int>(active.size()) < max_active) {
    const Eigen::VectorXd corr = s.z.transpose() * residual;

    // Most-correlated inactive column; ties resolve to the lowest index.
    int best = -1;
    double cmax = 0.0;
    for (Eigen::Index j = 0; j < pz; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || s.norm[j] <= 1e-12) continue;
      const double c = std::abs(corr[j]);
      if (c > cmax + 1e-15 * y_scale) {
        cmax = c;
        best = static_cast<int>(j);
      }
    }
    if (best < 0 || cmax <= corr_tol) break;  // residual decorrelated: path ends

    active.push_back(best);
    in_active[static_cast<std::size_t>(best)] = 1;
    sign[static_cast<std::size_t>(best)] = corr[best] >= 0.0 ? 1.0 : -1.0;

    const auto na = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd xa(n, na);
    for (Eigen::Index k = 0; k < na; ++k) {
      const int j = active[static_cast<std::size_t>(k)];
      xa.col(k) = sign[static_cast<std::size_t>(j)] * s.z.col(j);
    }

    const Eigen::MatrixXd gram = xa.transpose() * xa;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::VectorXd w_tilde;
    bool degenerate = ldlt.info() != Eigen::Success;
    if (!degenerate) {
      w_tilde = ldlt.solve(Eigen::VectorXd::Ones(na));
      degenerate = !w_tilde.allFinite() || w_tilde.sum() <= 0.0 ||
                   (gram * w_tilde - Eigen::VectorXd::Ones(na)).norm() > 1e-6;
    }
    if (degenerate) {
      active.pop_back();
      in_active[static_cast<std::size_t>(best)] = 0;
      break;
    }

    const double a_norm = 1.0 / std::sqrt(w_tilde.sum());
    const Eigen::VectorXd w = a_norm * w_tilde;
    const Eigen::VectorXd u = xa * w;  // equiangular direction, unit norm
    const double c_cur = cmax;

    double gamma = c_cur / a_norm;  // full step to the joint least-squares point
    if (static_cast<int>(active.size()) < max_active) {
      const Eigen::VectorXd au = s.z.transpose() * u;
      for (Eigen::Index j = 0; j < pz; ++j) {
        if (in_active[static_cast<std::size_t>(j)] || s.norm[j] <= 1e-12) continue;
        const double c1 = (c_cur - corr[j]) / (a_norm - au[j]);
        const double c2 = (c_cur + corr[j]) / (a_norm + au[j]);
        if (c1 > 1e-14 * y_scale && c1 < gamma) gamma = c1;
        if (c2 > 1e-14 * y_scale && c2 < gamma) gamma = c2;
      }
    }

    for (Eigen::Index k = 0; k < na; ++k) {
      const int j = active[static_cast<std::size_t>(k)];
      beta[j] += gamma * sign[static_cast<std::size_t>(j)] * w[k];
    }
    residual -= gamma * u;

    emit(active, beta);

    if (residual.norm() <= 1e-13 * y_scale) break;  // exact fit reached
  }

  return path;
}

double loo_error(const Eigen::MatrixXd& a_active, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& coeffs) {
  const auto n = a_active.rows();
  const auto p = a_active.cols();
  if (y.size() != n || coeffs.size() != p) throw DomainError("loo_error: shape mismatch");
  if (n <= p)
    throw LeverageSaturationError("loo_error: as many parameters as samples");

  // Leverages via thin QR: h_i = ||Q.row(i)||^2.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a_active);
  const Eigen::MatrixXd q_thin =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const Eigen::MatrixXd r_thin =
      qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j)
    if (std::abs(r_thin(j, j)) < 1e-13)
      throw SingularityError("loo_error: active design matrix is rank deficient", j);

  const Eigen::VectorXd residual = y - a_active * coeffs;
  const double y_mean = y.mean();
  const double var_y = (y.array() - y_mean).square().sum() / static_cast<double>(n - 1);

  double press = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = q_thin.row(i).squaredNorm();
    if (h >= 1.0 - 1e-12)
      throw LeverageSaturationError("loo_error: leverage saturated at sample " +
                                    std::to_string(i));
    const double d = residual[i] / (1.0 - h);
    press += d * d;
  }
  press /= static_cast<double>(n);

  if (var_y <= 0.0) {
    const double res_scale = residual.lpNorm<Eigen::Infinity>();
    const double y_scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
    return res_scale <= 1e-12 * y_scale ? 0.0 : std::numeric_limits<double>::infinity();
  }

  // tr((A^T A / N)^{-1}) / N  ==  tr((A^T A)^{-1})  ==  ||R^{-1}||_F^2.
  const Eigen::MatrixXd r_inv =
      r_thin.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const double trace_inv = r_inv.squaredNorm();
  const double t_corr =
      (static_cast<double>(n) / static_cast<double>(n - p)) * (1.0 + trace_inv);

  return press / var_y * t_corr;
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& a, const std::vector<int>& cols) {
  Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  return out;
}

}  // namespace

PceModel hybrid_lars_fit(const ExperimentDesign& x, const Eigen::VectorXd& y,
                         const BasisSet& basis,
                         const std::vector<RecurrenceCoeffs>& recurrences,
                         const HybridLarsOptions& options) {
  if (y.size() != x.n()) throw DomainError("hybrid_lars_fit: outputs do not match design rows");
  if (x.n() < 3) throw DomainError("hybrid_lars_fit requires at least 3 samples");
  if (basis.size() < 1 || basis.indices.front() != MultiIndex(static_cast<std::size_t>(basis.dim()), 0))
    throw DomainError("hybrid_lars_fit: basis must start with the zero multi-index");

  const Eigen::MatrixXd a = design_matrix(basis, recurrences, x);
  const auto path = lars_path(a, y, 0);

  const auto n = a.rows();
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_coeffs;
  std::vector<int> best_active;
  bool have_best = false;
  int rises = 0;
  double prev_score = std::numeric_limits<double>::infinity();

  for (const auto& step : path) {
    if (static_cast<Eigen::Index>(step.active.size()) >= n) break;  // cannot be scored
    double score;
    Eigen::VectorXd coeffs;
    try {
      const Eigen::MatrixXd a_sub = select_columns(a, step.active);
      coeffs = ols_fit(a_sub, y);
      score = loo_error(a_sub, y, coeffs);
    } catch (const NumericalError&) {
      continue;  // unscoreable active set; skip it
    }
    if (score < best_score) {
      best_score = score;
      best_active = step.active;
      best_coeffs = coeffs;
      have_best = true;
    }
    if (std::isfinite(prev_score) && score > prev_score) {
      if (++rises >= options.early_stop_rises) break;
    } else {
      rises = 0;
    }
    prev_score = score;
    if (options.target_loo > 0.0 && best_score <= options.target_loo) break;
  }

  if (!have_best)
    throw FitFailureError("hybrid_lars_fit: no candidate active set could be fit");

  PceModel model;
  model.basis = basis;
  model.joint = x.joint;
  model.coefficients = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t k = 0; k < best_active.size(); ++k)
    model.coefficients[best_active[k]] = best_coeffs[static_cast<Eigen::Index>(k)];

  const Eigen::VectorXd fitted = a * model.coefficients;
  const Eigen::VectorXd res = y - fitted;
  const double y_mean = y.mean();
  const double tss = (y.array() - y_mean).square().sum() / std::max<double>(1.0, static_cast<double>(n - 1));
  model.diagnostics.loo_error = best_score;
  model.diagnostics.empirical_error =
      tss > 0.0 ? (res.squaredNorm() / static_cast<double>(n)) / tss : 0.0;
  model.diagnostics.active_set_size = static_cast<int>(best_active.size());
  model.diagnostics.n_samples = static_cast<int>(n);
  model.design_seed = x.seed;
  return model;
}

nlohmann::ordered_json PceModel::to_json() const {
  nlohmann::ordered_json j;
  j["basis"] = basis.to_json();
  j["coefficients"] = std::vector<double>(coefficients.data(),
                                          coefficients.data() + coefficients.size());
  j["joint"] = joint.to_json();
  j["diagnostics"] = {{"loo_error", diagnostics.loo_error},
                      {"empirical_error", diagnostics.empirical_error},
                      {"active_set_size", diagnostics.active_set_size},
                      {"n_samples", diagnostics.n_samples}};
  j["design_seed"] = design_seed;
  return j;
}

PceModel PceModel::from_json(const nlohmann::json& j) {
  PceModel m;
  m.basis = BasisSet::from_json(j.at("basis"));
  const auto coeffs = j.at("coefficients").get<std::vector<double>>();
  m.coefficients = Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                     static_cast<Eigen::Index>(coeffs.size()));
  m.joint = JointInput::from_json(j.at("joint"));
  const auto& d = j.at("diagnostics");
  m.diagnostics.loo_error = d.at("loo_error").get<double>();
  m.diagnostics.empirical_error = d.at("empirical_error").get<double>();
  m.diagnostics.active_set_size = d.at("active_set_size").get<int>();
  m.diagnostics.n_samples = d.at("n_samples").get<int>();
  m.design_seed = j.at("design_seed").get<std::uint64_t>();
  return m;
}

}  // namespace gridpce
