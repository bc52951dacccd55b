// gridpce: probabilistic power-system resilience assessment with sparse
// polynomial chaos surrogates and maximin Latin hypercube designs.
//
// Commands: design, fit, moments, simulate, stability.
// Exit codes: 0 success, 1 usage, 2 input data, 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "gridpce/cascade.hpp"
#include "gridpce/csv.hpp"
#include "gridpce/errors.hpp"
#include "gridpce/harness.hpp"
#include "gridpce/network_case.hpp"
#include "gridpce/postproc.hpp"
#include "gridpce/rng.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct PceSettings {
  int p = 3;
  double q = 1.0;
  std::string method = "mmlhs";
  int n_samples = 0;  // 0 = 10 * M
  int n_candidates = 100;
  std::uint64_t seed = 42;
  int early_stop_rises = 4;
};

struct StudyConfig {
  std::string case_file;
  std::string fragility_file;
  std::string weather_file;
  std::optional<gridpce::JointInput> marginals;
  PceSettings pce;
  json stability;  // raw block, parsed by cmd_stability
  std::string output_dir = "out";
  int workers = 0;
};

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gridpce::InputError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw gridpce::InputError("invalid JSON in '" + path + "': " + e.what());
  }

  StudyConfig cfg;
  cfg.case_file = j.value("case_file", "");
  cfg.fragility_file = j.value("fragility_file", "");
  cfg.weather_file = j.value("weather_file", "");
  cfg.output_dir = j.value("output_dir", "out");
  cfg.workers = j.value("workers", 0);
  if (j.contains("marginals")) cfg.marginals = gridpce::JointInput::from_json(j.at("marginals"));
  if (j.contains("pce")) {
    const auto& p = j.at("pce");
    cfg.pce.p = p.value("p", cfg.pce.p);
    cfg.pce.q = p.value("q", cfg.pce.q);
    cfg.pce.method = p.value("method", cfg.pce.method);
    cfg.pce.n_samples = p.value("n_samples", cfg.pce.n_samples);
    cfg.pce.n_candidates = p.value("n_candidates", cfg.pce.n_candidates);
    cfg.pce.seed = p.value("seed", cfg.pce.seed);
    cfg.pce.early_stop_rises = p.value("early_stop_rises", cfg.pce.early_stop_rises);
  }
  if (j.contains("stability")) cfg.stability = j.at("stability");

  // referenced paths must exist at load time
  for (const auto& path_ref : {cfg.case_file, cfg.fragility_file, cfg.weather_file})
    if (!path_ref.empty() && !std::filesystem::exists(path_ref))
      throw gridpce::InputError("config references missing file '" + path_ref + "'");
  return cfg;
}

std::unique_ptr<gridpce::GridStudyModel> make_grid_model(const StudyConfig& cfg) {
  if (cfg.case_file.empty() || cfg.fragility_file.empty() || cfg.weather_file.empty())
    throw gridpce::InputError("config must name case_file, fragility_file and weather_file");
  return std::make_unique<gridpce::GridStudyModel>(
      gridpce::load_case_file(cfg.case_file),
      gridpce::FragilityCurve::load_file(cfg.fragility_file),
      gridpce::WeatherEvent::load_file(cfg.weather_file));
}

// Joint input for design/fit: explicit marginals when given, else the
// failure-time marginals of the grid study.
gridpce::JointInput resolve_joint(const StudyConfig& cfg) {
  if (cfg.marginals) return *cfg.marginals;
  return make_grid_model(cfg)->joint();
}

gridpce::ExperimentDesign build_design(const gridpce::JointInput& joint, const PceSettings& pce) {
  const int n = pce.n_samples > 0 ? pce.n_samples : 10 * joint.dim();
  switch (gridpce::design_method_from_string(pce.method)) {
    case gridpce::DesignMethod::MCS: return gridpce::mcs_design(joint, n, pce.seed);
    case gridpce::DesignMethod::LHS: return gridpce::lhs_design(joint, n, pce.seed);
    case gridpce::DesignMethod::MmLHS:
      return gridpce::mmlhs_design(joint, n, pce.n_candidates, pce.seed);
  }
  throw gridpce::DomainError("unknown design method");
}

std::vector<std::string> column_header(int dim, const std::string& prefix) {
  std::vector<std::string> h;
  for (int j = 1; j <= dim; ++j) h.push_back(prefix + std::to_string(j));
  return h;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gridpce::InputError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

std::string out_path(const StudyConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

int cmd_design(const StudyConfig& cfg) {
  const auto joint = resolve_joint(cfg);
  const auto design = build_design(joint, cfg.pce);

  gridpce::write_csv(out_path(cfg, "design.csv"), column_header(design.dim(), "x"),
                     design.samples);
  ordered_json meta = design.metadata_json();
  meta["marginals"] = joint.to_json();
  write_json_file(out_path(cfg, "design_meta.json"), meta);
  std::cout << "wrote " << design.n() << "-sample " << to_string(design.method) << " design to "
            << out_path(cfg, "design.csv") << "\n";
  return 0;
}

int cmd_fit(const StudyConfig& cfg, const std::string& design_path,
            const std::string& outputs_path) {
  const auto joint = resolve_joint(cfg);
  const Eigen::MatrixXd samples = gridpce::read_csv_matrix(design_path);
  const Eigen::MatrixXd outputs = gridpce::read_csv_matrix(outputs_path);
  if (samples.rows() != outputs.rows())
    throw gridpce::InputError("design has " + std::to_string(samples.rows()) +
                              " rows but outputs has " + std::to_string(outputs.rows()));
  if (outputs.cols() != 1) throw gridpce::InputError("outputs CSV must have exactly one column");
  if (samples.cols() != joint.dim())
    throw gridpce::InputError("design has " + std::to_string(samples.cols()) +
                              " columns but the input model has dimension " +
                              std::to_string(joint.dim()));

  gridpce::ExperimentDesign design;
  design.joint = joint;
  design.samples = samples;
  design.quantiles.resize(samples.rows(), samples.cols());
  for (int j = 0; j < samples.cols(); ++j)
    for (int i = 0; i < samples.rows(); ++i)
      design.quantiles(i, j) = joint.marginals[static_cast<std::size_t>(j)].cdf(samples(i, j));
  design.method = gridpce::design_method_from_string(cfg.pce.method);
  design.seed = cfg.pce.seed;

  const auto basis = gridpce::qnorm_truncation(joint.dim(), cfg.pce.p, cfg.pce.q);
  std::vector<gridpce::RecurrenceCoeffs> recurrences;
  for (const auto& m : joint.marginals)
    recurrences.push_back(gridpce::stieltjes_recurrence(m, cfg.pce.p));

  gridpce::HybridLarsOptions options;
  options.early_stop_rises = cfg.pce.early_stop_rises;
  const auto model =
      gridpce::hybrid_lars_fit(design, outputs.col(0), basis, recurrences, options);

  write_json_file(out_path(cfg, "model.json"), model.to_json());
  std::cout << "fit " << model.diagnostics.n_samples << " samples, active set "
            << model.diagnostics.active_set_size << ", loo "
            << gridpce::format_double(model.diagnostics.loo_error) << ", model at "
            << out_path(cfg, "model.json") << "\n";
  return 0;
}

int cmd_moments(const StudyConfig& cfg, const std::string& model_path, int sample_n,
                std::uint64_t sample_seed, const std::string& sample_out) {
  std::ifstream in(model_path);
  if (!in) throw gridpce::InputError("cannot open model '" + model_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw gridpce::InputError("invalid model JSON: " + std::string(e.what()));
  }
  const auto model = gridpce::PceModel::from_json(j);

  const double mean = gridpce::pce_mean(model);
  const double std_dev = std::sqrt(gridpce::pce_variance(model));
  const auto report =
      gridpce::MomentReport::from(mean, std_dev, gridpce::MomentSource::PceAnalytic);

  ordered_json out = report.to_json();
  out["loo_error"] = model.diagnostics.loo_error;
  out["active_set_size"] = model.diagnostics.active_set_size;

  if (sample_n > 0) {
    const auto sample = gridpce::surrogate_sample(model, sample_n, sample_seed);
    out["surrogate"] = {{"n", sample_n},
                        {"seed", sample_seed},
                        {"robust_std", gridpce::robust_std(sample)}};
    if (!sample_out.empty()) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(sample.size()), 1);
      for (std::size_t i = 0; i < sample.size(); ++i)
        m(static_cast<Eigen::Index>(i), 0) = sample[i];
      gridpce::write_csv(sample_out, {"phi_ls"}, m);
    }
  }

  write_json_file(out_path(cfg, "moments.json"), out);
  std::cout << "mean " << gridpce::format_double(mean) << " std "
            << gridpce::format_double(std_dev) << " three_sigma_lower "
            << gridpce::format_double(report.three_sigma_lower) << "\n";
  return 0;
}

int cmd_simulate(const StudyConfig& cfg, const std::string& tau_path, bool traces) {
  const auto model = make_grid_model(cfg);
  const Eigen::MatrixXd tau = gridpce::read_csv_matrix(tau_path);
  if (tau.cols() != model->dim())
    throw gridpce::InputError("tau CSV has " + std::to_string(tau.cols()) +
                              " columns but the study exposes " + std::to_string(model->dim()) +
                              " branches");

  const int horizon = model->weather().horizon_hours;
  Eigen::MatrixXd outcomes(tau.rows(), 3);
  Eigen::MatrixXd trace_rows(tau.rows(), horizon + 1);
  for (int i = 0; i < tau.rows(); ++i) {
    const auto outcome = model->simulate(tau.row(i));
    outcomes(i, 0) = outcome.phi_ls;
    outcomes(i, 1) = outcome.load_served_mw.front();
    outcomes(i, 2) = outcome.load_served_mw.back();
    for (int t = 0; t <= horizon; ++t)
      trace_rows(i, t) = outcome.load_served_mw[static_cast<std::size_t>(t)];
  }

  gridpce::write_csv(out_path(cfg, "outcomes.csv"),
                     {"phi_ls", "served_initial_mw", "served_final_mw"}, outcomes);
  if (traces)
    gridpce::write_csv(out_path(cfg, "traces.csv"), column_header(horizon + 1, "hour"),
                       trace_rows);
  std::cout << "simulated " << tau.rows() << " events to " << out_path(cfg, "outcomes.csv")
            << "\n";
  return 0;
}

int cmd_stability(const StudyConfig& cfg) {
  const json& sj = cfg.stability;
  const std::string model_name = sj.value("model", "ishigami");

  std::unique_ptr<gridpce::StudyModel> model;
  if (model_name == "ishigami") {
    model = std::make_unique<gridpce::IshigamiModel>();
  } else if (model_name == "sparse-poly") {
    gridpce::JointInput joint(
        {gridpce::Marginal::uniform(-1, 1), gridpce::Marginal::uniform(-1, 1)});
    model = std::make_unique<gridpce::SparsePolynomialModel>(
        joint, std::vector<gridpce::SparsePolynomialModel::Term>{
                   {1.0, {0, 0}}, {2.0, {1, 0}}, {-0.5, {2, 0}}, {0.75, {1, 1}}});
  } else if (model_name == "grid") {
    model = make_grid_model(cfg);
  } else {
    throw gridpce::InputError("unknown stability model '" + model_name + "'");
  }

  gridpce::StabilityStudyConfig study;
  if (sj.contains("methods")) {
    study.methods.clear();
    for (const auto& m : sj.at("methods"))
      study.methods.push_back(gridpce::design_method_from_string(m.get<std::string>()));
  }
  if (sj.contains("sample_sizes"))
    study.sample_sizes = sj.at("sample_sizes").get<std::vector<int>>();
  study.replicates = sj.value("replicates", study.replicates);
  study.pce_degree = sj.value("p", study.pce_degree);
  study.pce_qnorm = sj.value("q", study.pce_qnorm);
  study.n_candidates = sj.value("n_candidates", study.n_candidates);
  study.oracle_samples = sj.value("oracle_n", study.oracle_samples);
  study.seed = sj.value("seed", 12345);
  study.workers = cfg.workers;

  const auto report = gridpce::run_study(*model, study);

  // Figs. 5-6 shaped series: one row per (method, N_S).
  std::ofstream series(out_path(cfg, "stability_series.csv"), std::ios::binary);
  series << "method,n_samples,mean_of_means,std_of_means,mean_of_stds,std_of_stds,"
            "ref_mean,ref_std,n_failed\n";
  for (const auto& cell : report.cells) {
    series << to_string(cell.method) << ',' << cell.n_samples << ','
           << gridpce::format_double(cell.mean_of_means) << ','
           << gridpce::format_double(cell.std_of_means) << ','
           << gridpce::format_double(cell.mean_of_stds) << ','
           << gridpce::format_double(cell.std_of_stds) << ','
           << gridpce::format_double(report.reference.mean) << ','
           << gridpce::format_double(report.reference.robust_std_dev) << ',' << cell.n_failed
           << '\n';
  }
  series.close();

  // Table I/II shaped comparison: relative errors against the oracle.
  std::ofstream errors(out_path(cfg, "stability_errors.csv"), std::ios::binary);
  errors << "method,n_samples,err_mean,err_std,n_failed\n";
  for (const auto& cell : report.cells)
    errors << to_string(cell.method) << ',' << cell.n_samples << ','
           << gridpce::format_double(cell.err_mean) << ','
           << gridpce::format_double(cell.err_std) << ',' << cell.n_failed << '\n';
  errors.close();

  std::cout << "stability report (" << report.cells.size() << " cells) in " << cfg.output_dir
            << "; oracle mean " << gridpce::format_double(report.reference.mean)
            << " robust std " << gridpce::format_double(report.reference.robust_std_dev) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic power-system resilience assessment via sparse PCE surrogates"};
  app.require_subcommand(1);

  std::string config_path;
  std::string design_path, outputs_path, model_path, tau_path, sample_out;
  int sample_n = 0;
  std::uint64_t sample_seed = 1;
  bool traces = false;

  // flag overrides applied on top of the config file
  std::optional<std::string> method_override, out_override;
  std::optional<int> n_override, nc_override, p_override;
  std::optional<double> q_override;
  std::optional<std::uint64_t> seed_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "study config JSON")->required();
    cmd->add_option("--out", out_override, "output directory (overrides config)");
    cmd->add_option("--method", method_override, "design method: mcs|lhs|mmlhs");
    cmd->add_option("--n", n_override, "number of samples");
    cmd->add_option("--n-candidates", nc_override, "MmLHS candidate pool size");
    cmd->add_option("--seed", seed_override, "master seed");
    cmd->add_option("--p", p_override, "PCE total degree bound");
    cmd->add_option("--q", q_override, "q-norm truncation parameter");
  };

  auto* design_cmd = app.add_subcommand("design", "generate an experiment design");
  add_common(design_cmd);

  auto* fit_cmd = app.add_subcommand("fit", "fit a sparse PCE to design/output files");
  add_common(fit_cmd);
  fit_cmd->add_option("--design", design_path, "design CSV")->required();
  fit_cmd->add_option("--outputs", outputs_path, "model outputs CSV (one column)")->required();

  auto* moments_cmd = app.add_subcommand("moments", "moments of a fitted PCE");
  add_common(moments_cmd);
  moments_cmd->add_option("--model", model_path, "model JSON")->required();
  moments_cmd->add_option("--sample-n", sample_n, "surrogate sample size (0 = skip)");
  moments_cmd->add_option("--sample-seed", sample_seed, "surrogate sample seed");
  moments_cmd->add_option("--sample-out", sample_out, "surrogate sample CSV path");

  auto* simulate_cmd = app.add_subcommand("simulate", "run cascade events from tau rows");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--tau", tau_path, "failure-time CSV, one event per row")->required();
  simulate_cmd->add_flag("--traces", traces, "also write per-hour load-served traces");

  auto* stability_cmd = app.add_subcommand("stability", "replicate stability study");
  add_common(stability_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    StudyConfig cfg = load_config(config_path);
    if (out_override) cfg.output_dir = *out_override;
    if (method_override) cfg.pce.method = *method_override;
    if (n_override) {
      if (*n_override < 1) throw gridpce::DomainError("--n must be at least 1");
      cfg.pce.n_samples = *n_override;
    }
    if (nc_override) cfg.pce.n_candidates = *nc_override;
    if (seed_override) cfg.pce.seed = *seed_override;
    if (p_override) cfg.pce.p = *p_override;
    if (q_override) cfg.pce.q = *q_override;

    if (design_cmd->parsed()) return cmd_design(cfg);
    if (fit_cmd->parsed()) return cmd_fit(cfg, design_path, outputs_path);
    if (moments_cmd->parsed())
      return cmd_moments(cfg, model_path, sample_n, sample_seed, sample_out);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, tau_path, traces);
    if (stability_cmd->parsed()) return cmd_stability(cfg);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const gridpce::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gridpce::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const gridpce::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
