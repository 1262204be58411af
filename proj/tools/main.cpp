// Command-line front end: CSV in, JSON (or CSV matrices) out, one
// subcommand per method plus seeded example-dataset generation.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "hdts/coint.hpp"
#include "hdts/cp.hpp"
#include "hdts/dgp.hpp"
#include "hdts/factor.hpp"
#include "hdts/forecast.hpp"
#include "hdts/inference.hpp"
#include "hdts/io.hpp"
#include "hdts/pca.hpp"
#include "hdts/series.hpp"

using json = nlohmann::ordered_json;

namespace {

json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

struct OutputOptions {
  std::string out;      // JSON destination; empty = stdout
  std::string format = "json";
  std::string out_dir;  // required for format = csv
};

void add_output_flags(CLI::App* cmd, OutputOptions* opts) {
  cmd->add_option("--out", opts->out, "write the JSON result to this path");
  cmd->add_option("--format", opts->format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out-dir", opts->out_dir,
                  "directory for CSV matrix outputs (format = csv)");
}

// With format = csv, matrix-valued results go to one CSV per matrix and the
// JSON carries the file names instead.
void emit_result(const OutputOptions& opts, const std::string& method,
                 json params, json result,
                 const std::vector<std::pair<std::string, Eigen::MatrixXd>>& matrices,
                 double timing_ms, std::optional<std::uint64_t> seed) {
  if (opts.format == "csv") {
    if (opts.out_dir.empty()) {
      hdts::fail(hdts::ErrorKind::InvalidArgument, "--format csv requires --out-dir");
    }
    for (const auto& [name, matrix] : matrices) {
      const std::string path = opts.out_dir + "/" + name + ".csv";
      hdts::write_matrix_csv(path, matrix);
      result[name] = path;
    }
  } else {
    for (const auto& [name, matrix] : matrices) {
      result[name] = matrix_to_json(matrix);
    }
  }

  json doc;
  doc["method"] = method;
  doc["params"] = std::move(params);
  doc["result"] = std::move(result);
  doc["timing_ms"] = timing_ms;
  if (seed) doc["seed"] = *seed;

  if (opts.out.empty()) {
    std::cout << doc.dump(2) << std::endl;
  } else {
    std::ofstream out(opts.out);
    if (!out) hdts::fail(hdts::ErrorKind::DataError, "cannot write '" + opts.out + "'");
    out << doc.dump(2) << '\n';
  }
}

json groups_to_json(const std::vector<std::vector<int>>& groups) {
  json out = json::array();
  for (const auto& g : groups) {
    json one = json::array();
    for (int v : g) one.push_back(v + 1);  // 1-based in the emitted document
    out.push_back(std::move(one));
  }
  return out;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int default_threads() {
  if (const char* env = std::getenv("HDTS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device device;
  return (std::uint64_t(device()) << 32) ^ device();
}

struct CommonInput {
  std::string input;
  std::optional<bool> has_header;
};

void add_input_flags(CLI::App* cmd, CommonInput* in) {
  cmd->add_option("--input", in->input, "input CSV path")->required();
  cmd->add_flag_callback(
      "--has-header", [in]() { in->has_header = true; },
      "treat the first row as column names (default: sniff)");
  cmd->add_flag_callback(
      "--no-header", [in]() { in->has_header = false; },
      "treat every row as data");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"high-dimensional time series toolkit"};
  app.require_subcommand(1);

  // ---- factors / hdsreg ----------------------------------------------
  struct {
    CommonInput in;
    std::string regressors;
    std::string d_path;
    int lag_k = 5;
    bool thresh = false;
    std::optional<double> delta;
    bool two_step = false;
    int predict = 0;
    OutputOptions out;
  } fac;

  const auto add_factor_flags = [&](CLI::App* cmd) {
    add_input_flags(cmd, &fac.in);
    cmd->add_option("--lag-k", fac.lag_k, "number of lags K");
    cmd->add_flag("--thresh", fac.thresh, "threshold the lag autocovariances");
    cmd->add_option("--delta", [&](const CLI::results_t& r) {
      fac.delta = std::stod(r[0]);
      return true;
    }, "threshold level (default 2 sqrt(log p / n))");
    cmd->add_flag("--two-step", fac.two_step, "two-step strong/weak estimation");
    cmd->add_option("--predict", fac.predict, "append an h-step forecast");
    add_output_flags(cmd, &fac.out);
  };

  CLI::App* factors_cmd = app.add_subcommand("factors", "fit the factor model");
  add_factor_flags(factors_cmd);

  CLI::App* hdsreg_cmd =
      app.add_subcommand("hdsreg", "factor model with observed regressors");
  add_factor_flags(hdsreg_cmd);
  hdsreg_cmd->add_option("--regressors", fac.regressors, "regressor CSV path")
      ->required();
  hdsreg_cmd->add_option("--d", fac.d_path, "known regression coefficient CSV");

  // ---- pca -------------------------------------------------------------
  struct {
    CommonInput in;
    int lag_k = 5;
    std::string permutation = "max";
    bool thresh = false;
    std::optional<double> delta;
    bool no_prewhiten = false;
    int m = 10;
    std::optional<double> beta;
    std::optional<double> ridge;
    int predict = 0;
    OutputOptions out;
  } pca;
  CLI::App* pca_cmd = app.add_subcommand("pca", "time series PCA segmentation");
  add_input_flags(pca_cmd, &pca.in);
  pca_cmd->add_option("--lag-k", pca.lag_k, "number of lags K");
  pca_cmd->add_option("--permutation", pca.permutation, "connectivity rule")
      ->check(CLI::IsMember({"max", "fdr"}));
  pca_cmd->add_flag("--thresh", pca.thresh, "threshold the lag autocovariances");
  pca_cmd->add_option("--delta", [&](const CLI::results_t& r) {
    pca.delta = std::stod(r[0]);
    return true;
  }, "threshold level");
  pca_cmd->add_flag("--no-prewhiten", pca.no_prewhiten,
                    "skip AR prewhitening before the connectivity tests");
  pca_cmd->add_option("--m", pca.m, "lag window of the connectivity null");
  pca_cmd->add_option("--beta", [&](const CLI::results_t& r) {
    pca.beta = std::stod(r[0]);
    return true;
  }, "FDR level (required with --permutation fdr)");
  pca_cmd->add_option("--ridge", [&](const CLI::results_t& r) {
    pca.ridge = std::stod(r[0]);
    return true;
  }, "whitening ridge (default: auto)");
  pca_cmd->add_option("--predict", pca.predict, "append an h-step forecast");
  add_output_flags(pca_cmd, &pca.out);

  // ---- cp ----------------------------------------------------------------
  struct {
    std::string input;
    std::vector<Eigen::Index> reshape;
    std::string method = "refined";
    std::string xi_path;
    int lag_k = 20;
    bool thresh1 = false, thresh2 = false;
    std::optional<double> delta1, delta2;
    int predict = 0;
    OutputOptions out;
  } cp;
  CLI::App* cp_cmd = app.add_subcommand("cp", "CP decomposition of a matrix series");
  cp_cmd->add_option("--input", cp.input,
                     "long-format CSV (t,i,j,value), or a wide CSV with --reshape")
      ->required();
  cp_cmd->add_option("--reshape", cp.reshape,
                     "p q: reshape a wide n x (p*q) CSV into matrix slices")
      ->expected(2);
  cp_cmd->add_option("--method", cp.method, "estimation method")
      ->check(CLI::IsMember({"direct", "refined"}));
  cp_cmd->add_option("--xi", cp.xi_path, "CSV with a custom projection series xi");
  cp_cmd->add_option("--lag-k", cp.lag_k, "number of lags K (refined method)");
  cp_cmd->add_flag("--thresh1", cp.thresh1, "threshold the xi cross covariances");
  cp_cmd->add_flag("--thresh2", cp.thresh2, "threshold the refined step (method refined)");
  cp_cmd->add_option("--delta1", [&](const CLI::results_t& r) {
    cp.delta1 = std::stod(r[0]);
    return true;
  }, "threshold level 1");
  cp_cmd->add_option("--delta2", [&](const CLI::results_t& r) {
    cp.delta2 = std::stod(r[0]);
    return true;
  }, "threshold level 2");
  cp_cmd->add_option("--predict", cp.predict, "append h forecast slices");
  add_output_flags(cp_cmd, &cp.out);

  // ---- coint --------------------------------------------------------------
  struct {
    CommonInput in;
    int lag_k = 5;
    std::string type = "acf";
    double c0 = 0.3;
    int m = 20;
    double alpha = 0.01;
    OutputOptions out;
  } coint;
  CLI::App* coint_cmd = app.add_subcommand("coint", "cointegration analysis");
  add_input_flags(coint_cmd, &coint.in);
  coint_cmd->add_option("--lag-k", coint.lag_k, "number of lags K");
  coint_cmd->add_option("--type", coint.type, "rank estimation method")
      ->check(CLI::IsMember({"acf", "urtest", "both"}));
  coint_cmd->add_option("--c0", coint.c0, "mean-ACF classification threshold");
  coint_cmd->add_option("--m", coint.m, "number of lags in the mean ACF");
  coint_cmd->add_option("--alpha", coint.alpha, "unit-root test level");
  add_output_flags(coint_cmd, &coint.out);

  // ---- wn-test / mds-test ---------------------------------------------
  struct {
    CommonInput in;
    int lag_k = 2;
    int reps = 1000;
    std::string kernel = "qs";
    std::optional<double> bandwidth;
    double alpha = 0.05;
    bool pre_pca = false;
    std::string map = "linear";
    std::optional<std::uint64_t> seed;
    int threads = default_threads();
    OutputOptions out;
  } tst;

  const auto add_test_flags = [&](CLI::App* cmd) {
    add_input_flags(cmd, &tst.in);
    cmd->add_option("--lag-k", tst.lag_k, "number of lags K");
    cmd->add_option("--B", tst.reps, "bootstrap replications");
    cmd->add_option("--kernel", tst.kernel, "multiplier kernel")
        ->check(CLI::IsMember({"qs", "par", "bart"}));
    cmd->add_option("--bandwidth", [&](const CLI::results_t& r) {
      tst.bandwidth = std::stod(r[0]);
      return true;
    }, "kernel bandwidth (default: Andrews plug-in)");
    cmd->add_option("--alpha", tst.alpha, "test level");
    cmd->add_option("--seed", [&](const CLI::results_t& r) {
      tst.seed = std::stoull(r[0]);
      return true;
    }, "bootstrap seed (default: OS entropy, echoed)");
    cmd->add_option("--threads", tst.threads, "bootstrap worker count");
    add_output_flags(cmd, &tst.out);
  };

  CLI::App* wn_cmd = app.add_subcommand("wn-test", "high-dimensional white noise test");
  add_test_flags(wn_cmd);
  wn_cmd->add_flag("--pre-pca", tst.pre_pca, "apply PCA segmentation first");

  CLI::App* mds_cmd =
      app.add_subcommand("mds-test", "martingale difference test");
  add_test_flags(mds_cmd);
  mds_cmd->add_option("--map", tst.map, "data map: linear, quad or file:<csv>");

  // ---- forecast -------------------------------------------------------
  struct {
    CommonInput in;
    int steps = 1;
    int max_order = -1;  // default 5 univariate, 6 multivariate
    OutputOptions out;
  } fc;
  CLI::App* fc_cmd = app.add_subcommand("forecast", "AR/VAR forecast with AIC order");
  add_input_flags(fc_cmd, &fc.in);
  fc_cmd->add_option("--steps", fc.steps, "forecast horizon");
  fc_cmd->add_option("--max-order", fc.max_order, "maximum lag order");
  add_output_flags(fc_cmd, &fc.out);

  // ---- dgp ------------------------------------------------------------
  struct {
    int example = 1;
    std::optional<Eigen::Index> n, p;
    Eigen::Index q = 10;
    int d = 3, d1 = 3, d2 = 3;
    bool weak = false;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string regressors_out;
    std::string truth_out;
    OutputOptions out;
  } dgp;
  CLI::App* dgp_cmd = app.add_subcommand("dgp", "generate a simulated example dataset");
  dgp_cmd->add_option("--example", dgp.example, "design id (1,2,3,5,6; 4 = matrix series)")
      ->required();
  dgp_cmd->add_option("--n", [&](const CLI::results_t& r) {
    dgp.n = std::stol(r[0]);
    return true;
  }, "sample size override");
  dgp_cmd->add_option("--p", [&](const CLI::results_t& r) {
    dgp.p = std::stol(r[0]);
    return true;
  }, "dimension override");
  dgp_cmd->add_option("--q", dgp.q, "column dimension (example 4)");
  dgp_cmd->add_option("--d", dgp.d, "number of CP factors (example 4)");
  dgp_cmd->add_option("--d1", dgp.d1, "rank of A (example 4)");
  dgp_cmd->add_option("--d2", dgp.d2, "rank of B (example 4)");
  dgp_cmd->add_flag("--weak", dgp.weak, "example 1: weaken the third factor");
  dgp_cmd->add_option("--seed", [&](const CLI::results_t& r) {
    dgp.seed = std::stoull(r[0]);
    return true;
  }, "generator seed (default: OS entropy, echoed)");
  dgp_cmd->add_option("--out", dgp.out_path, "observations CSV path")->required();
  dgp_cmd->add_option("--regressors-out", dgp.regressors_out,
                      "regressor CSV path (example 2)");
  dgp_cmd->add_option("--truth-out", dgp.truth_out, "ground-truth JSON path");

  CLI11_PARSE(app, argc, argv);

  // ---------------------------------------------------------------------
  if (factors_cmd->parsed() || hdsreg_cmd->parsed()) {
    const bool with_reg = hdsreg_cmd->parsed();
    Timer timer;
    const hdts::Series series = hdts::read_series_csv(fac.in.input, fac.in.has_header);
    hdts::FactorOptions options;
    options.lag_k = fac.lag_k;
    options.thresh = fac.thresh;
    options.delta = fac.delta;
    options.two_step = fac.two_step;

    json params{{"input", fac.in.input}, {"lag_k", fac.lag_k},
                {"thresh", fac.thresh},  {"two_step", fac.two_step},
                {"predict", fac.predict}};
    if (fac.delta) params["delta"] = *fac.delta;

    hdts::FactorFit fit;
    std::vector<std::pair<std::string, Eigen::MatrixXd>> matrices;
    if (with_reg) {
      params["regressors"] = fac.regressors;
      const hdts::Series z = hdts::read_series_csv(fac.regressors, fac.in.has_header);
      std::optional<Eigen::MatrixXd> d;
      if (!fac.d_path.empty()) {
        params["d"] = fac.d_path;
        d = hdts::read_series_csv(fac.d_path, false).data();
      }
      hdts::RegFactorFit reg = hdts::fit_factors_with_regressors(series, z, d, options);
      fit = std::move(reg.fit);
      matrices.emplace_back("reg_coef", std::move(reg.reg_coef));
    } else {
      fit = hdts::fit_factors(series, options);
    }

    json result{{"factor_num", fit.factor_num}};
    if (fit.step_split) {
      result["step_split"] = json::array({fit.step_split->first, fit.step_split->second});
    }
    matrices.emplace_back("loading", fit.loading);
    matrices.emplace_back("factors", fit.factors);
    if (fac.predict > 0) {
      matrices.emplace_back("forecast", hdts::predict_factors(fit, fac.predict));
    }
    emit_result(fac.out, with_reg ? "hdsreg" : "factors", params, result, matrices,
                timer.ms(), std::nullopt);
    return 0;
  }

  if (pca_cmd->parsed()) {
    Timer timer;
    const hdts::Series series = hdts::read_series_csv(pca.in.input, pca.in.has_header);
    hdts::PcaOptions options;
    options.lag_k = pca.lag_k;
    options.permutation =
        pca.permutation == "max" ? hdts::Permutation::max_cc : hdts::Permutation::fdr;
    options.thresh = pca.thresh;
    options.delta = pca.delta;
    options.prewhiten = !pca.no_prewhiten;
    options.m = pca.m;
    options.beta = pca.beta;
    options.ridge = pca.ridge;

    json params{{"input", pca.in.input},   {"lag_k", pca.lag_k},
                {"permutation", pca.permutation}, {"thresh", pca.thresh},
                {"prewhiten", !pca.no_prewhiten}, {"m", pca.m},
                {"predict", pca.predict}};
    if (pca.delta) params["delta"] = *pca.delta;
    if (pca.beta) params["beta"] = *pca.beta;
    if (pca.ridge) params["ridge"] = *pca.ridge;

    const hdts::SegmentationFit fit = hdts::segment(series, options);
    json result{{"NoGroups", fit.groups.size()},
                {"groups", groups_to_json(fit.groups)}};
    json sizes = json::array();
    for (const auto& g : fit.groups) sizes.push_back(g.size());
    result["group_sizes"] = sizes;
    json pairs = json::array();
    for (const auto& [i, j] : fit.connected_pairs) {
      pairs.push_back(json::array({i + 1, j + 1}));
    }
    result["connected_pairs"] = pairs;

    std::vector<std::pair<std::string, Eigen::MatrixXd>> matrices;
    matrices.emplace_back("B", fit.B);
    matrices.emplace_back("X", fit.X);
    if (pca.predict > 0) {
      matrices.emplace_back("forecast", hdts::predict_segments(fit, pca.predict));
    }
    emit_result(pca.out, "pca", params, result, matrices, timer.ms(), std::nullopt);
    return 0;
  }

  if (cp_cmd->parsed()) {
    Timer timer;
    hdts::MatrixSeries series;
    if (!cp.reshape.empty()) {
      series = hdts::reshape_series(hdts::read_series_csv(cp.input, std::nullopt),
                                    cp.reshape[0], cp.reshape[1]);
    } else {
      series = hdts::read_matrix_series_csv(cp.input);
    }
    hdts::CpOptions options;
    options.lag_k = cp.lag_k;
    options.thresh1 = cp.thresh1;
    options.thresh2 = cp.thresh2;
    options.delta1 = cp.delta1;
    options.delta2 = cp.delta2;
    if (!cp.xi_path.empty()) {
      options.xi = hdts::read_series_csv(cp.xi_path, false).data().col(0);
    }

    json params{{"input", cp.input},   {"method", cp.method},
                {"lag_k", cp.lag_k},   {"thresh1", cp.thresh1},
                {"thresh2", cp.thresh2}, {"predict", cp.predict}};
    if (!cp.reshape.empty()) params["reshape"] = json::array({cp.reshape[0], cp.reshape[1]});
    if (cp.delta1) params["delta1"] = *cp.delta1;
    if (cp.delta2) params["delta2"] = *cp.delta2;
    if (!cp.xi_path.empty()) params["xi"] = cp.xi_path;

    const hdts::CpFit fit = cp.method == "direct" ? hdts::cp_direct(series, options)
                                                  : hdts::cp_refined(series, options);
    json result{{"rank", fit.rank}};
    std::vector<std::pair<std::string, Eigen::MatrixXd>> matrices;
    matrices.emplace_back("A", fit.A);
    matrices.emplace_back("B", fit.B);
    matrices.emplace_back("factors", fit.factors);
    if (cp.predict > 0) {
      const auto slices = hdts::predict_cp(fit, cp.predict);
      for (std::size_t h = 0; h < slices.size(); ++h) {
        matrices.emplace_back("forecast_" + std::to_string(h + 1), slices[h]);
      }
    }
    emit_result(cp.out, "cp", params, result, matrices, timer.ms(), std::nullopt);
    return 0;
  }

  if (coint_cmd->parsed()) {
    Timer timer;
    const hdts::Series series =
        hdts::read_series_csv(coint.in.input, coint.in.has_header);
    hdts::CointOptions options;
    options.lag_k = coint.lag_k;
    options.type = coint.type == "acf"      ? hdts::CointMethod::acf
                   : coint.type == "urtest" ? hdts::CointMethod::urtest
                                            : hdts::CointMethod::both;
    options.c0 = coint.c0;
    options.m = coint.m;
    options.alpha = coint.alpha;

    json params{{"input", coint.in.input}, {"lag_k", coint.lag_k},
                {"type", coint.type},      {"c0", coint.c0},
                {"m", coint.m},            {"alpha", coint.alpha}};
    const hdts::CointFit fit = hdts::fit_coint(series, options);
    json result{{"coint_rank", fit.rank}};
    if (fit.per_method_rank) {
      result["rank_acf"] = fit.per_method_rank->first;
      result["rank_urtest"] = fit.per_method_rank->second;
    }
    std::vector<std::pair<std::string, Eigen::MatrixXd>> matrices;
    matrices.emplace_back("A", fit.A);
    emit_result(coint.out, "coint", params, result, matrices, timer.ms(),
                std::nullopt);
    return 0;
  }

  if (wn_cmd->parsed() || mds_cmd->parsed()) {
    Timer timer;
    const hdts::Series series = hdts::read_series_csv(tst.in.input, tst.in.has_header);
    const std::uint64_t seed = resolve_seed(tst.seed);
    const hdts::KernelSpec kernel{hdts::kernel_kind_from_string(tst.kernel),
                                  tst.bandwidth};

    json params{{"input", tst.in.input}, {"lag_k", tst.lag_k},
                {"B", tst.reps},         {"kernel", tst.kernel},
                {"alpha", tst.alpha},    {"threads", tst.threads},
                {"seed", seed}};

    hdts::TestOutcome outcome;
    if (wn_cmd->parsed()) {
      hdts::WnTestOptions options;
      options.lag_k = tst.lag_k;
      options.reps = tst.reps;
      options.kernel = kernel;
      options.alpha = tst.alpha;
      options.pre_pca = tst.pre_pca;
      options.seed = seed;
      options.threads = tst.threads;
      params["pre_pca"] = tst.pre_pca;
      outcome = hdts::wn_test(series, options);
    } else {
      hdts::MdsTestOptions options;
      options.lag_k = tst.lag_k;
      options.reps = tst.reps;
      options.kernel = kernel;
      options.alpha = tst.alpha;
      options.seed = seed;
      options.threads = tst.threads;
      if (tst.map == "linear") {
        options.map.kind = hdts::MdsMapKind::linear;
      } else if (tst.map == "quad") {
        options.map.kind = hdts::MdsMapKind::quad;
      } else if (tst.map.rfind("file:", 0) == 0) {
        options.map.kind = hdts::MdsMapKind::custom;
        options.map.values =
            hdts::read_series_csv(tst.map.substr(5), std::nullopt).data();
      } else {
        hdts::fail(hdts::ErrorKind::InvalidArgument,
                   "--map must be linear, quad or file:<path>");
      }
      params["map"] = tst.map;
      outcome = hdts::mds_test(series, options);
    }

    json result{{"statistic", outcome.statistic},
                {"critical_value", outcome.critical_value},
                {"p_value", outcome.p_value},
                {"reject", outcome.reject},
                {"bandwidth", outcome.kernel.bandwidth ? *outcome.kernel.bandwidth : 0.0}};
    emit_result(tst.out, wn_cmd->parsed() ? "wn-test" : "mds-test", params, result,
                {}, timer.ms(), seed);
    return 0;
  }

  if (fc_cmd->parsed()) {
    Timer timer;
    const hdts::Series series = hdts::read_series_csv(fc.in.input, fc.in.has_header);
    json params{{"input", fc.in.input}, {"steps", fc.steps}};
    json result;
    Eigen::MatrixXd forecast;
    if (series.p() == 1) {
      const int max_order = fc.max_order >= 0 ? fc.max_order : 5;
      params["max_order"] = max_order;
      const hdts::ArModel model = hdts::fit_ar_aic(series.data().col(0), max_order);
      forecast = hdts::forecast_ar(model, series.data().col(0), fc.steps);
      result["model"] = json{{"type", "ar"},
                             {"order", model.order},
                             {"coefficients", vector_to_json(model.coefficients)},
                             {"intercept", model.intercept},
                             {"aic", model.aic}};
    } else {
      const int max_order = fc.max_order >= 0 ? fc.max_order : 6;
      params["max_order"] = max_order;
      const hdts::VarModel model = hdts::fit_var_aic(series.data(), max_order);
      forecast = hdts::forecast_var(model, series.data(), fc.steps);
      result["model"] = json{{"type", "var"}, {"order", model.order}, {"aic", model.aic}};
    }
    emit_result(fc.out, "forecast", params, result, {{"forecast", forecast}},
                timer.ms(), std::nullopt);
    return 0;
  }

  if (dgp_cmd->parsed()) {
    Timer timer;
    const std::uint64_t seed = resolve_seed(dgp.seed);
    json params{{"example", dgp.example}, {"seed", seed}, {"out", dgp.out_path}};
    json truth;

    if (dgp.example == 4) {
      const Eigen::Index n = dgp.n.value_or(400);
      const Eigen::Index p = dgp.p.value_or(10);
      params["n"] = n;
      params["p"] = p;
      params["q"] = dgp.q;
      params["d"] = dgp.d;
      params["d1"] = dgp.d1;
      params["d2"] = dgp.d2;
      const hdts::CpDgp data =
          hdts::dgp_cp(n, p, dgp.q, dgp.d, dgp.d1, dgp.d2, hdts::Rng(seed));
      hdts::write_matrix_series_csv(dgp.out_path, data.series);
      truth["d"] = dgp.d;
      truth["A"] = matrix_to_json(data.A);
      truth["B"] = matrix_to_json(data.B);
    } else {
      hdts::ExampleConfig config;
      config.id = dgp.example;
      config.n = dgp.n;
      config.p = dgp.p;
      config.weak_third_factor = dgp.weak;
      params["weak"] = dgp.weak;
      if (dgp.n) params["n"] = *dgp.n;
      if (dgp.p) params["p"] = *dgp.p;
      const hdts::ExampleData data = hdts::make_example(config, hdts::Rng(seed));
      hdts::write_matrix_csv(dgp.out_path, data.observations.data());
      if (data.regressors) {
        if (dgp.regressors_out.empty()) {
          hdts::fail(hdts::ErrorKind::InvalidArgument,
                     "example 2 needs --regressors-out");
        }
        hdts::write_matrix_csv(dgp.regressors_out, data.regressors->data());
        params["regressors_out"] = dgp.regressors_out;
      }
      if (data.true_factor_num) truth["factor_num"] = *data.true_factor_num;
      if (data.true_reg_coef) truth["reg_coef"] = matrix_to_json(*data.true_reg_coef);
      if (data.true_groups) truth["groups"] = groups_to_json(*data.true_groups);
      if (data.true_coint_rank) truth["coint_rank"] = *data.true_coint_rank;
    }

    if (!dgp.truth_out.empty()) {
      std::ofstream out(dgp.truth_out);
      if (!out) {
        hdts::fail(hdts::ErrorKind::DataError, "cannot write '" + dgp.truth_out + "'");
      }
      out << truth.dump(2) << '\n';
      params["truth_out"] = dgp.truth_out;
    }
    emit_result(dgp.out, "dgp", params, json{{"written", dgp.out_path}}, {},
                timer.ms(), seed);
    return 0;
  }

  return 0;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const hdts::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_data_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
