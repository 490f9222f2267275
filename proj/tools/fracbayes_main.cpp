/*
 * Copyright 2026 The fracbayes authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "fracbayes/csv.hpp"
#include "fracbayes/density_regression.hpp"
#include "fracbayes/divergence.hpp"
#include "fracbayes/harness.hpp"
#include "fracbayes/identifiability.hpp"
#include "fracbayes/kernel_spectra.hpp"
#include "fracbayes/model_space.hpp"
#include "fracbayes/version.hpp"

namespace {

using nlohmann::json;
namespace fb = fracbayes;

std::uint64_t seed_with_env(std::uint64_t seed) {
  if (const char* env = std::getenv("FRACBAYES_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return seed;
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  f >> j;
  return j;
}

fb::Density parse_density(const json& j) {
  std::string family = j.at("family").get<std::string>();
  if (family == "normal") {
    return fb::normal_density(j.at("mu").get<double>(), j.at("sd").get<double>());
  }
  if (family == "uniform") {
    return fb::uniform_density(j.at("lo").get<double>(), j.at("hi").get<double>());
  }
  if (family == "mixture") {
    return fb::gaussian_mixture_density(j.at("w1").get<double>(), j.at("mu1").get<double>(),
                                        j.at("sd1").get<double>(), j.at("mu2").get<double>(),
                                        j.at("sd2").get<double>());
  }
  throw std::runtime_error("unknown density family '" + family + "'");
}

std::ofstream open_out(const std::string& path) {
  if (auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
    std::filesystem::create_directories(dir);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

int cmd_divergence(const std::string& spec_path, const std::string& out_path) {
  json j = load_json(spec_path);
  fb::Density p = parse_density(j.at("p"));
  fb::Density q = parse_density(j.at("q"));
  std::string measure = j.at("measure").get<std::string>();
  std::optional<double> alpha;
  if (j.contains("alpha")) alpha = j.at("alpha").get<double>();
  fb::DivergenceValue v = fb::compute_divergence(measure, p, q, alpha);
  std::ofstream f = open_out(out_path);
  f << "measure,value,se,estimator\n";
  if (v.is_infinite()) {
    f << measure << ",inf,0,quadrature\n";
  } else {
    f << measure << ',' << fb::format_double(v.value()) << ','
      << fb::format_double(v.standard_error()) << ','
      << (v.kind() == fb::EstimatorKind::kQuadrature ? "quadrature" : "monte-carlo") << '\n';
  }
  return 0;
}

int cmd_kernel_spectrum(const std::string& family, double a, double nu, int m,
                        const std::string& out_path) {
  fb::StationaryKernel kernel = (family == "se") ? fb::squared_exponential_kernel(a)
                                                 : fb::matern_kernel(a, nu);
  fb::EigenSystem eig = fb::eigensystem(kernel, static_cast<std::size_t>(m));
  std::ofstream f = open_out(out_path);
  f << "index,eigenvalue,eigenfunction_id,asymptotic_comparator,ratio\n";
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    int mode = eig.fourier_mode[i];
    double comp = std::numeric_limits<double>::quiet_NaN();
    try {
      comp = fb::asymptotic_eigenvalue(kernel, mode);
    } catch (const std::out_of_range&) {
      // beyond the comparator's stated validity; leave NaN
    }
    double ratio = (comp > 0.0 && !std::isnan(comp)) ? eig.values[i] / comp
                                                     : std::numeric_limits<double>::quiet_NaN();
    f << i << ',' << fb::format_double(eig.values[i]) << ','
      << fb::EigenSystem::eigenfunction_id(i) << ',' << fb::format_double(comp) << ','
      << fb::format_double(ratio) << '\n';
  }
  return 0;
}

int cmd_complexity(const std::string& cfg_path, const std::string& out_path) {
  json j = load_json(cfg_path);
  double prior_sd = j.value("prior_sd", 1.0);
  double truth = j.value("truth", 0.0);
  double sigma = j.value("sigma", 1.0);
  int n = j.at("n").get<int>();
  std::size_t n_mc = j.value("n_mc", std::size_t{200000});
  std::uint64_t seed = seed_with_env(j.value("seed", std::uint64_t{1}));
  std::vector<double> eps_grid;
  if (j.contains("eps_grid")) {
    eps_grid = j.at("eps_grid").get<std::vector<double>>();
  } else {
    for (int i = 0; i < 20; ++i) eps_grid.push_back(0.01 * (i + 1));
  }
  // Gaussian location model: constant functions theta at the design points
  fb::PriorFunctionSampler sampler = [n, prior_sd](fb::Rng& rng) {
    return std::vector<double>(static_cast<std::size_t>(n), prior_sd * rng.normal());
  };
  std::vector<double> star(static_cast<std::size_t>(n), truth);
  fb::ComplexityProfile profile(sampler, star, sigma, n_mc, seed);
  std::ofstream f = open_out(out_path);
  f << "eps,mass,se,complexity,censored\n";
  for (const fb::ComplexityEstimate& e : profile.on_grid(eps_grid)) {
    f << fb::format_double(e.eps) << ',' << fb::format_double(e.mass) << ','
      << fb::format_double(e.mass_se) << ',' << fb::format_double(e.complexity) << ','
      << (e.censored ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_delta(const std::string& cfg_path, const std::string& out_path) {
  json j = load_json(cfg_path);
  fb::RegressionTruth rt;
  rt.name = j.at("truth").get<std::string>();
  if (j.contains("support")) rt.support = j.at("support").get<std::vector<int>>();
  if (j.contains("constant_value")) rt.constant_value = j.at("constant_value").get<double>();
  int p = j.value("p", 2);
  int trunc = j.value("trunc", 32);
  std::size_t n_outer = j.value("n_outer", std::size_t{20000});
  std::size_t n_inner = j.value("n_inner", std::size_t{256});
  std::uint64_t seed = seed_with_env(j.value("seed", std::uint64_t{1}));
  fb::TruthSpec truth = rt.to_spec(p, 1.0);
  fb::DeltaBasisResult basis = fb::delta_basis(truth, trunc);
  fb::DeltaMcResult mc = fb::delta_mc(truth, n_outer, n_inner, seed);
  std::ofstream f = open_out(out_path);
  f << "coordinate,basis_conditional_var,mc_conditional_var,mc_se\n";
  for (int c = 0; c < truth.support.size(); ++c) {
    f << truth.support.indices()[c] << ',' << fb::format_double(basis.per_coordinate_sq[c]) << ','
      << fb::format_double(mc.per_coordinate_sq[c]) << ','
      << fb::format_double(mc.per_coordinate_se[c]) << '\n';
  }
  f << "delta_sq," << fb::format_double(basis.delta_sq) << ',' << fb::format_double(mc.delta_sq)
    << ',' << fb::format_double(mc.se) << '\n';
  f << "parseval_tail," << fb::format_double(basis.parseval_tail) << ",0,0\n";
  return 0;
}

void write_models_csv(const fb::ModelPosterior& post, int p, int d0, const std::string& path) {
  double z = fb::gpvs_prior_normalizer(p, d0);
  std::ofstream f = open_out(path);
  f << "subset,log_evidence,prior,posterior\n";
  for (const auto& e : post.entries) {
    f << e.index.to_string() << ',' << fb::format_double(e.log_prior + e.log_marginal) << ','
      << fb::format_double(std::exp(e.log_prior) / z) << ',' << fb::format_double(e.probability)
      << '\n';
  }
}

int cmd_gpvs_run(const std::string& cfg_path, const std::string& out_dir) {
  json j = load_json(cfg_path);
  int p = j.at("p").get<int>();
  int d0 = j.at("d0").get<int>();
  int n = j.at("n").get<int>();
  double alpha = j.value("alpha", 1.0);
  std::uint64_t seed = seed_with_env(j.value("seed", std::uint64_t{1}));
  std::string sampler = j.value("sampler", std::string("enumerate"));
  std::size_t iters = j.value("iters", std::size_t{50000});

  fb::RegressionTruth rt;
  if (j.contains("truth")) {
    rt.name = j.at("truth").get<std::string>();
    if (j.contains("support")) rt.support = j.at("support").get<std::vector<int>>();
  }
  fb::GpConfig gp;
  gp.noise_sd = j.value("noise_sd", 0.5);
  gp.smoothness = j.value("smoothness", 1.0);
  gp.bandwidth_grid = j.value("bandwidth_grid", 64);
  fb::TruthSpec truth = rt.to_spec(p, gp.smoothness);
  fb::RegressionData data = fb::generate_regression_data(truth, n, gp.noise_sd, seed);

  fb::ModelPosterior post =
      sampler == "mcmc"
          ? fb::mcmc_posterior(data, p, d0, gp, alpha, iters, fb::Rng::mix(seed, 2))
          : fb::enumerate_posterior(data, p, d0, gp, alpha);
  std::filesystem::create_directories(out_dir);
  write_models_csv(post, p, d0, out_dir + "/models.csv");
  json diag;
  diag["estimator"] = post.estimator == fb::PosteriorEstimator::kExact ? "exact" : "mcmc";
  diag["alpha"] = post.alpha;
  diag["iterations"] = post.iterations;
  diag["acceptance_rate"] = post.acceptance_rate;
  diag["mode"] = post.mode().to_string();
  diag["version"] = fb::kVersion;
  std::ofstream f = open_out(out_dir + "/diagnostics.json");
  f << diag.dump(2) << '\n';
  return 0;
}

int cmd_drvs_run(const std::string& cfg_path, const std::string& out_dir) {
  json j = load_json(cfg_path);
  int p = j.at("p").get<int>();
  int d0 = j.at("d0").get<int>();
  int n = j.at("n").get<int>();
  std::uint64_t seed = seed_with_env(j.value("seed", std::uint64_t{1}));

  fb::DrvsTruth truth;
  truth.separation = j.value("separation", 1.2);
  truth.gate_slope = j.value("gate_slope", 8.0);
  truth.noise_sd = j.value("noise_sd", 0.3);
  truth.support = j.value("support", 1);
  fb::DrvsHyper hyper;
  hyper.restriction_b = j.value("restriction_b", 0.5);
  hyper.dirichlet_a = j.value("dirichlet_a", 1.0);
  fb::DrvsModelPosteriorConfig cfg;
  cfg.m = j.value("m", 5);
  cfg.sigma = j.value("sigma", 0.3);
  cfg.alpha = j.value("alpha", 1.0);
  cfg.n_draws = j.value("n_draws", std::size_t{20000});

  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  fb::generate_drvs_data(truth, p, n, seed, &x, &y);
  fb::ModelPosterior post =
      fb::drvs_model_posterior(x, y, p, d0, hyper, cfg, fb::Rng::mix(seed, 3));
  std::filesystem::create_directories(out_dir);
  write_models_csv(post, p, d0, out_dir + "/models.csv");

  // thinned posterior chain on the mode model
  std::size_t iters = j.value("chain_iters", std::size_t{20000});
  fb::ModelIndex mode = post.mode();
  fb::DrvsChain chain = fb::drvs_posterior_sampler(x, y, mode, cfg.m, cfg.sigma, hyper,
                                                   cfg.alpha, iters, fb::Rng::mix(seed, 4));
  std::ofstream f = open_out(out_dir + "/mixture_draws.csv");
  f << "draw,component,weight,mu_y";
  for (int c = 0; c < mode.size(); ++c) f << ",mu_x" << (c + 1);
  f << '\n';
  for (std::size_t d = 0; d < chain.draws.size(); ++d) {
    const fb::MixtureParams& mp = chain.draws[d];
    for (int c = 0; c < mp.m(); ++c) {
      f << d << ',' << c << ',' << fb::format_double(mp.weights[c]) << ','
        << fb::format_double(mp.y_locations[c]);
      for (int k = 0; k < mode.size(); ++k) f << ',' << fb::format_double(mp.x_locations[c][k]);
      f << '\n';
    }
  }
  return 0;
}

int cmd_experiment(const std::string& cfg_path, int workers_override,
                   const std::string& out_override) {
  fb::ExperimentConfig cfg = fb::load_experiment_config(cfg_path);
  if (workers_override > 0) cfg.workers = workers_override;
  if (!out_override.empty()) cfg.out_dir = out_override;
  fb::ExperimentResult result;
  switch (cfg.kind) {
    case fb::ExperimentKind::kConsistency:
      result = fb::run_consistency(cfg);
      break;
    case fb::ExperimentKind::kRate:
      result = fb::run_rate(cfg);
      break;
    default:
      throw std::runtime_error("experiment kind not runnable through this subcommand");
  }
  fb::write_result(result, cfg.out_dir);
  std::cout << "cells=" << result.rows.size() << " errored=" << result.errored_cells
            << " wall=" << result.wall_seconds << "s -> " << cfg.out_dir << '\n';
  return result.errored_cells == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracbayes: fractional-posterior Bayesian model selection toolkit"};
  app.set_version_flag("--version", fracbayes::kVersion);
  app.require_subcommand(1);

  std::string spec_path, out_path = "divergence.csv";
  auto* div = app.add_subcommand("divergence", "evaluate a discrepancy measure between densities");
  div->add_option("--spec", spec_path, "JSON spec with p, q, measure, optional alpha")->required();
  div->add_option("--out", out_path, "output CSV path");

  std::string family = "se";
  double a = 2.0, nu = 1.5;
  int m = 50;
  std::string ks_out = "kernel_spectrum.csv";
  auto* ks = app.add_subcommand("kernel-spectrum", "Fourier eigensystem of a stationary kernel");
  ks->add_option("--family", family, "se | matern");
  ks->add_option("--a", a, "inverse bandwidth");
  ks->add_option("--nu", nu, "Matern smoothness");
  ks->add_option("--m", m, "number of eigenvalues");
  ks->add_option("--out", ks_out, "output CSV path");

  std::string cx_cfg, cx_out = "complexity.csv";
  auto* cx = app.add_subcommand("complexity", "local Bayesian complexity profile");
  cx->add_option("--config", cx_cfg)->required();
  cx->add_option("--out", cx_out);

  std::string dl_cfg, dl_out = "delta.csv";
  auto* dl = app.add_subcommand("delta", "identifiability gap, two estimators");
  dl->add_option("--config", dl_cfg)->required();
  dl->add_option("--out", dl_out);

  std::string gp_cfg, gp_out = "gpvs_out";
  auto* gp = app.add_subcommand("gpvs-run", "GP variable-selection posterior over subsets");
  gp->add_option("--config", gp_cfg)->required();
  gp->add_option("--out", gp_out);

  std::string dr_cfg, dr_out = "drvs_out";
  auto* dr = app.add_subcommand("drvs-run", "density-regression variable selection");
  dr->add_option("--config", dr_cfg)->required();
  dr->add_option("--out", dr_out);

  std::string ex_cfg, ex_out;
  int workers = 0;
  auto* ex = app.add_subcommand("experiment", "batch experiment grid");
  ex->add_option("--config", ex_cfg)->required();
  ex->add_option("--workers", workers, "worker thread count");
  ex->add_option("--out", ex_out, "output directory override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (div->parsed()) return cmd_divergence(spec_path, out_path);
    if (ks->parsed()) return cmd_kernel_spectrum(family, a, nu, m, ks_out);
    if (cx->parsed()) return cmd_complexity(cx_cfg, cx_out);
    if (dl->parsed()) return cmd_delta(dl_cfg, dl_out);
    if (gp->parsed()) return cmd_gpvs_run(gp_cfg, gp_out);
    if (dr->parsed()) return cmd_drvs_run(dr_cfg, dr_out);
    if (ex->parsed()) return cmd_experiment(ex_cfg, workers, ex_out);
  } catch (const std::exception& ex_err) {
    std::cerr << "error: " << ex_err.what() << '\n';
    return 1;
  }
  return 0;
}
