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

#include "fracbayes/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "fracbayes/csv.hpp"
#include "fracbayes/rng.hpp"
#include "fracbayes/version.hpp"

namespace fracbayes {

namespace {

constexpr double kPi = 3.14159265358979323846;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Cell {
  int n_idx;
  int alpha_idx;
  int replicate;
};

// Runs independent grid cells on a small worker pool; rows are sorted
// afterwards so assembly order never shows in the output.
template <typename Fn>
void run_cells(const std::vector<Cell>& cells, int workers, Fn&& body) {
  if (workers <= 1) {
    for (const Cell& c : cells) body(c);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next >= cells.size()) return;
        mine = next++;
      }
      body(cells[mine]);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

void sort_rows(std::vector<ResultRow>* rows) {
  std::sort(rows->begin(), rows->end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.experiment, a.n, a.alpha, a.replicate, a.statistic) <
           std::tie(b.experiment, b.n, b.alpha, b.replicate, b.statistic);
  });
}

void summarize(const std::vector<ResultRow>& rows, int replicates,
               std::vector<SummaryRow>* summary) {
  std::map<std::tuple<std::string, int, double, std::string>, std::vector<double>> groups;
  for (const ResultRow& r : rows) {
    if (!r.note.empty()) continue;
    groups[{r.experiment, r.n, r.alpha, r.statistic}].push_back(r.value);
  }
  for (const auto& [key, vals] : groups) {
    SummaryRow s;
    std::tie(s.experiment, s.n, s.alpha, s.statistic) = key;
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(vals.size());
    s.mean = m;
    if (replicates == 1 || vals.size() < 2) {
      s.se = std::numeric_limits<double>::quiet_NaN();
    } else {
      double ss = 0.0;
      for (double v : vals) ss += (v - m) * (v - m);
      s.se = std::sqrt(ss / (static_cast<double>(vals.size()) - 1.0) /
                       static_cast<double>(vals.size()));
    }
    summary->push_back(std::move(s));
  }
}

std::uint64_t master_seed_with_env(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("FRACBAYES_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return cfg.master_seed;
}

}  // namespace

TruthSpec RegressionTruth::to_spec(int p, double beta) const {
  TruthSpec spec;
  spec.p = p;
  spec.smoothness = beta;
  spec.name = name;
  std::vector<int> sup = support;
  if (name == "constant") {
    double c = constant_value;
    spec.f = [c](const std::vector<double>&) { return c; };
  } else if (name == "single_cosine_mode") {
    int j = sup.empty() ? 1 : sup[0];
    spec.f = [j](const std::vector<double>& x) { return std::sqrt(2.0) * std::cos(kPi * x[j - 1]); };
    sup = {j};
  } else if (name == "sine1d") {
    int j = sup.empty() ? 1 : sup[0];
    spec.f = [j](const std::vector<double>& x) { return std::sin(2.0 * kPi * x[j - 1]); };
    sup = {j};
  } else if (name == "additive_sine") {
    if (sup.size() != 2) sup = {1, 2};
    int j1 = sup[0], j2 = sup[1];
    spec.f = [j1, j2](const std::vector<double>& x) {
      return std::sin(2.0 * kPi * x[j1 - 1]) + std::sin(2.0 * kPi * x[j2 - 1]);
    };
  } else {
    throw std::invalid_argument("unknown truth '" + name + "'");
  }
  if (name == "constant") sup.clear();
  spec.support = ModelIndex(sup, p);
  return spec;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw std::invalid_argument("experiment config: empty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) {
      throw std::invalid_argument("experiment config: n grid must be strictly increasing");
    }
  }
  for (double a : alpha_grid) {
    if (a <= 0.0 || a > 1.0) {
      throw std::invalid_argument("experiment config: alpha values must lie in (0,1]");
    }
  }
  if (alpha_grid.empty()) throw std::invalid_argument("experiment config: empty alpha grid");
  if (replicates < 1) throw std::invalid_argument("experiment config: replicates must be >= 1");
  if (p < 1 || d0 < 0) throw std::invalid_argument("experiment config: bad p or d0");
}

RegressionData generate_regression_data(const TruthSpec& truth, int n, double sigma,
                                        std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("generate_regression_data: n must be nonnegative");
  Rng rng(seed);
  RegressionData data;
  data.x.resize(n, truth.p);
  data.y.resize(n);
  std::vector<double> row(truth.p);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < truth.p; ++c) {
      row[c] = rng.uniform();
      data.x(i, c) = row[c];
    }
    double noise = (sigma == 0.0) ? 0.0 : sigma * rng.normal();
    data.y(i) = truth.f(row) + noise;
  }
  return data;
}

void generate_drvs_data(const DrvsTruth& truth, int p, int n, std::uint64_t seed,
                        Eigen::MatrixXd* x, Eigen::VectorXd* y) {
  Rng rng(seed);
  x->resize(n, p);
  y->resize(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) (*x)(i, c) = rng.uniform();
    double g = logistic(truth.gate_slope * ((*x)(i, truth.support - 1) - 0.5));
    double loc = (rng.uniform() < g) ? truth.separation : -truth.separation;
    (*y)(i) = loc + truth.noise_sd * rng.normal();
  }
}

double subset_mask(const ModelIndex& index) {
  double m = 0.0;
  for (int i : index.indices()) m += std::pow(2.0, i - 1);
  return m;
}

namespace {

// One consistency cell for the GPVS family: exact enumeration posterior plus
// the two tracked Bayes factors.
void consistency_cell_gpvs(const ExperimentConfig& cfg, const TruthSpec& truth, int n,
                           double alpha, int rep, std::uint64_t seed,
                           std::vector<ResultRow>* out) {
  RegressionData data = generate_regression_data(truth, n, cfg.data_noise_sd, seed);
  GpConfig gp = cfg.gp;
  ModelPosterior post = enumerate_posterior(data, cfg.p, cfg.d0, gp, alpha);
  const ModelIndex& istar = truth.support;
  auto push = [&](const std::string& stat, double value) {
    out->push_back({"consistency", n, alpha, rep, stat, value, seed, ""});
  };
  push("selection_probability", selection_probability(post, istar));
  ModelIndex mode = post.mode();
  push("mode_mask", subset_mask(mode));
  push("mode_is_true", mode == istar ? 1.0 : 0.0);
  // one superset and one non-containing subset, both deterministic
  int extra = 0;
  for (int c = 1; c <= cfg.p; ++c) {
    if (!istar.contains(c)) {
      extra = c;
      break;
    }
  }
  if (extra != 0 && istar.size() + 1 <= cfg.d0) {
    ModelIndex sup = istar.with(extra);
    push("log_bf_superset", post.at(sup).log_marginal - post.at(istar).log_marginal);
  }
  if (istar.size() > 0) {
    ModelIndex missing = istar.without(istar.indices().back());
    push("log_bf_missing", post.at(missing).log_marginal - post.at(istar).log_marginal);
  }
}

void consistency_cell_drvs(const ExperimentConfig& cfg, int n, double alpha, int rep,
                           std::uint64_t seed, std::vector<ResultRow>* out) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  generate_drvs_data(cfg.drvs_truth, cfg.p, n, seed, &x, &y);
  DrvsModelPosteriorConfig dc = cfg.drvs_cfg;
  dc.alpha = alpha;
  ModelPosterior post =
      drvs_model_posterior(x, y, cfg.p, cfg.d0, cfg.drvs_hyper, dc, Rng::mix(seed, 0xD5));
  ModelIndex istar({cfg.drvs_truth.support}, cfg.p);
  auto push = [&](const std::string& stat, double value) {
    out->push_back({"consistency", n, alpha, rep, stat, value, seed, ""});
  };
  push("selection_probability", selection_probability(post, istar));
  ModelIndex mode = post.mode();
  push("mode_mask", subset_mask(mode));
  push("mode_is_true", mode == istar ? 1.0 : 0.0);
  int unflagged = 0;
  for (const auto& e : post.entries) unflagged += e.ess_flag ? 0 : 1;
  push("ess_ok_fraction", static_cast<double>(unflagged) / static_cast<double>(post.entries.size()));
  int extra = 0;
  for (int c = 1; c <= cfg.p; ++c) {
    if (!istar.contains(c)) {
      extra = c;
      break;
    }
  }
  if (extra != 0 && istar.size() + 1 <= cfg.d0) {
    ModelIndex sup = istar.with(extra);
    push("log_bf_superset", post.at(sup).log_marginal - post.at(istar).log_marginal);
  }
  if (istar.size() > 0) {
    ModelIndex missing = istar.without(istar.indices().back());
    push("log_bf_missing", post.at(missing).log_marginal - post.at(istar).log_marginal);
  }
}

}  // namespace

ExperimentResult run_consistency(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.version = kVersion;
  result.master_seed = master_seed_with_env(cfg);
  TruthSpec truth;
  if (cfg.family == ModelFamily::kGpvs) truth = cfg.truth.to_spec(cfg.p, cfg.gp.smoothness);

  std::vector<Cell> cells;
  for (int i = 0; i < static_cast<int>(cfg.n_grid.size()); ++i) {
    for (int j = 0; j < static_cast<int>(cfg.alpha_grid.size()); ++j) {
      for (int r = 0; r < cfg.replicates; ++r) cells.push_back({i, j, r});
    }
  }
  std::mutex mu;
  run_cells(cells, cfg.workers, [&](const Cell& c) {
    const int n = cfg.n_grid[c.n_idx];
    const double alpha = cfg.alpha_grid[c.alpha_idx];
    // the data seed is shared across the alpha grid so alphas see the same
    // replicate datasets
    std::uint64_t seed = derive_seed(result.master_seed, c.n_idx, 0, c.replicate);
    std::vector<ResultRow> rows;
    try {
      if (cfg.family == ModelFamily::kGpvs) {
        consistency_cell_gpvs(cfg, truth, n, alpha, c.replicate, seed, &rows);
      } else {
        consistency_cell_drvs(cfg, n, alpha, c.replicate, seed, &rows);
      }
    } catch (const std::exception& ex) {
      rows.push_back({"consistency", n, alpha, c.replicate, "error",
                      std::numeric_limits<double>::quiet_NaN(), seed, ex.what()});
    }
    std::lock_guard<std::mutex> lk(mu);
    for (auto& r : rows) {
      if (!r.note.empty()) ++result.errored_cells;
      result.rows.push_back(std::move(r));
    }
  });
  sort_rows(&result.rows);
  summarize(result.rows, cfg.replicates, &result.summary);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

ExperimentResult run_rate(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.version = kVersion;
  result.master_seed = master_seed_with_env(cfg);
  TruthSpec truth = cfg.truth.to_spec(cfg.p, cfg.gp.smoothness);
  const double alpha = cfg.alpha_grid.front();

  std::vector<Cell> cells;
  for (int i = 0; i < static_cast<int>(cfg.n_grid.size()); ++i) {
    for (int r = 0; r < cfg.replicates; ++r) cells.push_back({i, 0, r});
  }
  std::mutex mu;
  run_cells(cells, cfg.workers, [&](const Cell& c) {
    const int n = cfg.n_grid[c.n_idx];
    std::uint64_t seed = derive_seed(result.master_seed, c.n_idx, 0, c.replicate);
    std::vector<ResultRow> rows;
    try {
      RegressionData data = generate_regression_data(truth, n, cfg.data_noise_sd, seed);
      ModelPosterior post = enumerate_posterior(data, cfg.p, cfg.d0, cfg.gp, alpha);
      ModelIndex mode = post.mode();
      // prediction uses the evidence-maximizing bandwidth node of the mode
      // model over the same log grid the evidence integral visits
      double a_mid = 1.0;
      if (mode.size() > 0) {
        double a_lo = bandwidth_floor(cfg.gp, n, mode.size());
        double a_hi = cfg.gp.bandwidth_max_factor * n;
        double best = -std::numeric_limits<double>::infinity();
        for (int gnode = 0; gnode < cfg.gp.bandwidth_grid; ++gnode) {
          double la = std::log(a_lo) + (std::log(a_hi) - std::log(a_lo)) * gnode /
                                           (cfg.gp.bandwidth_grid - 1);
          double a = std::exp(la);
          double lm = log_fractional_marginal(data, mode, a, cfg.gp, alpha);
          if (lm > best) {
            best = lm;
            a_mid = a;
          }
        }
      }
      // fresh uniform test set, f* known there
      Rng trng(Rng::mix(seed, 0x7E57));
      Eigen::MatrixXd test_full(cfg.rate_test_points, cfg.p);
      for (int i = 0; i < cfg.rate_test_points; ++i) {
        for (int c2 = 0; c2 < cfg.p; ++c2) test_full(i, c2) = trng.uniform();
      }
      Eigen::MatrixXd test_sub(cfg.rate_test_points, mode.size());
      for (int c2 = 0; c2 < mode.size(); ++c2) {
        test_sub.col(c2) = test_full.col(mode.indices()[c2] - 1);
      }
      std::vector<double> pred =
          posterior_predictive_mean(data, mode, a_mid, cfg.gp, alpha, test_sub);
      double err = 0.0;
      std::vector<double> xrow(cfg.p);
      for (int i = 0; i < cfg.rate_test_points; ++i) {
        for (int c2 = 0; c2 < cfg.p; ++c2) xrow[c2] = test_full(i, c2);
        double d = pred[i] - truth.f(xrow);
        err += d * d;
      }
      err = std::sqrt(err / cfg.rate_test_points);
      rows.push_back({"rate", n, alpha, c.replicate, "l2_error", err, seed, ""});
      rows.push_back({"rate", n, alpha, c.replicate, "mode_mask", subset_mask(mode), seed, ""});
    } catch (const std::exception& ex) {
      rows.push_back({"rate", n, alpha, c.replicate, "error",
                      std::numeric_limits<double>::quiet_NaN(), seed, ex.what()});
    }
    std::lock_guard<std::mutex> lk(mu);
    for (auto& r : rows) {
      if (!r.note.empty()) ++result.errored_cells;
      result.rows.push_back(std::move(r));
    }
  });
  sort_rows(&result.rows);
  summarize(result.rows, cfg.replicates, &result.summary);

  // fitted log-log slope of the mean L2 error, with a per-replicate slope se
  std::vector<double> slopes;
  for (int r = 0; r < cfg.replicates; ++r) {
    std::vector<double> lx, ly;
    for (const ResultRow& row : result.rows) {
      if (row.statistic == "l2_error" && row.replicate == r && row.value > 0.0) {
        lx.push_back(std::log(static_cast<double>(row.n)));
        ly.push_back(std::log(row.value));
      }
    }
    if (lx.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
      }
      mx /= lx.size();
      my /= ly.size();
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
      }
      slopes.push_back(sxy / sxx);
    }
  }
  if (!slopes.empty()) {
    double m = 0.0;
    for (double s : slopes) m += s;
    m /= slopes.size();
    double se = std::numeric_limits<double>::quiet_NaN();
    if (slopes.size() >= 2) {
      double ss = 0.0;
      for (double s : slopes) ss += (s - m) * (s - m);
      se = std::sqrt(ss / (slopes.size() - 1.0) / slopes.size());
    }
    result.summary.push_back({"rate", 0, alpha, "loglog_slope", m, se});
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void write_result(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/plots");
  {
    std::ofstream f(out_dir + "/cells.csv", std::ios::binary);
    f << "experiment,n,alpha,replicate,statistic,value,seed,note\n";
    for (const ResultRow& r : result.rows) {
      f << r.experiment << ',' << r.n << ',' << format_double(r.alpha) << ',' << r.replicate
        << ',' << r.statistic << ',' << format_double(r.value) << ',' << r.seed << ',' << r.note
        << '\n';
    }
  }
  {
    std::ofstream f(out_dir + "/summary.csv", std::ios::binary);
    f << "experiment,n,alpha,statistic,mean,se\n";
    for (const SummaryRow& s : result.summary) {
      f << s.experiment << ',' << s.n << ',' << format_double(s.alpha) << ',' << s.statistic
        << ',' << format_double(s.mean) << ',' << format_double(s.se) << '\n';
    }
  }
  // plain-text x/y series per (statistic, alpha): n vs mean
  std::map<std::pair<std::string, double>, std::vector<std::pair<int, double>>> series;
  for (const SummaryRow& s : result.summary) {
    if (s.n > 0) series[{s.statistic, s.alpha}].push_back({s.n, s.mean});
  }
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    std::ostringstream name;
    name << out_dir << "/plots/" << key.first << ".alpha=" << format_double(key.second) << ".txt";
    std::ofstream f(name.str(), std::ios::binary);
    for (const auto& [n, v] : pts) f << n << ' ' << format_double(v) << '\n';
  }
  {
    nlohmann::json info;
    info["version"] = result.version;
    info["master_seed"] = result.master_seed;
    info["wall_seconds"] = result.wall_seconds;
    info["errored_cells"] = result.errored_cells;
    std::ofstream f(out_dir + "/run_info.json", std::ios::binary);
    f << info.dump(2) << '\n';
  }
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const std::string& key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  f >> j;
  reject_unknown_keys(
      j,
      {"schema_version", "kind", "family", "p", "d0", "n_grid", "alpha_grid", "replicates",
       "master_seed", "data_noise_sd", "truth", "drvs_truth", "gp", "drvs_hyper", "drvs_cfg",
       "workers", "rate_test_points", "out_dir"},
      "top level");
  ExperimentConfig cfg;
  read_field(j, "schema_version", &cfg.schema_version);
  if (cfg.schema_version != 1) {
    throw std::invalid_argument("config: unsupported schema_version");
  }
  if (j.contains("kind")) {
    std::string k = j.at("kind").get<std::string>();
    if (k == "consistency")
      cfg.kind = ExperimentKind::kConsistency;
    else if (k == "rate")
      cfg.kind = ExperimentKind::kRate;
    else
      throw std::invalid_argument("config: unsupported experiment kind '" + k + "'");
  }
  if (j.contains("family")) {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "gpvs")
      cfg.family = ModelFamily::kGpvs;
    else if (fam == "drvs")
      cfg.family = ModelFamily::kDrvs;
    else
      throw std::invalid_argument("config: unknown family '" + fam + "'");
  }
  read_field(j, "p", &cfg.p);
  read_field(j, "d0", &cfg.d0);
  read_field(j, "n_grid", &cfg.n_grid);
  read_field(j, "alpha_grid", &cfg.alpha_grid);
  read_field(j, "replicates", &cfg.replicates);
  read_field(j, "master_seed", &cfg.master_seed);
  read_field(j, "data_noise_sd", &cfg.data_noise_sd);
  read_field(j, "workers", &cfg.workers);
  read_field(j, "rate_test_points", &cfg.rate_test_points);
  read_field(j, "out_dir", &cfg.out_dir);
  if (j.contains("truth")) {
    const auto& t = j.at("truth");
    reject_unknown_keys(t, {"name", "constant_value", "support"}, "truth");
    read_field(t, "name", &cfg.truth.name);
    read_field(t, "constant_value", &cfg.truth.constant_value);
    read_field(t, "support", &cfg.truth.support);
  }
  if (j.contains("drvs_truth")) {
    const auto& t = j.at("drvs_truth");
    reject_unknown_keys(t, {"separation", "gate_slope", "noise_sd", "support"}, "drvs_truth");
    read_field(t, "separation", &cfg.drvs_truth.separation);
    read_field(t, "gate_slope", &cfg.drvs_truth.gate_slope);
    read_field(t, "noise_sd", &cfg.drvs_truth.noise_sd);
    read_field(t, "support", &cfg.drvs_truth.support);
  }
  if (j.contains("gp")) {
    const auto& g = j.at("gp");
    reject_unknown_keys(g,
                        {"noise_sd", "bandwidth_shape", "bandwidth_scale", "smoothness",
                         "sup_norm_cap", "bandwidth_grid", "bandwidth_max_factor"},
                        "gp");
    read_field(g, "noise_sd", &cfg.gp.noise_sd);
    read_field(g, "bandwidth_shape", &cfg.gp.bandwidth_shape);
    read_field(g, "bandwidth_scale", &cfg.gp.bandwidth_scale);
    read_field(g, "smoothness", &cfg.gp.smoothness);
    read_field(g, "sup_norm_cap", &cfg.gp.sup_norm_cap);
    read_field(g, "bandwidth_grid", &cfg.gp.bandwidth_grid);
    read_field(g, "bandwidth_max_factor", &cfg.gp.bandwidth_max_factor);
  }
  if (j.contains("drvs_hyper")) {
    const auto& h = j.at("drvs_hyper");
    reject_unknown_keys(h, {"dirichlet_a", "restriction_b", "y_loc_rate", "y_loc_power"},
                        "drvs_hyper");
    read_field(h, "dirichlet_a", &cfg.drvs_hyper.dirichlet_a);
    read_field(h, "restriction_b", &cfg.drvs_hyper.restriction_b);
    read_field(h, "y_loc_rate", &cfg.drvs_hyper.y_loc_rate);
    read_field(h, "y_loc_power", &cfg.drvs_hyper.y_loc_power);
  }
  if (j.contains("drvs_cfg")) {
    const auto& c = j.at("drvs_cfg");
    reject_unknown_keys(c, {"m", "sigma", "n_draws", "ess_flag_threshold"}, "drvs_cfg");
    read_field(c, "m", &cfg.drvs_cfg.m);
    read_field(c, "sigma", &cfg.drvs_cfg.sigma);
    read_field(c, "n_draws", &cfg.drvs_cfg.n_draws);
    read_field(c, "ess_flag_threshold", &cfg.drvs_cfg.ess_flag_threshold);
  }
  cfg.validate();
  return cfg;
}

}  // namespace fracbayes
