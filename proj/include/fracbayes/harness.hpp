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

#ifndef FRACBAYES_HARNESS_HPP_
#define FRACBAYES_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracbayes/density_regression.hpp"
#include "fracbayes/gp_model.hpp"
#include "fracbayes/identifiability.hpp"
#include "fracbayes/model_space.hpp"

namespace fracbayes {

enum class ExperimentKind { kConsistency, kRate, kOccam, kComplexity, kSpectra };
enum class ModelFamily { kGpvs, kDrvs };

// Named data-generating truths for regression experiments.
struct RegressionTruth {
  std::string name = "additive_sine";  // constant | single_cosine_mode |
                                       // sine1d | additive_sine
  double constant_value = 0.0;
  std::vector<int> support = {1, 2};

  TruthSpec to_spec(int p, double beta) const;
};

// Conditional-density truth for the DRVS experiments: a two-component
// location mixture whose gate is logistic in the first supported covariate.
struct DrvsTruth {
  double separation = 1.2;   // y locations at +/- separation
  double gate_slope = 8.0;
  double noise_sd = 0.3;
  int support = 1;           // the single relevant covariate
};

struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::kConsistency;
  ModelFamily family = ModelFamily::kGpvs;
  int p = 6;
  int d0 = 3;
  std::vector<int> n_grid = {50, 100, 200, 400};
  std::vector<double> alpha_grid = {0.5, 1.0};
  int replicates = 20;
  std::uint64_t master_seed = 20260101;
  double data_noise_sd = 0.5;
  RegressionTruth truth;
  DrvsTruth drvs_truth;
  GpConfig gp;
  DrvsHyper drvs_hyper;
  DrvsModelPosteriorConfig drvs_cfg;
  int workers = 1;
  int rate_test_points = 1000;
  std::string out_dir = "out";

  void validate() const;
};

struct ResultRow {
  std::string experiment;
  int n = 0;
  double alpha = 1.0;
  int replicate = 0;
  std::string statistic;
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string note;  // empty unless the cell errored
};

struct SummaryRow {
  std::string experiment;
  int n = 0;
  double alpha = 1.0;
  std::string statistic;
  double mean = 0.0;
  double se = 0.0;  // NaN sentinel when replicates == 1
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  std::string version;
  std::uint64_t master_seed = 0;
  double wall_seconds = 0.0;
  int errored_cells = 0;
};

// X rows iid Uniform[0,1]^p, y_i = f*(x_i) + N(0, sigma^2). sigma = 0 gives
// exactly noiseless responses.
RegressionData generate_regression_data(const TruthSpec& truth, int n, double sigma,
                                        std::uint64_t seed);

// (X, y) draws from the DrvsTruth conditional mixture.
void generate_drvs_data(const DrvsTruth& truth, int p, int n, std::uint64_t seed,
                        Eigen::MatrixXd* x, Eigen::VectorXd* y);

ExperimentResult run_consistency(const ExperimentConfig& cfg);
ExperimentResult run_rate(const ExperimentConfig& cfg);

// Writes cells.csv, summary.csv, plots/*.txt and run_info.json under
// cfg.out_dir. The CSV bytes are a pure function of the result rows.
void write_result(const ExperimentResult& result, const std::string& out_dir);

// Subset encoded as sum of 2^{i-1} over members; numeric so it can live in
// the long-format value column.
double subset_mask(const ModelIndex& index);

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace fracbayes

#endif  // FRACBAYES_HARNESS_HPP_
