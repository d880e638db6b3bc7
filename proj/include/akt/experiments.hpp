#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "akt/dyadic.hpp"
#include "akt/geometry.hpp"
#include "akt/hazard.hpp"
#include "akt/io.hpp"
#include "json.hpp"

namespace akt::exp {

enum class Algorithm { Exact, Ajtai, AjtaiImprove };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);  // exact | ajtai | ajtai+improve

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t reps = 300;
  std::vector<std::size_t> sizes;  // empty: per-command default
  std::optional<Metric> metric;    // empty: per-command default
  std::vector<Algorithm> algorithms = {Algorithm::Exact, Algorithm::Ajtai,
                                       Algorithm::AjtaiImprove};
  std::vector<SampleKind> kinds = {SampleKind::UniformSquare};
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;  // 0: hardware concurrency

  // Dyadic family.
  std::size_t k_max = 10;
  std::size_t model_sets = 5;     // R1..R5 columns
  std::size_t model_repeats = 10; // model-vs-model draws
  double sigma_scale = 0.975;
  // Calibration.
  std::size_t n_obs = 817;
  std::size_t trials = 5000;
  // Price map.
  std::size_t n = 1024;
  std::size_t resolution = 512;
  std::size_t buckets = 16;

  Metric metric_or(Metric fallback) const { return metric.value_or(fallback); }

  // Throws InputError when a field is out of range for the named command.
  void validate(std::string_view command) const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  std::string hash() const;
  io::Provenance provenance() const;
};

// ---- Matching benchmark (exact / Ajtai / improved on shared samples) ----

struct SeriesStats {
  std::size_t n = 0;
  std::string label;  // U|N followed by H|A|B
  SampleKind kind = SampleKind::UniformSquare;
  Algorithm algorithm = Algorithm::Exact;
  std::size_t count = 0;
  double mean = 0, sd = 0, skewness = 0;
};

struct CorrelationTable {
  std::size_t n = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;

  double at(std::string_view a, std::string_view b) const;
};

struct BenchResult {
  std::vector<SeriesStats> series;
  std::vector<CorrelationTable> correlations;  // one per size
  // costs[size index][series index within size][rep]
  std::vector<std::vector<std::vector<double>>> costs;

  const SeriesStats& find(std::size_t n, std::string_view label) const;
};

BenchResult run_matching_bench(const ExperimentConfig& cfg);
void write_bench(const BenchResult& r, const ExperimentConfig& cfg);

// ---- Mean growth ----

struct GrowthRow {
  std::size_t n = 0;
  std::size_t reps = 0;
  double mean = 0, sd = 0, se = 0;
};

struct GrowthResult {
  std::vector<GrowthRow> rows;
  dyadic::MeanLawFit fit;
  // Offset-free form mean = beta * log(n) + gamma, by least squares.
  double plain_beta = 0, plain_gamma = 0;
};

GrowthResult run_mean_growth(const ExperimentConfig& cfg);
void write_mean_growth(const GrowthResult& r, const ExperimentConfig& cfg);

// ---- Dyadic dataset and analyses built on it ----

struct DyadicDataset {
  std::size_t k_max = 0;
  std::vector<std::vector<dyadic::DyadicRecord>> chains;  // [rep][level]

  std::vector<dyadic::DyadicRecord> level(std::size_t k) const;
  std::vector<dyadic::DyadicRecord> levels(std::size_t k_lo, std::size_t k_hi) const;
  std::vector<std::vector<double>> vectors() const;  // 6(K+1) + 1 per rep
};

DyadicDataset run_dyadic(const ExperimentConfig& cfg);
DyadicDataset dataset_from_chains(std::vector<std::vector<dyadic::DyadicRecord>> chains);

struct RecursionReport {
  std::vector<dyadic::RecursionFit> per_level;  // level k regression of merged on W(k)
  std::optional<dyadic::RecursionFit> pooled;
  std::size_t pooled_lo = 0, pooled_hi = 0;
};

RecursionReport run_recursion(const DyadicDataset& ds, std::size_t pool_lo, std::size_t pool_hi);
void write_dyadic(const DyadicDataset& ds, const RecursionReport& rec, const ExperimentConfig& cfg);

// One AR model per level 0..K, each with its cross-level conditional.
std::vector<dyadic::ARModel> fit_level_models(const DyadicDataset& ds);

// Rows of the per-level fit: the six costs of each level pooled over replications, then
// the top merged cost on its own.
std::vector<std::vector<double>> level_samples(const std::vector<std::vector<double>>& vectors);

struct LevelFitRow {
  std::size_t k = 0;
  std::size_t count = 0;
  bool ok = false;
  hazard::FitResult fit;
  double ks = 0;
  std::vector<double> model_ks;  // R1..R5
};

struct DistributionFitResult {
  std::vector<LevelFitRow> rows;
  std::vector<dyadic::ARModel> models;
};

DistributionFitResult run_distribution_fit(const DyadicDataset& ds, const ExperimentConfig& cfg);
void write_distribution_fit(const DistributionFitResult& r, const ExperimentConfig& cfg);

struct ModelTestReport {
  std::size_t reps = 0;
  std::size_t dim = 0;
  double sigma_scale = 1.0;
  std::vector<double> data_vs_model, model_vs_model;
  std::vector<double> data_vs_model_shrunk, model_vs_model_shrunk;
  std::vector<dyadic::ARModel> models;
};

ModelTestReport run_full_model_test(const DyadicDataset& ds, const ExperimentConfig& cfg);
void write_model_test(const ModelTestReport& r, const ExperimentConfig& cfg);

hazard::Cutpoints run_calibration(const ExperimentConfig& cfg);
void write_calibration(const hazard::Cutpoints& c, const ExperimentConfig& cfg);

nlohmann::json ar_model_to_json(const dyadic::ARModel& m);

}  // namespace akt::exp
