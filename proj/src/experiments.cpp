#include "akt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "akt/ajtai.hpp"
#include "akt/assignment.hpp"
#include "akt/errors.hpp"
#include "akt/parallel.hpp"
#include "akt/regression.hpp"
#include "akt/stats.hpp"

namespace akt::exp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Exact: return "exact";
    case Algorithm::Ajtai: return "ajtai";
    case Algorithm::AjtaiImprove: return "ajtai+improve";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "exact") return Algorithm::Exact;
  if (s == "ajtai") return Algorithm::Ajtai;
  if (s == "ajtai+improve") return Algorithm::AjtaiImprove;
  throw InputError("unknown algorithm '" + std::string(s) + "' (exact|ajtai|ajtai+improve)");
}

void ExperimentConfig::validate(std::string_view command) const {
  if (reps < 1) throw InputError("reps must be at least 1");
  for (const std::size_t n : sizes)
    if (n < 1) throw InputError("sizes must be positive");
  if (command == "bench") {
    if (algorithms.empty()) throw InputError("bench: no algorithms selected");
    if (kinds.empty()) throw InputError("bench: no sample kinds selected");
    const bool needs_ajtai = std::any_of(algorithms.begin(), algorithms.end(),
                                         [](Algorithm a) { return a != Algorithm::Exact; });
    for (const std::size_t n : sizes)
      if (needs_ajtai && !power_of_four_level(n))
        throw InputError("bench: size " + std::to_string(n) + " is not a power of 4");
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Exact) != algorithms.end())
      for (const std::size_t n : sizes)
        if (n > 4096) throw InputError("bench: exact solver limited to n <= 4096 at desk scale");
  }
  if (command == "dyadic" || command == "model-test" || command == "dist-fit") {
    if (k_max > dyadic::kMaxLevel - 1) throw InputError("k_max must be at most 10");
  }
  if (command == "model-test" || command == "dist-fit") {
    if (reps < dyadic::kMinARRecords) throw InputError("reps must be at least 200 for model fitting");
    if (command == "model-test" && model_repeats < 2)
      throw InputError("model-test: model_repeats must be at least 2");
  }
  if (command == "price-map") {
    if (n < 2) throw InputError("price-map: n must be at least 2");
    if (resolution < 64) throw InputError("price-map: resolution must be at least 64");
    if (buckets < 1) throw InputError("price-map: buckets must be positive");
  }
  if (command == "calibrate") {
    if (n_obs < hazard::kMinFitObservations) throw InputError("calibrate: n_obs must be at least 30");
    if (trials < hazard::kMinCalibrationTrials)
      throw InputError("calibrate: trials must be at least 2000");
  }
  if (!(sigma_scale > 0) || !std::isfinite(sigma_scale))
    throw InputError("sigma_scale must be positive");
}

json ExperimentConfig::to_json() const {
  json j;
  j["seed"] = seed;
  j["reps"] = reps;
  j["sizes"] = sizes;
  j["metric"] = metric ? json(std::string(akt::to_string(*metric))) : json(nullptr);
  std::vector<std::string> algs, ks;
  for (const auto a : algorithms) algs.emplace_back(to_string(a));
  for (const auto k : kinds) ks.emplace_back(akt::to_string(k));
  j["algorithms"] = algs;
  j["kinds"] = ks;
  j["out_dir"] = out_dir.string();
  j["threads"] = threads;
  j["k_max"] = k_max;
  j["model_sets"] = model_sets;
  j["model_repeats"] = model_repeats;
  j["sigma_scale"] = sigma_scale;
  j["n_obs"] = n_obs;
  j["trials"] = trials;
  j["n"] = n;
  j["resolution"] = resolution;
  j["buckets"] = buckets;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  static const std::vector<std::string> known = {
      "seed",       "reps",          "sizes",       "metric", "algorithms", "kinds",
      "out_dir",    "threads",       "k_max",       "model_sets", "model_repeats",
      "sigma_scale", "n_obs",        "trials",      "n",      "resolution", "buckets"};
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError("config: unknown key '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("reps")) c.reps = j.at("reps").get<std::size_t>();
    if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (j.contains("metric") && !j.at("metric").is_null())
      c.metric = parse_metric(j.at("metric").get<std::string>());
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : j.at("kinds")) c.kinds.push_back(parse_sample_kind(k.get<std::string>()));
    }
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<std::size_t>();
    if (j.contains("model_sets")) c.model_sets = j.at("model_sets").get<std::size_t>();
    if (j.contains("model_repeats")) c.model_repeats = j.at("model_repeats").get<std::size_t>();
    if (j.contains("sigma_scale")) c.sigma_scale = j.at("sigma_scale").get<double>();
    if (j.contains("n_obs")) c.n_obs = j.at("n_obs").get<std::size_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("resolution")) c.resolution = j.at("resolution").get<std::size_t>();
    if (j.contains("buckets")) c.buckets = j.at("buckets").get<std::size_t>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return c;
}

std::string ExperimentConfig::hash() const {
  // Output location and thread count do not change results.
  json j = to_json();
  j.erase("out_dir");
  j.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(io::fnv1a64(j.dump())));
  return buf;
}

io::Provenance ExperimentConfig::provenance() const { return {io::version(), seed, hash()}; }

namespace {

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw InputError("cannot create output directory " + p.string() + ": " + ec.message());
}

std::string cost_str(double v) { return io::format_real(v, io::kCostDigits); }

char algorithm_letter(Algorithm a) {
  switch (a) {
    case Algorithm::Exact: return 'H';
    case Algorithm::Ajtai: return 'A';
    case Algorithm::AjtaiImprove: return 'B';
  }
  return '?';
}

std::vector<std::size_t> powers_of_two(std::size_t lo_exp, std::size_t hi_exp) {
  std::vector<std::size_t> v;
  for (std::size_t e = lo_exp; e <= hi_exp; ++e) v.push_back(std::size_t{1} << e);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

double CorrelationTable::at(std::string_view a, std::string_view b) const {
  const auto ia = std::find(labels.begin(), labels.end(), a);
  const auto ib = std::find(labels.begin(), labels.end(), b);
  if (ia == labels.end() || ib == labels.end()) throw InputError("CorrelationTable: unknown label");
  return matrix[ia - labels.begin()][ib - labels.begin()];
}

const SeriesStats& BenchResult::find(std::size_t n, std::string_view label) const {
  for (const auto& s : series)
    if (s.n == n && s.label == label) return s;
  throw InputError("BenchResult: no series " + std::string(label) + " at n=" + std::to_string(n));
}

BenchResult run_matching_bench(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.sizes.empty()) cfg.sizes = {1024};
  cfg.validate("bench");
  const Metric metric = cfg.metric_or(Metric::EuclideanSquared);
  const Rng root(cfg.seed);

  struct Series {
    SampleKind kind;
    Algorithm alg;
    std::string label;
  };
  std::vector<Series> series;
  for (const auto kind : cfg.kinds)
    for (const auto alg : cfg.algorithms)
      series.push_back({kind, alg,
                        std::string(1, kind == SampleKind::UniformSquare ? 'U' : 'N') +
                            algorithm_letter(alg)});

  BenchResult out;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const std::size_t n = cfg.sizes[si];
    const auto level = power_of_four_level(n);
    std::vector<std::vector<double>> costs(series.size(), std::vector<double>(cfg.reps));
    const Rng size_stream = root.child(si);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
      Rng rng = size_stream.child(rep);
      // One pair of uniform samples per replication; the normal variant is
      // its marginal quantile transform, so the series are coupled.
      const PointSet ul = sample(SampleKind::UniformSquare, n, rng, metric);
      const PointSet ur = sample(SampleKind::UniformSquare, n, rng, metric);
      std::optional<PointSet> nl, nr;
      for (std::size_t s = 0; s < series.size(); ++s) {
        const bool normal = series[s].kind == SampleKind::StandardNormalPlane;
        if (normal && !nl) {
          nl = marginal_quantile_transform(ul, QuantileDirection::UniformToNormal);
          nr = marginal_quantile_transform(ur, QuantileDirection::UniformToNormal);
        }
        const PointSet& l = normal ? *nl : ul;
        const PointSet& r = normal ? *nr : ur;
        switch (series[s].alg) {
          case Algorithm::Exact:
            costs[s][rep] = solve_exact(l, r).total_cost;
            break;
          case Algorithm::Ajtai:
            costs[s][rep] = match_ajtai(l, r, *level).total_cost;
            break;
          case Algorithm::AjtaiImprove:
            costs[s][rep] = improve_two_swap(l, r, match_ajtai(l, r, *level).matching).total_cost;
            break;
        }
      }
    });

    CorrelationTable table;
    table.n = n;
    for (std::size_t s = 0; s < series.size(); ++s) {
      SeriesStats st;
      st.n = n;
      st.label = series[s].label;
      st.kind = series[s].kind;
      st.algorithm = series[s].alg;
      st.count = cfg.reps;
      st.mean = stats::mean(costs[s]);
      st.sd = cfg.reps > 1 ? stats::stddev(costs[s]) : 0.0;
      st.skewness = cfg.reps > 2 ? stats::skewness(costs[s]) : 0.0;
      out.series.push_back(st);
      table.labels.push_back(series[s].label);
    }
    table.matrix.assign(series.size(), std::vector<double>(series.size(), 1.0));
    for (std::size_t a = 0; a < series.size(); ++a)
      for (std::size_t b = a + 1; b < series.size(); ++b) {
        const double c = cfg.reps > 2 ? stats::correlation(costs[a], costs[b]) : NAN;
        table.matrix[a][b] = table.matrix[b][a] = c;
      }
    out.correlations.push_back(std::move(table));
    out.costs.push_back(std::move(costs));
  }
  return out;
}

void write_bench(const BenchResult& r, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  {
    const std::vector<std::string> h = {"n", "label", "kind", "algorithm", "count", "mean", "sd", "skewness"};
    io::CsvWriter w(cfg.out_dir / "bench_summary.csv", prov, h);
    for (const auto& s : r.series) {
      const std::vector<std::string> row = {
          std::to_string(s.n), s.label, std::string(akt::to_string(s.kind)),
          std::string(to_string(s.algorithm)), std::to_string(s.count),
          cost_str(s.mean), cost_str(s.sd), cost_str(s.skewness)};
      w.row(row);
    }
  }
  {
    const std::vector<std::string> h = {"n", "label_a", "label_b", "correlation"};
    io::CsvWriter w(cfg.out_dir / "bench_correlations.csv", prov, h);
    for (const auto& t : r.correlations)
      for (std::size_t a = 0; a < t.labels.size(); ++a)
        for (std::size_t b = 0; b < t.labels.size(); ++b) {
          const std::vector<std::string> row = {std::to_string(t.n), t.labels[a], t.labels[b],
                                                cost_str(t.matrix[a][b])};
          w.row(row);
        }
  }
  {
    const std::vector<std::string> h = {"n", "rep", "label", "cost"};
    io::CsvWriter w(cfg.out_dir / "bench_costs.csv", prov, h);
    for (std::size_t si = 0; si < r.costs.size(); ++si) {
      const auto& t = r.correlations[si];
      for (std::size_t rep = 0; rep < r.costs[si].front().size(); ++rep)
        for (std::size_t s = 0; s < r.costs[si].size(); ++s) {
          const std::vector<std::string> row = {std::to_string(t.n), std::to_string(rep),
                                                t.labels[s], cost_str(r.costs[si][s][rep])};
          w.row(row);
        }
    }
  }
}

// ---------------------------------------------------------------------------

GrowthResult run_mean_growth(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.sizes.empty()) cfg.sizes = powers_of_two(0, 11);
  cfg.validate("mean-growth");
  const Metric metric = cfg.metric_or(Metric::ToroidalSquared);
  const Rng root(cfg.seed);

  GrowthResult out;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const std::size_t n = cfg.sizes[si];
    std::vector<double> costs(cfg.reps);
    const Rng size_stream = root.child(si);
    parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
      Rng rng = size_stream.child(rep);
      const PointSet a = sample(SampleKind::UniformSquare, n, rng, metric);
      const PointSet b = sample(SampleKind::UniformSquare, n, rng, metric);
      costs[rep] = solve_exact(a, b).total_cost;
    });
    GrowthRow row;
    row.n = n;
    row.reps = cfg.reps;
    row.mean = stats::mean(costs);
    row.sd = cfg.reps > 1 ? stats::stddev(costs) : 0.0;
    row.se = row.sd / std::sqrt(static_cast<double>(cfg.reps));
    out.rows.push_back(row);
    pts.emplace_back(static_cast<double>(n), row.mean);
  }
  std::sort(out.rows.begin(), out.rows.end(), [](auto& a, auto& b) { return a.n < b.n; });
  if (pts.size() >= 3) {
    std::vector<std::vector<double>> cols(1);
    std::vector<double> y;
    for (const auto& [n, m] : pts) {
      cols[0].push_back(std::log(n));
      y.push_back(m);
    }
    try {
      const auto r = stats::ols(cols, y, true);
      out.plain_gamma = r.coefficients[0];
      out.plain_beta = r.coefficients[1];
    } catch (const InputError&) {
      out.plain_beta = out.plain_gamma = NAN;
    }
  }
  try {
    out.fit = dyadic::fit_mean_law(pts);
  } catch (const InputError&) {
    out.fit.converged = false;  // too few sizes for the law; table only
    out.fit.alpha = out.fit.beta = out.fit.gamma = out.fit.rss = NAN;
  }
  return out;
}

void write_mean_growth(const GrowthResult& r, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  const std::vector<std::string> h = {"n", "reps", "mean", "sd", "se", "fitted"};
  io::CsvWriter w(cfg.out_dir / "mean_growth.csv", prov, h);
  for (const auto& row : r.rows) {
    const std::vector<std::string> cells = {
        std::to_string(row.n), std::to_string(row.reps), cost_str(row.mean),
        cost_str(row.sd),      cost_str(row.se),
        cost_str(r.fit(static_cast<double>(row.n)))};
    w.row(cells);
  }
  json j;
  j["provenance"] = prov.to_json();
  j["metric"] = akt::to_string(cfg.metric_or(Metric::ToroidalSquared));
  j["fit"] = {{"alpha", r.fit.alpha}, {"beta", r.fit.beta}, {"gamma", r.fit.gamma},
              {"rss", r.fit.rss},     {"converged", r.fit.converged}};
  j["plain_fit"] = {{"beta", r.plain_beta}, {"gamma", r.plain_gamma}};
  io::write_json(cfg.out_dir / "mean_growth_fit.json", j);
}

// ---------------------------------------------------------------------------

std::vector<dyadic::DyadicRecord> DyadicDataset::level(std::size_t k) const {
  if (k > k_max) throw InputError("DyadicDataset: level beyond k_max");
  std::vector<dyadic::DyadicRecord> out;
  out.reserve(chains.size());
  for (const auto& c : chains) out.push_back(c[k]);
  return out;
}

std::vector<dyadic::DyadicRecord> DyadicDataset::levels(std::size_t k_lo, std::size_t k_hi) const {
  std::vector<dyadic::DyadicRecord> out;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const auto l = level(k);
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

std::vector<std::vector<double>> DyadicDataset::vectors() const {
  std::vector<std::vector<double>> out;
  out.reserve(chains.size());
  for (const auto& c : chains) out.push_back(dyadic::data_vector(c));
  return out;
}

DyadicDataset run_dyadic(const ExperimentConfig& cfg) {
  cfg.validate("dyadic");
  const Metric metric = cfg.metric_or(Metric::ToroidalSquared);
  const Rng root(cfg.seed);
  DyadicDataset ds;
  ds.k_max = cfg.k_max;
  ds.chains.resize(cfg.reps);
  parallel_for(cfg.reps, cfg.threads, [&](std::size_t rep) {
    ds.chains[rep] = dyadic::run_chain(root.child(rep), cfg.k_max, metric);
  });
  return ds;
}

DyadicDataset dataset_from_chains(std::vector<std::vector<dyadic::DyadicRecord>> chains) {
  if (chains.empty()) throw InputError("dyadic dataset is empty");
  DyadicDataset ds;
  ds.k_max = chains.front().size() - 1;
  for (const auto& c : chains)
    if (c.size() != ds.k_max + 1) throw InputError("dyadic dataset: chains of different depth");
  ds.chains = std::move(chains);
  return ds;
}

RecursionReport run_recursion(const DyadicDataset& ds, std::size_t pool_lo, std::size_t pool_hi) {
  RecursionReport r;
  for (std::size_t k = 0; k <= ds.k_max; ++k) r.per_level.push_back(dyadic::fit_recursion(ds.level(k)));
  if (pool_lo <= pool_hi && pool_hi <= ds.k_max) {
    r.pooled = dyadic::fit_recursion(ds.levels(pool_lo, pool_hi));
    r.pooled_lo = pool_lo;
    r.pooled_hi = pool_hi;
  }
  return r;
}

namespace {

json recursion_to_json(const dyadic::RecursionFit& f) {
  return {{"a", f.a},
          {"b", f.b},
          {"noise_sd", f.noise_sd},
          {"count", f.count},
          {"stationarity_defect", f.stationarity_defect()},
          {"with_intercept", {{"intercept", f.intercept_diag}, {"a", f.a_diag}, {"b", f.b_diag}}},
          {"restricted_quarter_model", {{"sd", f.restricted_sd}, {"variance", f.restricted_variance}}}};
}

}  // namespace

void write_dyadic(const DyadicDataset& ds, const RecursionReport& rec, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  io::write_records_csv(cfg.out_dir / "dyadic_records.csv", ds.chains, prov);
  json j;
  j["provenance"] = prov.to_json();
  j["metric"] = akt::to_string(cfg.metric_or(Metric::ToroidalSquared));
  j["reps"] = ds.chains.size();
  j["k_max"] = ds.k_max;
  json levels = json::array();
  for (std::size_t k = 0; k < rec.per_level.size(); ++k) {
    json e = recursion_to_json(rec.per_level[k]);
    e["k"] = k;
    levels.push_back(e);
  }
  j["per_level"] = levels;
  if (rec.pooled) {
    j["pooled"] = recursion_to_json(*rec.pooled);
    j["pooled"]["levels"] = {rec.pooled_lo, rec.pooled_hi};
  }
  io::write_json(cfg.out_dir / "dyadic_recursion.json", j);
}

std::vector<dyadic::ARModel> fit_level_models(const DyadicDataset& ds) {
  std::vector<dyadic::ARModel> models;
  for (std::size_t k = 0; k <= ds.k_max; ++k) models.push_back(dyadic::fit_ar_model(ds.level(k), true));
  return models;
}

std::vector<std::vector<double>> level_samples(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw InputError("level_samples: no vectors");
  const std::size_t dim = vectors.front().size();
  if (dim % 6 != 1) throw InputError("level_samples: vector length must be 6L + 1");
  const std::size_t levels = dim / 6;
  std::vector<std::vector<double>> out(levels + 1);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InputError("level_samples: ragged vectors");
    for (std::size_t k = 0; k < levels; ++k) out[k].insert(out[k].end(), v.begin() + 6 * k, v.begin() + 6 * k + 6);
    out[levels].push_back(v.back());
  }
  return out;
}

namespace {

// Free three-parameter fit and PIT statistic; failures are flagged.
std::pair<hazard::FitResult, double> fit_and_test(const std::vector<double>& x, bool& ok) {
  try {
    const hazard::FitResult f = hazard::fit_mle(x);
    ok = f.converged;
    return {f, hazard::pit_statistic(x, f.params).ks};
  } catch (const std::exception&) {
    ok = false;
    return {hazard::FitResult{}, NAN};
  }
}

}  // namespace

DistributionFitResult run_distribution_fit(const DyadicDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate("dist-fit");
  DistributionFitResult out;
  const auto samples = level_samples(ds.vectors());
  out.models = fit_level_models(ds);

  // R1..R5: full model-generated data matrices of the same size.
  std::vector<std::vector<std::vector<double>>> model_samples(cfg.model_sets);
  const Rng model_root(cfg.seed, 2);
  parallel_for(cfg.model_sets, cfg.threads, [&](std::size_t s) {
    Rng rng = model_root.child(s);
    std::vector<std::vector<double>> vecs;
    for (std::size_t i = 0; i < ds.chains.size(); ++i) vecs.push_back(dyadic::simulate_ar(out.models, rng));
    model_samples[s] = level_samples(vecs);
  });

  out.rows.resize(samples.size());
  parallel_for(samples.size(), cfg.threads, [&](std::size_t k) {
    LevelFitRow& row = out.rows[k];
    row.k = k;
    row.count = samples[k].size();
    std::tie(row.fit, row.ks) = fit_and_test(samples[k], row.ok);
    for (const auto& ms : model_samples) {
      bool ok = false;
      row.model_ks.push_back(fit_and_test(ms[k], ok).second);
    }
  });
  return out;
}

nlohmann::json ar_model_to_json(const dyadic::ARModel& m) {
  auto cond = [](const dyadic::ConditionalFit& c) {
    return json{{"location", c.location}, {"sigma", c.sigma}, {"slopes", c.slopes}};
  };
  json j;
  j["level"] = m.level;
  j["lambda"] = 1.0;
  json rows = json::array();
  rows.push_back(cond(m.marginal));
  for (const auto& r : m.rows) rows.push_back(cond(r));
  j["conditionals"] = rows;  // W1..W6; entry i holds gamma_{i0}, gamma_{is}, sigma_i
  if (m.cross) j["cross"] = cond(*m.cross);
  return j;
}

void write_distribution_fit(const DistributionFitResult& r, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  std::vector<std::string> h = {"k", "count", "kolmogorov", "mu", "sigma", "lambda", "converged"};
  const std::size_t sets = r.rows.empty() ? 0 : r.rows.front().model_ks.size();
  for (std::size_t s = 0; s < sets; ++s) h.push_back("R" + std::to_string(s + 1));
  io::CsvWriter w(cfg.out_dir / "dist_fit.csv", prov, h);
  for (const auto& row : r.rows) {
    std::vector<std::string> cells = {std::to_string(row.k), std::to_string(row.count),
                                      cost_str(row.ks),      cost_str(row.fit.params.mu),
                                      cost_str(row.fit.params.sigma),
                                      cost_str(row.fit.params.lambda), row.ok ? "1" : "0"};
    for (double v : row.model_ks) cells.push_back(cost_str(v));
    w.row(cells);
  }
  json j;
  j["provenance"] = prov.to_json();
  json models = json::array();
  for (const auto& m : r.models) models.push_back(ar_model_to_json(m));
  j["models"] = models;
  io::write_json(cfg.out_dir / "ar_models.json", j);
}

ModelTestReport run_full_model_test(const DyadicDataset& ds, const ExperimentConfig& cfg) {
  cfg.validate("model-test");
  ModelTestReport rep;
  rep.reps = ds.chains.size();
  rep.sigma_scale = cfg.sigma_scale;
  rep.models = fit_level_models(ds);
  const auto data = ds.vectors();
  rep.dim = data.front().size();

  const std::size_t m = cfg.model_repeats;
  rep.data_vs_model.resize(m);
  rep.model_vs_model.resize(m);
  rep.data_vs_model_shrunk.resize(m);
  rep.model_vs_model_shrunk.resize(m);
  const Rng root(cfg.seed, 3);
  parallel_for(m, cfg.threads, [&](std::size_t t) {
    Rng rng = root.child(t);
    auto cloud = [&](double scale) {
      std::vector<std::vector<double>> v;
      v.reserve(rep.reps);
      for (std::size_t i = 0; i < rep.reps; ++i) v.push_back(dyadic::simulate_ar(rep.models, rng, scale));
      return v;
    };
    const auto m1 = cloud(1.0), m2 = cloud(1.0), m3 = cloud(1.0);
    rep.data_vs_model[t] = dyadic::model_vs_data_wasserstein(m1, data);
    rep.model_vs_model[t] = dyadic::model_vs_data_wasserstein(m2, m3);
    const auto s1 = cloud(cfg.sigma_scale), s2 = cloud(cfg.sigma_scale), s3 = cloud(cfg.sigma_scale);
    rep.data_vs_model_shrunk[t] = dyadic::model_vs_data_wasserstein(s1, data);
    rep.model_vs_model_shrunk[t] = dyadic::model_vs_data_wasserstein(s2, s3);
  });
  return rep;
}

void write_model_test(const ModelTestReport& r, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  const std::vector<std::string> h = {"repeat", "data_vs_model", "model_vs_model",
                                      "data_vs_model_shrunk", "model_vs_model_shrunk"};
  io::CsvWriter w(cfg.out_dir / "model_test.csv", prov, h);
  for (std::size_t t = 0; t < r.data_vs_model.size(); ++t) {
    const std::vector<std::string> cells = {
        std::to_string(t), cost_str(r.data_vs_model[t]), cost_str(r.model_vs_model[t]),
        cost_str(r.data_vs_model_shrunk[t]), cost_str(r.model_vs_model_shrunk[t])};
    w.row(cells);
  }
  auto summary = [](const std::vector<double>& v) {
    return json{{"mean", stats::mean(v)}, {"sd", v.size() > 1 ? stats::stddev(v) : 0.0}};
  };
  json j;
  j["provenance"] = prov.to_json();
  j["reps"] = r.reps;
  j["dim"] = r.dim;
  j["sigma_scale"] = r.sigma_scale;
  j["data_vs_model"] = summary(r.data_vs_model);
  j["model_vs_model"] = summary(r.model_vs_model);
  j["data_vs_model_shrunk"] = summary(r.data_vs_model_shrunk);
  j["model_vs_model_shrunk"] = summary(r.model_vs_model_shrunk);
  json models = json::array();
  for (const auto& m : r.models) models.push_back(ar_model_to_json(m));
  j["models"] = models;
  io::write_json(cfg.out_dir / "model_test.json", j);
}

hazard::Cutpoints run_calibration(const ExperimentConfig& cfg) {
  cfg.validate("calibrate");
  return hazard::calibrate_cutpoints(cfg.n_obs, cfg.trials, Rng(cfg.seed, 4), cfg.threads);
}

void write_calibration(const hazard::Cutpoints& c, const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const auto prov = cfg.provenance();
  const std::vector<std::string> h = {"rank", "kolmogorov"};
  io::CsvWriter w(cfg.out_dir / "calibration.csv", prov, h);
  for (std::size_t t = 0; t < c.statistics.size(); ++t) {
    const std::vector<std::string> cells = {std::to_string(t), cost_str(c.statistics[t])};
    w.row(cells);
  }
  json j;
  j["provenance"] = prov.to_json();
  j["n_obs"] = cfg.n_obs;
  j["trials"] = c.trials;
  j["discarded"] = c.discarded;
  j["c05"] = c.c05;
  j["c01"] = c.c01;
  io::write_json(cfg.out_dir / "calibration.json", j);
}

}  // namespace akt::exp
