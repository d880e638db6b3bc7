#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "akt/errors.hpp"
#include "akt/experiments.hpp"
#include "akt/price_map.hpp"
#include "akt/stats.hpp"

using namespace akt;
using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::string metric;
  std::string out;
  unsigned threads = 0;
  std::vector<std::size_t> sizes;
  std::vector<std::string> algorithms, kinds;
  std::string records;
  std::size_t k_max = 0, model_sets = 0, model_repeats = 0, n_obs = 0, trials = 0, n = 0,
              resolution = 0, buckets = 0;
  double sigma_scale = 0;
};

// Config file first, then every flag given on the command line.
exp::ExperimentConfig build_config(const CLI::App& app, const CLI::App& sub, const Flags& f) {
  exp::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw InputError("cannot open config " + f.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw InputError(std::string("config: ") + e.what());
    }
    cfg = exp::ExperimentConfig::from_json(j);
  }
  auto given = [&](const char* name) {
    const CLI::Option* o = sub.get_option_no_throw(name);
    if (o && o->count() > 0) return true;
    o = app.get_option_no_throw(name);
    return o && o->count() > 0;
  };
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--reps")) cfg.reps = f.reps;
  if (given("--metric")) cfg.metric = parse_metric(f.metric);
  if (given("--out")) cfg.out_dir = f.out;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--sizes")) cfg.sizes = f.sizes;
  if (given("--algorithms")) {
    cfg.algorithms.clear();
    for (const auto& a : f.algorithms) cfg.algorithms.push_back(exp::parse_algorithm(a));
  }
  if (given("--kinds")) {
    cfg.kinds.clear();
    for (const auto& k : f.kinds) cfg.kinds.push_back(parse_sample_kind(k));
  }
  if (given("--k-max")) cfg.k_max = f.k_max;
  if (given("--model-sets")) cfg.model_sets = f.model_sets;
  if (given("--model-repeats")) cfg.model_repeats = f.model_repeats;
  if (given("--sigma-scale")) cfg.sigma_scale = f.sigma_scale;
  if (given("--n-obs")) cfg.n_obs = f.n_obs;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("-n")) cfg.n = f.n;
  if (given("--resolution")) cfg.resolution = f.resolution;
  if (given("--buckets")) cfg.buckets = f.buckets;
  return cfg;
}

exp::DyadicDataset load_or_run(const exp::ExperimentConfig& cfg, const std::string& records) {
  if (!records.empty()) return exp::dataset_from_chains(io::read_records_csv(records));
  return exp::run_dyadic(cfg);
}

void print_bench(const exp::BenchResult& r) {
  std::printf("%6s %-4s %8s %12s %12s %10s\n", "n", "lab", "count", "mean", "sd", "skew");
  for (const auto& s : r.series)
    std::printf("%6zu %-4s %8zu %12.6f %12.6f %10.4f\n", s.n, s.label.c_str(), s.count, s.mean, s.sd,
                s.skewness);
  for (const auto& t : r.correlations) {
    std::printf("correlations at n=%zu\n      ", t.n);
    for (const auto& l : t.labels) std::printf("%7s", l.c_str());
    std::printf("\n");
    for (std::size_t a = 0; a < t.labels.size(); ++a) {
      std::printf("%6s", t.labels[a].c_str());
      for (std::size_t b = 0; b < t.labels.size(); ++b) std::printf("%7.3f", t.matrix[a][b]);
      std::printf("\n");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random assignment cost experiments on the unit square"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON experiment configuration");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--reps", f.reps, "Replications");
  app.add_option("--metric", f.metric, "Cost metric")->check(CLI::IsMember({"plane", "torus"}));
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--threads", f.threads, "Worker threads (0: all cores)");

  auto* bench = app.add_subcommand("bench", "Exact, Ajtai and improved matching statistics");
  bench->add_option("--sizes", f.sizes, "Point counts (powers of 4 for Ajtai)");
  bench->add_option("--algorithms", f.algorithms, "exact, ajtai, ajtai+improve");
  bench->add_option("--kinds", f.kinds, "uniform, normal");

  auto* growth = app.add_subcommand("mean-growth", "Mean exact cost against n with the log law fit");
  growth->add_option("--sizes", f.sizes, "Point counts");

  auto* dist = app.add_subcommand("dist-fit", "Per-level hazard-family fits and PIT statistics");
  auto* dyad = app.add_subcommand("dyadic", "Doubling dynamics records and recursion fits");
  auto* model = app.add_subcommand("model-test", "67-dimensional model against data");
  for (auto* s : {dist, dyad, model}) s->add_option("--k-max", f.k_max, "Top level (at most 10)");
  for (auto* s : {dist, model})
    s->add_option("--records", f.records, "Reuse a dyadic_records.csv instead of simulating");
  dist->add_option("--model-sets", f.model_sets, "Model-generated data sets (R columns)");
  model->add_option("--model-repeats", f.model_repeats, "Independent model draws");
  model->add_option("--sigma-scale", f.sigma_scale, "Sigma shrink factor for the diagnostic");

  auto* pmap = app.add_subcommand("price-map", "Dual price map image of one toroidal instance");
  pmap->add_option("-n", f.n, "Points per side");
  pmap->add_option("--resolution", f.resolution, "Pixels per side (>= 64)");
  pmap->add_option("--buckets", f.buckets, "Colour buckets for pixel statistics");

  auto* cal = app.add_subcommand("calibrate", "Monte Carlo cut-points for the PIT statistic");
  cal->add_option("--n-obs", f.n_obs, "Observations per trial");
  cal->add_option("--trials", f.trials, "Trials (>= 2000)");

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const exp::ExperimentConfig cfg = build_config(app, *sub, f);
    const std::string name = sub->get_name();

    if (name == "bench") {
      const auto r = exp::run_matching_bench(cfg);
      exp::write_bench(r, cfg);
      print_bench(r);
    } else if (name == "mean-growth") {
      const auto r = exp::run_mean_growth(cfg);
      exp::write_mean_growth(r, cfg);
      for (const auto& row : r.rows)
        std::printf("n=%6zu mean=%.6f se=%.6f\n", row.n, row.mean, row.se);
      std::printf("alpha=%.4f beta=%.4f gamma=%.4f converged=%d\n", r.fit.alpha, r.fit.beta,
                  r.fit.gamma, r.fit.converged);
    } else if (name == "dyadic") {
      const auto ds = exp::run_dyadic(cfg);
      const std::size_t lo = ds.k_max >= 2 ? ds.k_max - 2 : 0;
      const auto rec = exp::run_recursion(ds, lo, ds.k_max);
      exp::write_dyadic(ds, rec, cfg);
      for (std::size_t k = 0; k < rec.per_level.size(); ++k) {
        const auto& fit = rec.per_level[k];
        std::printf("k=%2zu a=%.4f b=%.4f noise_sd=%.4f defect=%.4f restricted_sd=%.4f\n", k, fit.a,
                    fit.b, fit.noise_sd, fit.stationarity_defect(), fit.restricted_sd);
      }
      if (rec.pooled)
        std::printf("pooled k=%zu..%zu a=%.4f b=%.4f noise_sd=%.4f defect=%.4f\n", rec.pooled_lo,
                    rec.pooled_hi, rec.pooled->a, rec.pooled->b, rec.pooled->noise_sd,
                    rec.pooled->stationarity_defect());
    } else if (name == "dist-fit") {
      const auto ds = load_or_run(cfg, f.records);
      const auto r = exp::run_distribution_fit(ds, cfg);
      exp::write_distribution_fit(r, cfg);
      for (const auto& row : r.rows) {
        std::printf("k=%2zu N=%5zu ks=%.4f", row.k, row.count, row.ks);
        for (double v : row.model_ks) std::printf(" %.4f", v);
        std::printf("%s\n", row.ok ? "" : "  (fit not converged)");
      }
    } else if (name == "model-test") {
      const auto ds = load_or_run(cfg, f.records);
      const auto r = exp::run_full_model_test(ds, cfg);
      exp::write_model_test(r, cfg);
      std::printf("dim=%zu reps=%zu\n", r.dim, r.reps);
      std::printf("data vs model   %.2f (sd %.2f)\n", stats::mean(r.data_vs_model), stats::stddev(r.data_vs_model));
      std::printf("model vs model  %.2f (sd %.2f)\n", stats::mean(r.model_vs_model), stats::stddev(r.model_vs_model));
      std::printf("sigma x %.3f: data vs model %.2f, model vs model %.2f\n", r.sigma_scale,
                  stats::mean(r.data_vs_model_shrunk), stats::mean(r.model_vs_model_shrunk));
    } else if (name == "price-map") {
      cfg.validate("price-map");
      std::filesystem::create_directories(cfg.out_dir);
      const auto run = render_price_map(cfg.n, cfg.seed, cfg.resolution, cfg.out_dir / "price_map.ppm",
                                        cfg.buckets);
      json j;
      j["provenance"] = cfg.provenance().to_json();
      j["n"] = run.map.n;
      j["resolution"] = run.map.resolution;
      j["total_cost"] = run.map.total_cost;
      j["min_value"] = run.map.min_value;
      j["max_value"] = run.map.max_value;
      j["buckets"] = cfg.buckets;
      j["wife_counts"] = run.map.wife_counts;
      j["husband_counts"] = run.map.husband_counts;
      io::write_json(cfg.out_dir / "price_map.json", j);
      std::printf("n=%zu total_cost=%.6f max_price=%.6f image=%s\n", run.map.n, run.map.total_cost,
                  run.map.max_value, (cfg.out_dir / "price_map.ppm").c_str());
    } else if (name == "calibrate") {
      const auto c = exp::run_calibration(cfg);
      exp::write_calibration(c, cfg);
      std::printf("n_obs=%zu trials=%zu discarded=%zu c05=%.4f c01=%.4f\n", cfg.n_obs, c.trials,
                  c.discarded, c.c05, c.c01);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "akt: %s\n", e.what());
    return 2;
  }
  return 0;
}
