#include "akt/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "akt/assignment.hpp"
#include "akt/errors.hpp"
#include "akt/regression.hpp"
#include "akt/stats.hpp"

namespace akt::dyadic {

std::vector<QuadSets> evolve(const Rng& rng, std::size_t k_max, Metric metric) {
  if (k_max > kMaxLevel) throw InputError("evolve: k_max above " + std::to_string(kMaxLevel));
  Rng stream = rng;
  std::vector<QuadSets> levels;
  levels.reserve(k_max + 1);
  QuadSets q;
  q.level = 0;
  q.a = sample(SampleKind::UniformSquare, 1, stream, metric);
  q.b = sample(SampleKind::UniformSquare, 1, stream, metric);
  q.c = sample(SampleKind::UniformSquare, 1, stream, metric);
  q.d = sample(SampleKind::UniformSquare, 1, stream, metric);
  levels.push_back(q);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const QuadSets& prev = levels.back();
    const std::size_t n = std::size_t{1} << k;
    QuadSets next;
    next.level = k;
    next.a = prev.a.concat(prev.b);
    next.c = prev.c.concat(prev.d);
    next.b = sample(SampleKind::UniformSquare, n, stream, metric);
    next.d = sample(SampleKind::UniformSquare, n, stream, metric);
    levels.push_back(std::move(next));
  }
  return levels;
}

namespace {

std::array<double, 6> six_costs(const QuadSets& q, bool skip_first) {
  std::array<double, 6> w{};
  if (!skip_first) w[0] = solve_exact(q.a, q.c).total_cost;
  w[1] = solve_exact(q.a, q.d).total_cost;
  w[2] = solve_exact(q.b, q.c).total_cost;
  w[3] = solve_exact(q.b, q.d).total_cost;
  w[4] = solve_exact(q.a, q.b).total_cost;
  w[5] = solve_exact(q.c, q.d).total_cost;
  return w;
}

}  // namespace

DyadicRecord six_distances(const QuadSets& q) {
  DyadicRecord r;
  r.level = q.level;
  r.w = six_costs(q, false);
  r.merged = solve_exact(q.a.concat(q.b), q.c.concat(q.d)).total_cost;
  return r;
}

std::vector<DyadicRecord> run_chain(const Rng& rng, std::size_t k_max, Metric metric) {
  if (k_max >= kMaxLevel + 1) throw InputError("run_chain: k_max too large");
  const std::vector<QuadSets> levels = evolve(rng, k_max, metric);
  std::vector<DyadicRecord> out(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    out[k].level = k;
    out[k].w = six_costs(levels[k], false);
  }
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) out[k].merged = out[k + 1].w[0];
  const QuadSets& top = levels.back();
  out.back().merged = solve_exact(top.a.concat(top.b), top.c.concat(top.d)).total_cost;
  return out;
}

double RecursionFit::stationarity_defect() const { return std::fabs(4 * a - 2 * b - 1); }

RecursionFit fit_recursion(std::span<const DyadicRecord> records) {
  if (records.size() < kMinRecursionRecords)
    throw InputError("fit_recursion: need at least 100 records");
  std::vector<std::vector<double>> cols(2, std::vector<double>(records.size()));
  std::vector<double> y(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    cols[0][i] = records[i].s1();
    cols[1][i] = records[i].s2();
    y[i] = records[i].merged;
  }
  const stats::OlsResult plain = stats::ols(cols, y, false);
  const stats::OlsResult diag = stats::ols(cols, y, true);

  RecursionFit f;
  f.count = records.size();
  f.a = plain.coefficients[0];
  f.b = -plain.coefficients[1];
  f.noise_sd = plain.residual_sd();
  f.residuals = plain.residuals;
  f.intercept_diag = diag.coefficients[0];
  f.a_diag = diag.coefficients[1];
  f.b_diag = -diag.coefficients[2];

  std::vector<double> restricted(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) restricted[i] = y[i] - 0.25 * cols[0][i];
  f.restricted_sd = stats::stddev(restricted);
  f.restricted_variance = f.restricted_sd * f.restricted_sd;
  return f;
}

double MeanLawFit::operator()(double n) const { return beta * std::log(n + alpha) + gamma; }

namespace {

struct LawState {
  double alpha, beta, gamma, rss;
};

double law_rss(std::span<const std::pair<double, double>> pts, double alpha, double beta,
               double gamma) {
  double s = 0;
  for (const auto& [n, m] : pts) {
    const double r = m - (beta * std::log(n + alpha) + gamma);
    s += r * r;
  }
  return s;
}

// Levenberg-Marquardt from a given alpha, with beta and gamma started at
// their least-squares values for that alpha.
std::pair<LawState, bool> levenberg_marquardt(std::span<const std::pair<double, double>> pts,
                                              double alpha0, double alpha_floor) {
  std::vector<double> lg(pts.size()), y(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    lg[j] = std::log(pts[j].first + alpha0);
    y[j] = pts[j].second;
  }
  const std::vector<std::vector<double>> cols = {lg};
  const stats::OlsResult init = stats::ols(cols, y, true);
  LawState s{alpha0, init.coefficients[1], init.coefficients[0], 0.0};
  s.rss = law_rss(pts, s.alpha, s.beta, s.gamma);

  double damping = 1e-3;
  bool converged = false;
  for (int iter = 0; iter < 1000 && !converged; ++iter) {
    double jtj[3][3] = {}, jtr[3] = {};
    for (const auto& [n, m] : pts) {
      const double l = std::log(n + s.alpha);
      const double r = m - (s.beta * l + s.gamma);
      const double g[3] = {s.beta / (n + s.alpha), l, 1.0};
      for (int a = 0; a < 3; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < 3; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    double gmax = 0;
    for (double v : jtr) gmax = std::max(gmax, std::fabs(v));
    if (gmax <= 1e-15 || s.rss <= 1e-30) {
      converged = true;
      break;
    }
    bool improved = false;
    while (damping < 1e16) {
      double m[3][4];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) m[a][b] = jtj[a][b] + (a == b ? damping * jtj[a][a] : 0.0);
        m[a][3] = jtr[a];
      }
      // Gaussian elimination with partial pivoting on the 3x3 system.
      bool singular = false;
      for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
          if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        if (m[piv][c] == 0) {
          singular = true;
          break;
        }
        std::swap(m[c], m[piv]);
        for (int r = c + 1; r < 3; ++r) {
          const double f = m[r][c] / m[c][c];
          for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
        }
      }
      double step[3] = {};
      if (!singular)
        for (int c = 2; c >= 0; --c) {
          double v = m[c][3];
          for (int k = c + 1; k < 3; ++k) v -= m[c][k] * step[k];
          step[c] = v / m[c][c];
        }
      const LawState t{s.alpha + step[0], s.beta + step[1], s.gamma + step[2], 0.0};
      if (!singular && t.alpha > alpha_floor) {
        const double rss = law_rss(pts, t.alpha, t.beta, t.gamma);
        if (rss < s.rss) {
          const double rel = (s.rss - rss) / std::max(s.rss, 1e-300);
          s = t;
          s.rss = rss;
          damping = std::max(damping * 0.3, 1e-12);
          improved = true;
          if (rel < 1e-14) converged = true;
          break;
        }
      }
      damping *= 10;
    }
    if (!improved) {
      // No downhill step at any damping: a stationary point to rounding.
      converged = true;
      break;
    }
  }
  return {s, converged};
}

}  // namespace

MeanLawFit fit_mean_law(std::span<const std::pair<double, double>> points) {
  std::vector<double> ns;
  for (const auto& [n, m] : points) {
    if (!(n > 0) || !std::isfinite(n) || !std::isfinite(m))
      throw InputError("fit_mean_law: sizes must be positive and values finite");
    ns.push_back(n);
  }
  std::sort(ns.begin(), ns.end());
  if (std::unique(ns.begin(), ns.end()) - ns.begin() < 4)
    throw InputError("fit_mean_law: need at least 4 distinct sizes");
  const double floor = -ns.front();

  MeanLawFit best;
  best.rss = std::numeric_limits<double>::infinity();
  for (const double alpha0 : {0.0, 0.5, 1.0}) {
    const auto [s, ok] = levenberg_marquardt(points, alpha0, floor);
    if (s.rss < best.rss) {
      best.alpha = s.alpha;
      best.beta = s.beta;
      best.gamma = s.gamma;
      best.rss = s.rss;
      best.converged = ok;
    }
  }
  return best;
}

double ConditionalFit::mean_location(std::span<const double> given) const {
  if (given.size() < slopes.size()) throw InputError("ConditionalFit: too few conditioning values");
  double m = location;
  for (std::size_t s = 0; s < slopes.size(); ++s) m += slopes[s] * given[s];
  return m;
}

double ARModel::gamma(std::size_t i, std::size_t s) const {
  if (i < 2 || i > 6 || s >= i) throw InputError("ARModel::gamma: index out of range");
  const ConditionalFit& row = rows[i - 2];
  return s == 0 ? row.location : row.slopes[s - 1];
}

double ARModel::sigma(std::size_t i) const {
  if (i < 1 || i > 6) throw InputError("ARModel::sigma: index out of range");
  return i == 1 ? marginal.sigma : rows[i - 2].sigma;
}

namespace {

ConditionalFit fit_conditional(const std::vector<std::vector<double>>& given,
                               const std::vector<double>& y) {
  ConditionalFit c;
  std::vector<double> z = y;
  if (!given.empty()) {
    const stats::OlsResult r = stats::ols(given, y, true);
    c.slopes.assign(r.coefficients.begin() + 1, r.coefficients.end());
    for (std::size_t j = 0; j < y.size(); ++j)
      for (std::size_t s = 0; s < given.size(); ++s) z[j] -= c.slopes[s] * given[s][j];
  }
  hazard::FitOptions opt;
  opt.fixed_lambda = 1.0;
  const hazard::FitResult f = hazard::fit_mle(z, opt);
  c.location = f.params.mu;
  c.sigma = f.params.sigma;
  return c;
}

}  // namespace

ARModel fit_ar_model(std::span<const DyadicRecord> records, bool with_cross) {
  if (records.size() < kMinARRecords) throw InputError("fit_ar_model: need at least 200 records");
  const std::size_t level = records.front().level;
  for (const auto& r : records)
    if (r.level != level) throw InputError("fit_ar_model: records span several levels");

  std::vector<std::vector<double>> w(6, std::vector<double>(records.size()));
  std::vector<double> merged(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    for (int i = 0; i < 6; ++i) w[i][j] = records[j].w[i];
    merged[j] = records[j].merged;
  }

  ARModel m;
  m.level = level;
  m.marginal = fit_conditional({}, w[0]);
  for (std::size_t i = 1; i < 6; ++i) {
    const std::vector<std::vector<double>> given(w.begin(), w.begin() + i);
    m.rows[i - 1] = fit_conditional(given, w[i]);
  }
  if (with_cross) m.cross = fit_conditional(w, merged);
  return m;
}

namespace {

double draw(const ConditionalFit& c, std::span<const double> given, double sigma_scale, Rng& rng) {
  const double mu = c.mean_location(given);
  const double sigma = c.sigma * sigma_scale;
  if (sigma == 0.0) return mu;
  return hazard::sample({mu, sigma, 1.0}, rng);
}

}  // namespace

std::vector<double> simulate_ar(std::span<const ARModel> models, Rng& rng, double sigma_scale) {
  if (models.empty()) throw InputError("simulate_ar: no level models");
  if (!(sigma_scale >= 0) || !std::isfinite(sigma_scale))
    throw DomainError("simulate_ar: sigma scale must be finite and non-negative");
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (models[k].level != k) throw InputError("simulate_ar: level models must cover 0..L-1 in order");
    if (!models[k].cross)
      throw InputError("simulate_ar: missing cross-level model at level " + std::to_string(k));
  }
  std::vector<double> out;
  out.reserve(6 * models.size() + 1);
  std::array<double, 6> prev{};
  for (std::size_t k = 0; k < models.size(); ++k) {
    const ARModel& m = models[k];
    std::array<double, 6> cur{};
    cur[0] = k == 0 ? draw(m.marginal, {}, sigma_scale, rng)
                    : draw(*models[k - 1].cross, prev, sigma_scale, rng);
    for (std::size_t i = 1; i < 6; ++i)
      cur[i] = draw(m.rows[i - 1], std::span<const double>(cur.data(), i), sigma_scale, rng);
    out.insert(out.end(), cur.begin(), cur.end());
    prev = cur;
  }
  out.push_back(draw(*models.back().cross, prev, sigma_scale, rng));
  return out;
}

std::vector<double> data_vector(std::span<const DyadicRecord> chain) {
  if (chain.empty()) throw InputError("data_vector: empty chain");
  std::vector<double> out;
  out.reserve(6 * chain.size() + 1);
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (chain[k].level != k) throw InputError("data_vector: chain levels must be 0..L-1 in order");
    out.insert(out.end(), chain[k].w.begin(), chain[k].w.end());
  }
  out.push_back(chain.back().merged);
  return out;
}

double model_vs_data_wasserstein(std::span<const std::vector<double>> model,
                                 std::span<const std::vector<double>> data) {
  const std::size_t n = model.size();
  if (n == 0 || data.size() != n)
    throw InputError("model_vs_data_wasserstein: clouds must be non-empty and of equal count");
  const std::size_t dim = model.front().size();
  for (std::size_t i = 0; i < n; ++i)
    if (model[i].size() != dim || data[i].size() != dim)
      throw InputError("model_vs_data_wasserstein: dimension mismatch");
  std::vector<double> costs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t t = 0; t < dim; ++t) {
        const double d = model[i][t] - data[j][t];
        s += d * d;
      }
      costs[i * n + j] = s;
    }
  return solve_dense(costs, n).total_cost;
}

}  // namespace akt::dyadic
