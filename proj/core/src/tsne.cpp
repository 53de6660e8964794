#include "peakemb/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr double kEntropyTolerance = 1e-5;
constexpr int kMaxBisectionSteps = 50;

std::vector<double> squared_distances(const LabeledPointSet& set) {
  const std::size_t n = set.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double ss = 0.0;
      for (std::size_t k = 0; k < set.dimension(); ++k) {
        const double diff = set.points[i][k] - set.points[j][k];
        ss += diff * diff;
      }
      d[i * n + j] = d[j * n + i] = ss;
    }
  }
  return d;
}

// Fills row i of `cond` with exp(-beta * d) normalized, returns its entropy.
double conditional_row(const std::vector<double>& d, std::size_t n, std::size_t i, double beta,
                       std::vector<double>& cond) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) dmin = std::min(dmin, d[i * n + j]);
  }
  double sum = 0.0, weighted = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      cond[j] = 0.0;
      continue;
    }
    const double shifted = d[i * n + j] - dmin;
    cond[j] = std::exp(-beta * shifted);
    sum += cond[j];
    weighted += shifted * cond[j];
  }
  for (std::size_t j = 0; j < n; ++j) cond[j] /= sum;
  return std::log(sum) + beta * weighted / sum;
}

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

void validate_run(const LabeledPointSet& set, const TsneConfig& cfg) {
  validate(set);
  const std::size_t n = set.size();
  if (n < 5) throw Error(ErrorCode::TooFewPoints, "t-SNE needs at least 5 points");
  if (!(cfg.perplexity > 0.0) || !(cfg.perplexity < static_cast<double>(n - 1) / 3.0)) {
    throw Error(ErrorCode::PerplexityTooHigh,
                "perplexity must be below (n - 1) / 3 = " + std::to_string((n - 1) / 3.0));
  }
  if (cfg.iterations < 1 || !(cfg.learning_rate > 0.0) || !(cfg.early_exaggeration > 0.0) ||
      cfg.initial_momentum < 0.0 || cfg.initial_momentum >= 1.0 || cfg.final_momentum < 0.0 ||
      cfg.final_momentum >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "invalid t-SNE optimizer settings");
  }
}

}  // namespace

Affinities compute_affinities(const LabeledPointSet& set, double perplexity) {
  validate(set);
  const std::size_t n = set.size();
  auto d = squared_distances(set);
  // Perplexity is scale-free; working on max-scaled distances keeps beta near 1.
  const double dmax = *std::max_element(d.begin(), d.end());
  if (dmax > 0.0) {
    for (double& v : d) v /= dmax;
  }

  Affinities out;
  out.n = n;
  out.entropy.resize(n);
  out.precision.resize(n);
  const double target = std::log(perplexity);
  std::vector<double> cond(n * n, 0.0);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double h = conditional_row(d, n, i, beta, row);
    for (int step = 0; step < kMaxBisectionSteps && std::abs(h - target) > kEntropyTolerance;
         ++step) {
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      h = conditional_row(d, n, i, beta, row);
    }
    out.entropy[i] = h;
    out.precision[i] = beta;
    std::copy(row.begin(), row.end(), cond.begin() + static_cast<std::ptrdiff_t>(i * n));
  }

  out.joint.assign(n * n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * n), kProbabilityFloor);
      out.joint[i * n + j] = p;
      total += p;
    }
  }
  for (double& p : out.joint) p /= total;
  return out;
}

std::vector<Point2> initial_coordinates(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point2> y(n);
  for (auto& p : y) {
    for (double& c : p) {
      // Box-Muller, one draw per pair of uniforms.
      const double u1 = uniform01(rng);
      const double u2 = uniform01(rng);
      c = 1e-4 * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  return y;
}

double kl_divergence(const Affinities& p, const std::vector<Point2>& y) {
  const std::size_t n = p.n;
  std::vector<double> num(n * n, 0.0);
  double sum_q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      num[i * n + j] = 1.0 / (1.0 + dx * dx + dy * dy);
      sum_q += num[i * n + j];
    }
  }
  double kl = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double pk = p.joint[k];
    if (pk > 0.0) kl += pk * std::log(pk / (num[k] / sum_q));
  }
  return std::max(kl, 0.0);
}

Projection2D tsne_project(const LabeledPointSet& set, const TsneConfig& cfg) {
  validate_run(set, cfg);
  return tsne_project(set, cfg, initial_coordinates(set.size(), cfg.seed));
}

Projection2D tsne_project(const LabeledPointSet& set, const TsneConfig& cfg,
                          std::vector<Point2> y) {
  validate_run(set, cfg);
  const std::size_t n = set.size();
  if (y.size() != n) throw Error(ErrorCode::ShapeMismatch, "initial coordinates do not match n");

  const Affinities aff = compute_affinities(set, cfg.perplexity);
  std::vector<Point2> update(n, Point2{0.0, 0.0});
  std::vector<Point2> gains(n, Point2{1.0, 1.0});
  std::vector<Point2> grad(n);
  std::vector<double> num(n * n, 0.0);

  Projection2D out;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const double exaggeration = iter < cfg.exaggeration_iterations ? cfg.early_exaggeration : 1.0;
    const double momentum =
        iter < cfg.momentum_switch_iteration ? cfg.initial_momentum : cfg.final_momentum;

    double sum_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        const double v = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i * n + j] = num[j * n + i] = v;
        sum_q += 2.0 * v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double v = num[i * n + j];
        const double mult = (exaggeration * aff.joint[i * n + j] - v / sum_q) * v;
        gx += mult * (y[i][0] - y[j][0]);
        gy += mult * (y[i][1] - y[j][1]);
      }
      grad[i] = {4.0 * gx, 4.0 * gy};
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        double& g = gains[i][c];
        const bool same_sign = (grad[i][c] > 0.0) == (update[i][c] > 0.0);
        g = same_sign ? std::max(g * 0.8, 0.01) : g + 0.2;
        update[i][c] = momentum * update[i][c] - cfg.learning_rate * g * grad[i][c];
        y[i][c] += update[i][c];
      }
    }
    Point2 mean{0.0, 0.0};
    for (const auto& p : y) {
      mean[0] += p[0];
      mean[1] += p[1];
    }
    for (auto& p : y) {
      p[0] -= mean[0] / static_cast<double>(n);
      p[1] -= mean[1] / static_cast<double>(n);
    }

    const int done = iter + 1;
    if (std::find(cfg.kl_checkpoints.begin(), cfg.kl_checkpoints.end(), done) !=
        cfg.kl_checkpoints.end()) {
      out.kl_trace.push_back({done, kl_divergence(aff, y)});
    }
  }

  out.coordinates = std::move(y);
  out.labels = set.labels;
  out.final_kl = kl_divergence(aff, out.coordinates);
  return out;
}

}  // namespace peakemb
