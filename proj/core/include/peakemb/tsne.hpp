#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "peakemb/cluster_metrics.hpp"

namespace peakemb {

struct TsneConfig {
  double perplexity = 15.0;
  int iterations = 1000;
  double learning_rate = 100.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  double early_exaggeration = 4.0;
  int exaggeration_iterations = 100;
  std::uint64_t seed = 0;
  /// Iterations after which the (unexaggerated) KL divergence is recorded.
  std::vector<int> kl_checkpoints = {100, 250, 500, 1000};
};

using Point2 = std::array<double, 2>;

struct KlCheckpoint {
  int iteration = 0;
  double kl = 0.0;
};

struct Projection2D {
  std::vector<Point2> coordinates;
  std::vector<std::string> labels;
  double final_kl = 0.0;
  std::vector<KlCheckpoint> kl_trace;
};

/// Input-space affinities. `joint` is the symmetrized n x n matrix (row-major,
/// zero diagonal, off-diagonal floor 1e-12, sums to 1). `entropy` holds the
/// Shannon entropy in nats of each point's conditional distribution, so
/// exp(entropy[i]) is the perplexity actually reached for point i.
struct Affinities {
  std::size_t n = 0;
  std::vector<double> joint;
  std::vector<double> entropy;
  std::vector<double> precision;  // Gaussian beta = 1 / (2 sigma^2), scaled distances
};

Affinities compute_affinities(const LabeledPointSet& set, double perplexity);

/// Seeded standard-normal draws scaled by 1e-4.
std::vector<Point2> initial_coordinates(std::size_t n, std::uint64_t seed);

/// KL(P || Q) with Q the Student-t affinities of `y`.
double kl_divergence(const Affinities& p, const std::vector<Point2>& y);

/// Exact O(n^2) t-SNE with momentum, per-parameter gains and early exaggeration.
Projection2D tsne_project(const LabeledPointSet& set, const TsneConfig& cfg);
/// Same, starting from caller-supplied coordinates instead of the seeded draw.
Projection2D tsne_project(const LabeledPointSet& set, const TsneConfig& cfg,
                          std::vector<Point2> initial);

}  // namespace peakemb
