#include "peakemb/cluster_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "peakemb/error.hpp"

namespace peakemb {
namespace {

// Dense label ids in order of first appearance.
std::vector<std::size_t> label_ids(const std::vector<std::string>& labels, std::size_t& count) {
  std::map<std::string, std::size_t> ids;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = ids.try_emplace(labels[i], ids.size()).first->second;
  }
  count = ids.size();
  return out;
}

void fill_row(const LabeledPointSet& set, DistanceMatrix& d, std::size_t i) {
  const auto& a = set.points[i];
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (i == j) continue;
    const auto& b = set.points[j];
    double ss = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) ss += (a[k] - b[k]) * (a[k] - b[k]);
    d(i, j) = std::sqrt(ss);
  }
}

}  // namespace

void validate(const LabeledPointSet& set) {
  if (set.points.size() < 2) throw Error(ErrorCode::InvalidPointSet, "need at least two points");
  if (set.labels.size() != set.points.size()) {
    throw Error(ErrorCode::InvalidPointSet, "label count does not match point count");
  }
  const std::size_t dim = set.points.front().size();
  if (dim == 0) throw Error(ErrorCode::InvalidPointSet, "points have zero dimension");
  for (const auto& p : set.points) {
    if (p.size() != dim) throw Error(ErrorCode::DimensionMismatch, "points differ in dimension");
  }
}

DistanceMatrix pairwise_distances(const LabeledPointSet& set, unsigned workers) {
  validate(set);
  const std::size_t n = set.size();
  DistanceMatrix d(n);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fill_row(set, d, i);
    return d;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fill_row(set, d, i);
    });
  }
  pool.clear();
  return d;
}

double silhouette_coefficient(const LabeledPointSet& set) {
  return silhouette_coefficient(set, pairwise_distances(set));
}

double silhouette_coefficient(const LabeledPointSet& set, const DistanceMatrix& d) {
  validate(set);
  std::size_t groups = 0;
  const auto ids = label_ids(set.labels, groups);
  if (groups < 2) throw Error(ErrorCode::SingleLabel, "silhouette needs at least two labels");

  const std::size_t n = set.size();
  std::vector<std::size_t> group_size(groups, 0);
  for (auto id : ids) ++group_size[id];

  double total = 0.0;
  std::vector<double> sums(groups);
  for (std::size_t i = 0; i < n; ++i) {
    if (group_size[ids[i]] == 1) continue;  // singleton scores 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[ids[j]] += d(i, j);
    }
    const double a = sums[ids[i]] / static_cast<double>(group_size[ids[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < groups; ++g) {
      if (g != ids[i]) b = std::min(b, sums[g] / static_cast<double>(group_size[g]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double gsi(const LabeledPointSet& set) { return gsi(set, pairwise_distances(set)); }

double gsi(const LabeledPointSet& set, const DistanceMatrix& d) {
  validate(set);
  const std::size_t n = set.size();
  std::size_t matches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t nearest = i == 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && d(i, j) < d(i, nearest)) nearest = j;
    }
    if (set.labels[nearest] == set.labels[i]) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(n);
}

LabeledPointSet standardized(const LabeledPointSet& set) {
  validate(set);
  LabeledPointSet out = set;
  const std::size_t n = set.size();
  for (std::size_t k = 0; k < set.dimension(); ++k) {
    double mean = 0.0;
    for (const auto& p : set.points) mean += p[k];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& p : set.points) var += (p[k] - mean) * (p[k] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (auto& p : out.points) p[k] = sd > 0.0 ? (p[k] - mean) / sd : 0.0;
  }
  return out;
}

MetricPair evaluate_metrics(const LabeledPointSet& set, bool standardize) {
  if (standardize) return evaluate_metrics(standardized(set), false);
  const auto d = pairwise_distances(set);
  return {silhouette_coefficient(set, d), gsi(set, d)};
}

}  // namespace peakemb
