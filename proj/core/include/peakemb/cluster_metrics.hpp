#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace peakemb {

/// Points plus one group label per point.
struct LabeledPointSet {
  std::vector<std::vector<double>> points;
  std::vector<std::string> labels;

  std::size_t size() const { return points.size(); }
  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

/// Throws InvalidPointSet / DimensionMismatch on malformed sets (fewer than
/// two points, label count mismatch, ragged dimensions).
void validate(const LabeledPointSet& set);

/// Dense symmetric n x n matrix stored row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Euclidean distances. Rows may be split over `workers` threads; each entry is
/// computed independently so the result does not depend on the worker count.
DistanceMatrix pairwise_distances(const LabeledPointSet& set, unsigned workers = 1);

/// Mean silhouette score. Points alone in their label score 0. Throws
/// SingleLabel when fewer than two labels are present.
double silhouette_coefficient(const LabeledPointSet& set);
double silhouette_coefficient(const LabeledPointSet& set, const DistanceMatrix& d);

/// Fraction of points whose nearest other point carries the same label.
/// Distance ties go to the lowest index.
double gsi(const LabeledPointSet& set);
double gsi(const LabeledPointSet& set, const DistanceMatrix& d);

struct MetricPair {
  double sc = 0.0;
  double gsi = 0.0;
};

/// Per-dimension z-scaling over the set (population std; constant columns -> 0).
LabeledPointSet standardized(const LabeledPointSet& set);

MetricPair evaluate_metrics(const LabeledPointSet& set, bool standardize = false);

}  // namespace peakemb
