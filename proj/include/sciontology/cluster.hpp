#pragma once

// Weighted cosine distance, agglomerative hierarchical clustering, dendrogram
// cuts and medoid selection.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sciontology/features.hpp"
#include "sciontology/registry.hpp"

namespace sciontology {

/// Per-axis nonnegative weights, at least one positive. Axis names are
/// informational ("bin0".."binN-1", optionally the six rubric categories).
struct WeightVector {
  std::vector<double> weights;
  std::vector<std::string> axes;

  static WeightVector uniform(std::size_t n);

  /// One weight shared by every power bin, optionally followed by six rubric
  /// axis weights in category order.
  static WeightVector for_features(std::size_t n_bins, double power_weight,
                                   const std::optional<std::array<double, 6>>& rubric = std::nullopt);

  /// Throws InvalidArgument unless size matches and weights are valid.
  void validate(std::size_t expected_size) const;
};

/// 1 - <a,b>_w / (|a|_w |b|_w). Exactly symmetric in a and b; clamped below at 0.
/// Throws DegenerateVectorError for a zero weighted norm, InvalidArgument on
/// length mismatch.
double cosine_distance(std::span<const double> a, std::span<const double> b,
                       std::span<const double> w);
double cosine_distance(const FeatureVector& a, const FeatureVector& b, const WeightVector& w);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> ids, std::vector<double> row_major);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * ids_.size() + j]; }
  std::size_t index_of(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> d_;
};

/// Requires at least two vectors of equal length.
DistanceMatrix pairwise(std::span<const FeatureVector> vectors, const WeightVector& w);

enum class Linkage { Average, Single, Complete };

std::string_view to_string(Linkage l);
std::optional<Linkage> parse_linkage(std::string_view name);

/// Node references: leaves are 0..n-1; merge k creates node n+k.
/// `left` is the child containing the smaller leaf index.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

/// Repeatedly merges the closest pair of clusters. Exact distance ties go to
/// the pair with the smallest (min-leaf of left, min-leaf of right).
/// Throws InvalidArgument when fewer than two leaves.
Dendrogram agglomerate(const DistanceMatrix& m, Linkage linkage);

struct ClusterCut {
  double threshold = 0.0;
  /// Members in leaf order; clusters ordered by their first leaf.
  std::vector<std::vector<std::string>> clusters;
};

/// Components after applying every merge with distance <= threshold.
ClusterCut cut(const Dendrogram& dend, double threshold);

/// Threshold yielding at most k clusters: the midpoint between the (n-k)th and
/// (n-k+1)th smallest merge distances; the largest distance for k == 1; 0 for k >= n.
double threshold_for_k(const Dendrogram& dend, std::size_t k);

/// Per cluster, the member minimizing summed distance to the other members
/// (ties: lexicographically smallest id).
std::vector<std::string> representatives(const ClusterCut& cutres, const DistanceMatrix& m);

/// "merge <k>: <left> + <right> @ <distance> size <n>" lines; internal nodes
/// are written as "#<k>" referring to merge k.
std::string format_dendrogram(const Dendrogram& dend);
nlohmann::ordered_json dendrogram_to_json(const Dendrogram& dend);

struct SelectionRequest {
  std::optional<WeightVector> weights;  // default: uniform over all axes
  std::optional<double> threshold;
  std::optional<std::size_t> k;
  Linkage linkage = Linkage::Average;
  /// Append the six category scores (divided by 5) to every feature vector.
  bool include_rubric_axes = false;
};

struct SelectionResult {
  std::vector<std::string> workload_ids;
  DistanceMatrix distances;
  Dendrogram dendrogram;
  ClusterCut clusters;
  std::vector<std::string> representative_ids;  // one per cluster, same order
  std::vector<BenchmarkEntry> representatives;
  std::map<std::string, std::size_t> assignments;  // workload id -> cluster index
  std::vector<std::string> warnings;
};

/// pairwise -> agglomerate -> cut -> representatives over the workloads that
/// have both a registry entry and a feature vector. Exactly one of
/// threshold / k must be set.
SelectionResult select_subset(const Registry& r, std::span<const FeatureVector> vectors,
                              const SelectionRequest& req);

}  // namespace sciontology
