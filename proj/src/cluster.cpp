#include "sciontology/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>

#include "sciontology/error.hpp"

namespace sciontology {

using nlohmann::ordered_json;

WeightVector WeightVector::uniform(std::size_t n) {
  WeightVector w;
  w.weights.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) w.axes.push_back("axis" + std::to_string(i));
  return w;
}

WeightVector WeightVector::for_features(std::size_t n_bins, double power_weight,
                                        const std::optional<std::array<double, 6>>& rubric) {
  WeightVector w;
  for (std::size_t i = 0; i < n_bins; ++i) {
    w.weights.push_back(power_weight);
    w.axes.push_back("bin" + std::to_string(i));
  }
  if (rubric) {
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
      w.weights.push_back((*rubric)[i]);
      w.axes.emplace_back(to_string(kCategories[i]));
    }
  }
  return w;
}

void WeightVector::validate(std::size_t expected_size) const {
  if (weights.size() != expected_size) {
    throw InvalidArgument("weight vector has " + std::to_string(weights.size()) +
                          " axes, features have " + std::to_string(expected_size));
  }
  bool positive = false;
  for (double x : weights) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("weights must be finite and >= 0");
    positive = positive || x > 0.0;
  }
  if (!positive) throw InvalidArgument("at least one weight must be positive");
}

double cosine_distance(std::span<const double> a, std::span<const double> b,
                       std::span<const double> w) {
  if (a.size() != b.size() || a.size() != w.size()) {
    throw InvalidArgument("cosine_distance: length mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // w * (x * y) keeps the cross term identical under swapping a and b.
    dot += w[i] * (a[i] * b[i]);
    na += w[i] * (a[i] * a[i]);
    nb += w[i] * (b[i] * b[i]);
  }
  if (!(na > 0.0)) throw DegenerateVectorError("a");
  if (!(nb > 0.0)) throw DegenerateVectorError("b");
  const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::max(0.0, 1.0 - sim);
}

double cosine_distance(const FeatureVector& a, const FeatureVector& b, const WeightVector& w) {
  try {
    return cosine_distance(a.values, b.values, w.weights);
  } catch (const DegenerateVectorError& e) {
    throw DegenerateVectorError(e.workload_id() == "a" ? a.workload_id : b.workload_id);
  }
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids, std::vector<double> row_major)
    : ids_(std::move(ids)), d_(std::move(row_major)) {
  if (d_.size() != ids_.size() * ids_.size()) {
    throw InvalidArgument("distance matrix size does not match id count");
  }
}

std::size_t DistanceMatrix::index_of(std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw InvalidArgument("unknown workload id '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - ids_.begin());
}

DistanceMatrix pairwise(std::span<const FeatureVector> vectors, const WeightVector& w) {
  const std::size_t n = vectors.size();
  if (n < 2) throw InvalidArgument("pairwise distances need at least two vectors");
  const std::size_t dim = vectors.front().values.size();
  for (const auto& v : vectors) {
    if (v.values.size() != dim) {
      throw InvalidArgument("feature vector '" + v.workload_id + "' has inconsistent length");
    }
  }
  w.validate(dim);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = cosine_distance(vectors[i], vectors[j], w);
      d[i * n + j] = x;
      d[j * n + i] = x;
    }
  }
  // A self-distance is only defined for a non-degenerate vector.
  for (const auto& v : vectors) (void)cosine_distance(v, v, w);
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& v : vectors) ids.push_back(v.workload_id);
  return DistanceMatrix(std::move(ids), std::move(d));
}

std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
  }
  return "";
}

std::optional<Linkage> parse_linkage(std::string_view name) {
  for (auto l : {Linkage::Average, Linkage::Single, Linkage::Complete}) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

Dendrogram agglomerate(const DistanceMatrix& m, Linkage linkage) {
  const std::size_t n = m.size();
  if (n < 2) throw InvalidArgument("agglomerate needs at least two leaves");

  // Active clusters indexed by slot; Lance-Williams updates keep the
  // slot-to-slot linkage distances current.
  struct Slot {
    std::size_t node;
    std::size_t min_leaf;
    std::size_t size;
    bool active;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = {i, i, 1, true};
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = m(i, j);
  }

  Dendrogram out;
  out.leaves = m.ids();
  out.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_key{n, n};
    for (std::size_t a = 0; a < n; ++a) {
      if (!slots[a].active) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!slots[b].active) continue;
        const double d = dist[a * n + b];
        const std::pair<std::size_t, std::size_t> key = std::minmax(slots[a].min_leaf, slots[b].min_leaf);
        if (d < best || (d == best && key < best_key)) {
          best = d;
          best_key = key;
          best_a = a;
          best_b = b;
        }
      }
    }
    Slot& sa = slots[best_a];
    Slot& sb = slots[best_b];
    const bool a_first = sa.min_leaf < sb.min_leaf;
    const Slot& left = a_first ? sa : sb;
    const Slot& right = a_first ? sb : sa;
    out.merges.push_back({left.node, right.node, best, sa.size + sb.size});

    for (std::size_t c = 0; c < n; ++c) {
      if (!slots[c].active || c == best_a || c == best_b) continue;
      const double da = dist[best_a * n + c];
      const double db = dist[best_b * n + c];
      double updated = 0.0;
      switch (linkage) {
        case Linkage::Single: updated = std::min(da, db); break;
        case Linkage::Complete: updated = std::max(da, db); break;
        case Linkage::Average:
          updated = (static_cast<double>(sa.size) * da + static_cast<double>(sb.size) * db) /
                    static_cast<double>(sa.size + sb.size);
          break;
      }
      dist[best_a * n + c] = updated;
      dist[c * n + best_a] = updated;
    }
    sa = {n + step, std::min(sa.min_leaf, sb.min_leaf), sa.size + sb.size, true};
    sb.active = false;
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Any leaf under node `node`.
std::size_t some_leaf(const Dendrogram& dend, std::size_t node) {
  const std::size_t n = dend.leaves.size();
  while (node >= n) node = dend.merges[node - n].left;
  return node;
}

}  // namespace

ClusterCut cut(const Dendrogram& dend, double threshold) {
  const std::size_t n = dend.leaves.size();
  DisjointSets sets(n);
  for (const auto& mg : dend.merges) {
    if (mg.distance <= threshold) sets.unite(some_leaf(dend, mg.left), some_leaf(dend, mg.right));
  }
  ClusterCut out;
  out.threshold = threshold;
  std::map<std::size_t, std::size_t> cluster_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = cluster_of_root.try_emplace(root, out.clusters.size());
    if (inserted) out.clusters.emplace_back();
    out.clusters[it->second].push_back(dend.leaves[i]);
  }
  return out;
}

double threshold_for_k(const Dendrogram& dend, std::size_t k) {
  const std::size_t n = dend.leaves.size();
  if (k == 0) throw InvalidArgument("k must be >= 1");
  if (k >= n || dend.merges.empty()) return 0.0;
  std::vector<double> d;
  for (const auto& mg : dend.merges) d.push_back(mg.distance);
  std::sort(d.begin(), d.end());
  const std::size_t applied = n - k;  // merges needed, 1..n-1
  if (applied == d.size()) return d.back();
  return 0.5 * (d[applied - 1] + d[applied]);
}

std::vector<std::string> representatives(const ClusterCut& cutres, const DistanceMatrix& m) {
  std::vector<std::string> out;
  out.reserve(cutres.clusters.size());
  for (const auto& members : cutres.clusters) {
    std::vector<std::size_t> idx;
    for (const auto& id : members) idx.push_back(m.index_of(id));
    const std::string* best_id = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      double sum = 0.0;
      for (std::size_t b = 0; b < idx.size(); ++b) sum += m(idx[a], idx[b]);
      const std::string& id = members[a];
      if (sum < best || (sum == best && id < *best_id)) {
        best = sum;
        best_id = &id;
      }
    }
    out.push_back(*best_id);
  }
  return out;
}

namespace {

std::string node_label(const Dendrogram& dend, std::size_t node) {
  const std::size_t n = dend.leaves.size();
  return node < n ? dend.leaves[node] : "#" + std::to_string(node - n);
}

}  // namespace

std::string format_dendrogram(const Dendrogram& dend) {
  std::string out;
  char buf[64];
  for (std::size_t k = 0; k < dend.merges.size(); ++k) {
    const Merge& mg = dend.merges[k];
    std::snprintf(buf, sizeof buf, "%.6f", mg.distance);
    out += "merge " + std::to_string(k) + ": " + node_label(dend, mg.left) + " + " +
           node_label(dend, mg.right) + " @ " + buf + " size " + std::to_string(mg.size) + "\n";
  }
  return out;
}

ordered_json dendrogram_to_json(const Dendrogram& dend) {
  ordered_json merges = ordered_json::array();
  for (const auto& mg : dend.merges) {
    merges.push_back(
        {{"left", mg.left}, {"right", mg.right}, {"distance", mg.distance}, {"size", mg.size}});
  }
  return {{"leaves", dend.leaves}, {"merges", std::move(merges)}};
}

SelectionResult select_subset(const Registry& r, std::span<const FeatureVector> vectors,
                              const SelectionRequest& req) {
  if (req.threshold.has_value() == req.k.has_value()) {
    throw InvalidArgument("exactly one of threshold or k must be given");
  }
  if (req.threshold && !(*req.threshold >= 0.0 && *req.threshold <= 1.0)) {
    throw InvalidArgument("threshold must lie in [0, 1]");
  }
  if (req.k && *req.k == 0) throw InvalidArgument("k must be >= 1");

  SelectionResult res;
  std::vector<FeatureVector> used;
  std::set<std::string> traced;
  for (const auto& v : vectors) {
    traced.insert(v.workload_id);
    const BenchmarkEntry* e = r.find(v.workload_id);
    if (!e) {
      res.warnings.push_back("workload '" + v.workload_id + "' has no registry entry; excluded");
      continue;
    }
    FeatureVector fv = v;
    if (req.include_rubric_axes) {
      for (const auto& s : category_scores(e->rating)) fv.values.push_back(s.to_double() / 5.0);
    }
    used.push_back(std::move(fv));
  }
  for (const auto& e : r.entries()) {
    if (!traced.contains(e.id)) {
      res.warnings.push_back("entry '" + e.id + "' has no power trace; excluded");
    }
  }
  if (used.empty()) throw InvalidArgument("no workload has both a registry entry and a trace");

  std::sort(used.begin(), used.end(),
            [](const FeatureVector& a, const FeatureVector& b) { return a.workload_id < b.workload_id; });
  for (const auto& v : used) res.workload_ids.push_back(v.workload_id);

  const std::size_t dim = used.front().values.size();
  const WeightVector w = req.weights.value_or(WeightVector::uniform(dim));

  if (used.size() == 1) {
    w.validate(dim);
    (void)cosine_distance(used[0], used[0], w);
    res.distances = DistanceMatrix(res.workload_ids, {0.0});
    res.dendrogram.leaves = res.workload_ids;
    res.clusters = {req.threshold.value_or(0.0), {{res.workload_ids[0]}}};
  } else {
    res.distances = pairwise(used, w);
    res.dendrogram = agglomerate(res.distances, req.linkage);
    const double t = req.threshold ? *req.threshold : threshold_for_k(res.dendrogram, *req.k);
    res.clusters = cut(res.dendrogram, t);
    if (req.k && res.clusters.clusters.size() != std::min(*req.k, used.size())) {
      res.warnings.push_back("requested k=" + std::to_string(*req.k) + " but tied merge distances give " +
                             std::to_string(res.clusters.clusters.size()) + " clusters");
    }
  }
  res.representative_ids = representatives(res.clusters, res.distances);
  for (const auto& id : res.representative_ids) res.representatives.push_back(*r.find(id));
  for (std::size_t c = 0; c < res.clusters.clusters.size(); ++c) {
    for (const auto& id : res.clusters.clusters[c]) res.assignments[id] = c;
  }
  return res;
}

}  // namespace sciontology
