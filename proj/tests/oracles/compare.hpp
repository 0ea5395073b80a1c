#pragma once

// Glue between library results and the oracle representations.

#include <random>
#include <set>
#include <vector>

#include "oracles/oracles.hpp"
#include "sciontology/cluster.hpp"

namespace oracle {

inline Link to_oracle(sciontology::Linkage l) {
  switch (l) {
    case sciontology::Linkage::Single: return Link::Single;
    case sciontology::Linkage::Complete: return Link::Complete;
    case sciontology::Linkage::Average: return Link::Average;
  }
  return Link::Average;
}

/// Leaf sets of each merge's two children, left first.
inline std::vector<OracleMerge> as_leaf_sets(const sciontology::Dendrogram& dend) {
  const std::size_t n = dend.leaves.size();
  std::vector<std::set<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members.push_back({i});
  std::vector<OracleMerge> out;
  for (const auto& m : dend.merges) {
    out.push_back({members[m.left], members[m.right], m.distance});
    auto joined = members[m.left];
    joined.insert(members[m.right].begin(), members[m.right].end());
    members.push_back(std::move(joined));
  }
  return out;
}

/// Symmetric matrix with zero diagonal and entries in [0, 1].
inline std::vector<std::vector<double>> random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = u(rng);
  }
  return d;
}

inline sciontology::DistanceMatrix to_matrix(const std::vector<std::vector<double>>& d) {
  std::vector<std::string> ids;
  std::vector<double> flat;
  for (std::size_t i = 0; i < d.size(); ++i) {
    ids.push_back("w" + std::to_string(i));
    flat.insert(flat.end(), d[i].begin(), d[i].end());
  }
  return sciontology::DistanceMatrix(ids, flat);
}

/// Library cut as an oracle partition over leaf indices.
inline Partition as_partition(const sciontology::ClusterCut& c, const sciontology::Dendrogram& dend) {
  Partition out;
  for (const auto& members : c.clusters) {
    std::vector<std::size_t> block;
    for (const auto& id : members) {
      block.push_back(static_cast<std::size_t>(
          std::find(dend.leaves.begin(), dend.leaves.end(), id) - dend.leaves.begin()));
    }
    std::sort(block.begin(), block.end());
    out.push_back(block);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Empty string when equal, else a description of the first difference.
inline std::string compare_merges(const std::vector<OracleMerge>& got, const std::vector<OracleMerge>& want,
                                  double tol) {
  if (got.size() != want.size()) return "merge count differs";
  for (std::size_t k = 0; k < got.size(); ++k) {
    if (got[k].a != want[k].a || got[k].b != want[k].b) return "pair differs at merge " + std::to_string(k);
    if (std::abs(got[k].distance - want[k].distance) > tol) {
      return "distance differs at merge " + std::to_string(k);
    }
  }
  return "";
}

}  // namespace oracle
