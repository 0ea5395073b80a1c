#pragma once

// Faceted filter/sort/search over a Registry and the domain x motif heatmap.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sciontology/ontology.hpp"
#include "sciontology/registry.hpp"

namespace sciontology {

enum class SortField { Average, Id, Title, DateAdded };
enum class SortDirection { Asc, Desc };

/// Ties are always broken by ascending id.
struct SortKey {
  SortField field = SortField::Average;
  SortDirection direction = SortDirection::Desc;

  bool operator==(const SortKey&) const = default;
};

/// Conjunction of the present clauses; set clauses match on any-of.
struct Query {
  std::optional<std::set<Domain>> domains_any_of;
  std::optional<std::set<Motif>> motifs_any_of;
  std::optional<Rational> min_average;
  bool endorsed_only = false;
  std::optional<std::string> text;
  std::optional<std::set<ComputeBoundTag>> compute_tags_any_of;
  SortKey sort;

  bool operator==(const Query&) const = default;
};

/// Throws ValidationError (INVALID_QUERY) for out-of-range min_average.
void validate_query(const Query& q);

/// JSON object mirroring the Query fields. Unknown fields, wrong types and
/// unknown enum values raise ValidationError. An empty array means "no clause".
Query query_from_json(const nlohmann::json& j);
nlohmann::ordered_json query_to_json(const Query& q);

bool matches(const Query& q, const BenchmarkEntry& e);

std::vector<BenchmarkEntry> evaluate(const Query& q, const Registry& r);

struct HeatmapMatrix {
  std::vector<std::string> rows;  // domains
  std::vector<std::string> cols;  // motifs
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  bool operator==(const HeatmapMatrix&) const = default;
};

/// Rows/cols list the canonical vocabulary in its seeded order, followed by
/// any non-canonical names present in the registry (sorted).
HeatmapMatrix heatmap(const Registry& r);
nlohmann::ordered_json heatmap_to_json(const HeatmapMatrix& h);

/// facet name ("domain", "motif", "compute_tag", "endorsed") -> value -> count.
using FacetCounts = std::map<std::string, std::map<std::string, std::size_t>>;

/// Each facet is counted over entries matching `q` with that facet's own
/// clause removed.
FacetCounts facet_counts(const Query& q, const Registry& r);

}  // namespace sciontology
