#pragma once

// Benchmark entry data model, the six-category rating rubric, and the
// endorsement rule.

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sciontology/error.hpp"
#include "sciontology/rational.hpp"

namespace sciontology {

// ---------------------------------------------------------------------------
// Vocabulary

/// Scientific domain. Canonical names are matched case-insensitively and
/// stored in their canonical spelling; other names are kept (trimmed) and
/// reported as non-canonical.
struct Domain {
  std::string name;
  auto operator<=>(const Domain&) const = default;
};

/// AI/ML task type. Same normalization rule as Domain.
struct Motif {
  std::string name;
  auto operator<=>(const Motif&) const = default;
};

const std::vector<std::string>& canonical_domains();
const std::vector<std::string>& canonical_motifs();

Domain make_domain(std::string_view raw);
Motif make_motif(std::string_view raw);
bool is_canonical(const Domain& d);
bool is_canonical(const Motif& m);

enum class ComputeBoundTag { LatencyBound, MemoryBound, ThroughputBound, UtilizationBound };

inline constexpr std::array<ComputeBoundTag, 4> kComputeBoundTags{
    ComputeBoundTag::LatencyBound, ComputeBoundTag::MemoryBound, ComputeBoundTag::ThroughputBound,
    ComputeBoundTag::UtilizationBound};

std::string_view to_string(ComputeBoundTag tag);
std::optional<ComputeBoundTag> parse_compute_bound_tag(std::string_view name);

// ---------------------------------------------------------------------------
// Rubric

enum class Category { Software, Specification, Dataset, Metrics, Reference, Documentation };

inline constexpr std::array<Category, 6> kCategories{
    Category::Software,  Category::Specification, Category::Dataset,
    Category::Metrics,   Category::Reference,     Category::Documentation};

/// snake_case name used in serialized forms ("software", "specification", ...).
std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view name);

struct SoftwareCriteria {
  static constexpr std::array<std::string_view, 5> names{
      "code_available", "code_complete", "code_documented", "runs_unmodified",
      "environment_provided"};
};
struct SpecificationCriteria {
  static constexpr std::array<std::string_view, 5> names{
      "constraints_provided", "task_clear", "dataset_format_specified", "inputs_specified",
      "outputs_specified"};
};
struct DatasetCriteria {
  static constexpr std::array<std::string_view, 5> names{
      "fair_findable", "fair_accessible", "fair_interoperable", "fair_reusable", "has_splits"};
};
struct ReferenceCriteria {
  static constexpr std::array<std::string_view, 5> names{
      "solution_available", "solution_documented", "requirements_listed", "metrics_evaluated",
      "baseline_open"};
};
struct DocumentationCriteria {
  static constexpr std::array<std::string_view, 5> names{
      "task_documented", "background_explained", "motivation_explained", "evaluation_explained",
      "paper_exists"};
};

/// Five yes/no statements; one point per true statement.
template <class Criteria>
struct Checklist {
  static constexpr const auto& names = Criteria::names;
  std::array<bool, 5> criteria{};

  bool operator==(const Checklist&) const = default;
};

using SoftwareChecklist = Checklist<SoftwareCriteria>;
using SpecificationChecklist = Checklist<SpecificationCriteria>;
using DatasetChecklist = Checklist<DatasetCriteria>;
using ReferenceChecklist = Checklist<ReferenceCriteria>;
using DocumentationChecklist = Checklist<DocumentationCriteria>;

/// Two ordinal scales: definitions in 0..3, quality in 0..2.
struct MetricsRating {
  int definitions_level = 0;
  int quality_level = 0;

  bool operator==(const MetricsRating&) const = default;
};

inline constexpr std::string_view kAggregateOnlyProvenance = "aggregate-only";

/// The six category inputs. Each category is scored from its checklist unless
/// an override is present; overrides carry half-point scores for entries
/// where only aggregate ratings are known.
struct RatingCard {
  std::optional<SoftwareChecklist> software;
  std::optional<SpecificationChecklist> specification;
  std::optional<DatasetChecklist> dataset;
  std::optional<MetricsRating> metrics;
  std::optional<ReferenceChecklist> reference;
  std::optional<DocumentationChecklist> documentation;
  std::map<Category, Rational> overrides;
  std::string provenance;

  bool operator==(const RatingCard&) const = default;
};

template <class Criteria>
int score_category(const Checklist<Criteria>& checklist) {
  int points = 0;
  for (bool c : checklist.criteria) points += c ? 1 : 0;
  return points;
}

/// definitions_level + quality_level; throws ValidationError on out-of-range levels.
int score_metrics(const MetricsRating& m);

inline const Rational kEndorsementThreshold{9, 2};

struct AggregateRating {
  Rational average;
  std::string display;
  bool endorsed = false;

  bool operator==(const AggregateRating&) const = default;
};

/// Score of one category: the override when present, else checklist-derived.
/// Empty when neither is available.
std::optional<Rational> category_score(const RatingCard& card, Category c);

/// All six scores in kCategories order. Throws ValidationError (MISSING_CATEGORY)
/// naming the first underivable category.
std::array<Rational, 6> category_scores(const RatingCard& card);

AggregateRating aggregate(const std::array<Rational, 6>& scores);
AggregateRating aggregate(const RatingCard& card);

// ---------------------------------------------------------------------------
// Entries

inline constexpr int kSchemaVersion = 1;

struct BenchmarkEntry {
  std::string id;
  std::string citation_key;
  std::string title;
  std::string description;
  std::optional<std::string> url;
  std::set<Domain> domains;
  Motif motif;
  std::set<ComputeBoundTag> compute_bound_tags;
  RatingCard rating;
  std::string date_added;  // YYYY-MM-DD
  int schema_version = kSchemaVersion;

  bool operator==(const BenchmarkEntry&) const = default;
};

/// Lowercase ASCII slug: runs of non-alphanumerics collapse to one '-'.
std::string slugify(std::string_view text);

/// "<slug(citation_key)>--<slug(task_slug)>".
std::string make_entry_id(std::string_view citation_key, std::string_view task_slug);

/// Every type invariant violation, one finding each. Empty iff valid.
/// Vocabulary membership is not checked here; see vocabulary_warnings.
std::vector<Finding> validate_entry(const BenchmarkEntry& e);

/// NON_CANONICAL_DOMAIN / NON_CANONICAL_MOTIF notices. These never block loading.
std::vector<Finding> vocabulary_warnings(const BenchmarkEntry& e);

/// Convenience: aggregate(e.rating).
AggregateRating entry_rating(const BenchmarkEntry& e);

}  // namespace sciontology
