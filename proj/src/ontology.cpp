#include "sciontology/ontology.hpp"

#include <algorithm>
#include <cctype>

namespace sciontology {

ValidationError::ValidationError(std::string subject, std::vector<Finding> findings)
    : Error([&] {
        std::string msg = "validation failed for " + subject + ":";
        for (const auto& f : findings) msg += " " + f.code + "(" + f.field + ")";
        return msg;
      }()),
      subject_(std::move(subject)),
      findings_(std::move(findings)) {}

ValidationError::ValidationError(std::string subject, Finding finding)
    : ValidationError(std::move(subject), std::vector<Finding>{std::move(finding)}) {}

namespace {

std::string trim_collapse(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char ch : raw) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string canonicalize(std::string_view raw, const std::vector<std::string>& vocab) {
  std::string name = trim_collapse(raw);
  const std::string key = lower(name);
  for (const auto& canon : vocab) {
    if (lower(canon) == key) return canon;
  }
  return name;
}

bool contains(const std::vector<std::string>& vocab, const std::string& name) {
  return std::find(vocab.begin(), vocab.end(), name) != vocab.end();
}

bool is_valid_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

const std::vector<std::string>& canonical_domains() {
  static const std::vector<std::string> names{
      "High Energy Physics",     "Chemistry",
      "Materials Science",       "Biology & Medicine",
      "Climate & Earth Science", "Computational Science & AI",
      "Mathematics"};
  return names;
}

const std::vector<std::string>& canonical_motifs() {
  static const std::vector<std::string> names{
      "Classification",       "Regression",
      "Sequence Prediction/Forecasting",
      "Anomaly Detection",    "Reinforcement Learning/Control",
      "Generative",           "Multimodal Reasoning",
      "Surrogate Modeling",   "Reasoning & Generalization"};
  return names;
}

Domain make_domain(std::string_view raw) { return Domain{canonicalize(raw, canonical_domains())}; }
Motif make_motif(std::string_view raw) { return Motif{canonicalize(raw, canonical_motifs())}; }
bool is_canonical(const Domain& d) { return contains(canonical_domains(), d.name); }
bool is_canonical(const Motif& m) { return contains(canonical_motifs(), m.name); }

std::string_view to_string(ComputeBoundTag tag) {
  switch (tag) {
    case ComputeBoundTag::LatencyBound: return "LatencyBound";
    case ComputeBoundTag::MemoryBound: return "MemoryBound";
    case ComputeBoundTag::ThroughputBound: return "ThroughputBound";
    case ComputeBoundTag::UtilizationBound: return "UtilizationBound";
  }
  return "";
}

std::optional<ComputeBoundTag> parse_compute_bound_tag(std::string_view name) {
  for (auto tag : kComputeBoundTags) {
    if (to_string(tag) == name) return tag;
  }
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Software: return "software";
    case Category::Specification: return "specification";
    case Category::Dataset: return "dataset";
    case Category::Metrics: return "metrics";
    case Category::Reference: return "reference";
    case Category::Documentation: return "documentation";
  }
  return "";
}

std::optional<Category> parse_category(std::string_view name) {
  for (auto c : kCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

int score_metrics(const MetricsRating& m) {
  std::vector<Finding> findings;
  if (m.definitions_level < 0 || m.definitions_level > 3) {
    findings.push_back({"METRICS_LEVEL_OUT_OF_RANGE", "rating.metrics.definitions_level",
                        "definitions_level must be in 0..3"});
  }
  if (m.quality_level < 0 || m.quality_level > 2) {
    findings.push_back({"METRICS_LEVEL_OUT_OF_RANGE", "rating.metrics.quality_level",
                        "quality_level must be in 0..2"});
  }
  if (!findings.empty()) throw ValidationError("metrics rating", std::move(findings));
  return m.definitions_level + m.quality_level;
}

std::optional<Rational> category_score(const RatingCard& card, Category c) {
  if (auto it = card.overrides.find(c); it != card.overrides.end()) return it->second;
  switch (c) {
    case Category::Software:
      if (card.software) return score_category(*card.software);
      break;
    case Category::Specification:
      if (card.specification) return score_category(*card.specification);
      break;
    case Category::Dataset:
      if (card.dataset) return score_category(*card.dataset);
      break;
    case Category::Metrics:
      if (card.metrics) return score_metrics(*card.metrics);
      break;
    case Category::Reference:
      if (card.reference) return score_category(*card.reference);
      break;
    case Category::Documentation:
      if (card.documentation) return score_category(*card.documentation);
      break;
  }
  return std::nullopt;
}

std::array<Rational, 6> category_scores(const RatingCard& card) {
  std::array<Rational, 6> scores{};
  for (std::size_t i = 0; i < kCategories.size(); ++i) {
    auto s = category_score(card, kCategories[i]);
    if (!s) {
      const std::string name(to_string(kCategories[i]));
      throw ValidationError("rating card",
                            Finding{"MISSING_CATEGORY", "rating." + name,
                                    "no checklist or override for category '" + name + "'"});
    }
    scores[i] = *s;
  }
  return scores;
}

AggregateRating aggregate(const std::array<Rational, 6>& scores) {
  Rational sum;
  for (const auto& s : scores) sum += s;
  AggregateRating out;
  out.average = sum / Rational(6);
  out.display = out.average.to_fixed2();
  out.endorsed = out.average >= kEndorsementThreshold;
  return out;
}

AggregateRating aggregate(const RatingCard& card) { return aggregate(category_scores(card)); }

AggregateRating entry_rating(const BenchmarkEntry& e) { return aggregate(e.rating); }

std::string slugify(std::string_view text) {
  std::string out;
  bool dash = false;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (dash && !out.empty()) out.push_back('-');
      dash = false;
      out.push_back(static_cast<char>(std::tolower(u)));
    } else {
      dash = true;
    }
  }
  return out;
}

std::string make_entry_id(std::string_view citation_key, std::string_view task_slug) {
  return slugify(citation_key) + "--" + slugify(task_slug);
}

std::vector<Finding> validate_entry(const BenchmarkEntry& e) {
  std::vector<Finding> out;
  if (e.id.empty()) out.push_back({"EMPTY_ID", "id", "id is empty"});
  if (e.citation_key.empty()) {
    out.push_back({"EMPTY_CITATION_KEY", "citation_key", "citation_key is empty"});
  }
  if (!e.id.empty() && !e.citation_key.empty()) {
    const std::string prefix = slugify(e.citation_key) + "--";
    const bool ok = e.id.size() > prefix.size() && e.id.compare(0, prefix.size(), prefix) == 0 &&
                    slugify(e.id.substr(prefix.size())) == e.id.substr(prefix.size());
    if (!ok) {
      out.push_back({"ID_MISMATCH", "id",
                     "id must be '" + prefix + "<task-slug>' for citation_key '" +
                         e.citation_key + "'"});
    }
  }
  if (e.title.empty()) out.push_back({"EMPTY_TITLE", "title", "title is empty"});
  if (e.domains.empty()) out.push_back({"EMPTY_DOMAINS", "domains", "at least one domain required"});
  for (const auto& d : e.domains) {
    if (d.name.empty()) out.push_back({"EMPTY_DOMAIN_NAME", "domains", "blank domain name"});
  }
  if (e.motif.name.empty()) out.push_back({"MISSING_MOTIF", "motif", "exactly one motif required"});
  if (!is_valid_date(e.date_added)) {
    out.push_back({"INVALID_DATE", "date_added", "expected YYYY-MM-DD"});
  }
  if (e.schema_version < 0 || e.schema_version > kSchemaVersion) {
    out.push_back({"UNSUPPORTED_SCHEMA_VERSION", "schema_version",
                   "schema_version " + std::to_string(e.schema_version) + " not supported"});
  }

  const RatingCard& card = e.rating;
  for (const auto& [cat, score] : card.overrides) {
    const std::string field = "rating.overrides." + std::string(to_string(cat));
    if (score < Rational(0) || score > Rational(5)) {
      out.push_back({"OVERRIDE_OUT_OF_RANGE", field, "override must lie in [0, 5]"});
    }
    if (!score.is_half_step()) {
      out.push_back({"OVERRIDE_NOT_HALF_STEP", field, "override must be a multiple of 0.5"});
    }
  }
  if (card.metrics && !card.overrides.contains(Category::Metrics)) {
    if (card.metrics->definitions_level < 0 || card.metrics->definitions_level > 3) {
      out.push_back({"METRICS_LEVEL_OUT_OF_RANGE", "rating.metrics.definitions_level",
                     "definitions_level must be in 0..3"});
    }
    if (card.metrics->quality_level < 0 || card.metrics->quality_level > 2) {
      out.push_back({"METRICS_LEVEL_OUT_OF_RANGE", "rating.metrics.quality_level",
                     "quality_level must be in 0..2"});
    }
  }
  for (auto cat : kCategories) {
    if (cat == Category::Metrics && card.metrics && !card.overrides.contains(cat)) continue;
    if (!category_score(card, cat)) {
      const std::string name(to_string(cat));
      out.push_back({"MISSING_CATEGORY", "rating." + name,
                     "no checklist or override for category '" + name + "'"});
    }
  }
  return out;
}

std::vector<Finding> vocabulary_warnings(const BenchmarkEntry& e) {
  std::vector<Finding> out;
  for (const auto& d : e.domains) {
    if (!is_canonical(d)) {
      out.push_back({"NON_CANONICAL_DOMAIN", "domains", "domain '" + d.name + "' is not canonical"});
    }
  }
  if (!e.motif.name.empty() && !is_canonical(e.motif)) {
    out.push_back({"NON_CANONICAL_MOTIF", "motif", "motif '" + e.motif.name + "' is not canonical"});
  }
  return out;
}

}  // namespace sciontology
