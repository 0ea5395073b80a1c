#include "sciontology/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace sciontology {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void sort_canonical(std::vector<BenchmarkEntry>& entries) {
  std::vector<std::pair<Rational, BenchmarkEntry>> keyed;
  keyed.reserve(entries.size());
  for (auto& e : entries) {
    Rational avg = entry_rating(e).average;
    keyed.emplace_back(avg, std::move(e));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second.id < b.second.id;
  });
  entries.clear();
  for (auto& [avg, e] : keyed) entries.push_back(std::move(e));
}

// Collects findings while walking a raw JSON record.
class RecordReader {
 public:
  explicit RecordReader(std::vector<Finding>& findings) : findings_(findings) {}

  void add(std::string code, std::string field, std::string message) {
    findings_.push_back({std::move(code), std::move(field), std::move(message)});
  }

  std::optional<std::string> string_field(const json& obj, const std::string& key,
                                          const std::string& path, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) add("MISSING_FIELD", path, "required field '" + path + "' is missing");
      return std::nullopt;
    }
    if (!it->is_string()) {
      add("INVALID_FIELD", path, "'" + path + "' must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<int> int_field(const json& obj, const std::string& key, const std::string& path,
                               bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) add("MISSING_FIELD", path, "required field '" + path + "' is missing");
      return std::nullopt;
    }
    if (!it->is_number_integer()) {
      add("INVALID_FIELD", path, "'" + path + "' must be an integer");
      return std::nullopt;
    }
    return it->get<int>();
  }

  template <class Criteria>
  std::optional<Checklist<Criteria>> checklist(const json& card, const std::string& key) {
    const std::string path = "rating." + key;
    auto it = card.find(key);
    if (it == card.end() || it->is_null()) return std::nullopt;
    if (!it->is_object()) {
      add("INVALID_FIELD", path, "'" + path + "' must be an object of five booleans");
      return std::nullopt;
    }
    Checklist<Criteria> out;
    bool ok = it->size() == Criteria::names.size();
    for (std::size_t i = 0; i < Criteria::names.size() && ok; ++i) {
      auto c = it->find(std::string(Criteria::names[i]));
      if (c == it->end() || !c->is_boolean()) {
        ok = false;
        break;
      }
      out.criteria[i] = c->get<bool>();
    }
    if (!ok) {
      std::string expected;
      for (auto n : Criteria::names) expected += (expected.empty() ? "" : ", ") + std::string(n);
      add("CHECKLIST_ARITY", path, "'" + path + "' must hold exactly the booleans: " + expected);
      return std::nullopt;
    }
    return out;
  }

  RatingCard rating(const json& card) {
    RatingCard out;
    if (!card.is_object()) {
      add("INVALID_FIELD", "rating", "'rating' must be an object");
      return out;
    }
    out.software = checklist<SoftwareCriteria>(card, "software");
    out.specification = checklist<SpecificationCriteria>(card, "specification");
    out.dataset = checklist<DatasetCriteria>(card, "dataset");
    out.reference = checklist<ReferenceCriteria>(card, "reference");
    out.documentation = checklist<DocumentationCriteria>(card, "documentation");
    if (auto it = card.find("metrics"); it != card.end() && !it->is_null()) {
      if (!it->is_object()) {
        add("INVALID_FIELD", "rating.metrics", "'rating.metrics' must be an object");
      } else {
        auto d = int_field(*it, "definitions_level", "rating.metrics.definitions_level", true);
        auto q = int_field(*it, "quality_level", "rating.metrics.quality_level", true);
        if (d && q) out.metrics = MetricsRating{*d, *q};
      }
    }
    if (auto it = card.find("overrides"); it != card.end() && !it->is_null()) {
      if (!it->is_object()) {
        add("INVALID_FIELD", "rating.overrides", "'rating.overrides' must be an object");
      } else {
        for (const auto& [name, value] : it->items()) {
          const std::string path = "rating.overrides." + name;
          auto cat = parse_category(name);
          if (!cat) {
            add("UNKNOWN_CATEGORY", path, "unknown rubric category '" + name + "'");
            continue;
          }
          try {
            if (value.is_string()) {
              out.overrides[*cat] = Rational::parse(value.get<std::string>());
            } else if (value.is_number()) {
              out.overrides[*cat] = Rational::parse(value.dump());
            } else {
              add("INVALID_SCORE", path, "score must be a string such as \"9/2\" or a number");
            }
          } catch (const InvalidArgument& e) {
            add("INVALID_SCORE", path, e.what());
          }
        }
      }
    }
    if (auto p = string_field(card, "provenance", "rating.provenance", false)) out.provenance = *p;
    return out;
  }

 private:
  std::vector<Finding>& findings_;
};

std::optional<BenchmarkEntry> read_record(const json& record, int schema_version,
                                          std::vector<Finding>& findings) {
  RecordReader rd(findings);
  if (!record.is_object()) {
    rd.add("INVALID_FIELD", "entry", "entry must be a JSON object");
    return std::nullopt;
  }
  BenchmarkEntry e;
  const std::size_t before = findings.size();
  if (auto v = rd.string_field(record, "id", "id", true)) e.id = *v;
  if (auto v = rd.string_field(record, "citation_key", "citation_key", true)) e.citation_key = *v;
  if (auto v = rd.string_field(record, "title", "title", true)) e.title = *v;
  if (auto v = rd.string_field(record, "description", "description", false)) e.description = *v;
  e.url = rd.string_field(record, "url", "url", false);
  if (auto v = rd.string_field(record, "date_added", "date_added", true)) e.date_added = *v;

  if (auto it = record.find("domains"); it == record.end() || it->is_null()) {
    rd.add("MISSING_FIELD", "domains", "required field 'domains' is missing");
  } else if (!it->is_array()) {
    rd.add("INVALID_FIELD", "domains", "'domains' must be an array of strings");
  } else {
    for (const auto& d : *it) {
      if (!d.is_string()) {
        rd.add("INVALID_FIELD", "domains", "'domains' must be an array of strings");
        continue;
      }
      e.domains.insert(make_domain(d.get<std::string>()));
    }
  }

  if (auto it = record.find("motif"); it == record.end() || it->is_null()) {
    rd.add("MISSING_MOTIF", "motif", "exactly one motif required");
  } else if (it->is_string()) {
    e.motif = make_motif(it->get<std::string>());
  } else if (it->is_array()) {
    if (it->size() > 1) {
      rd.add("MULTIPLE_MOTIFS", "motif", "an entry carries exactly one motif");
    } else if (it->empty()) {
      rd.add("MISSING_MOTIF", "motif", "exactly one motif required");
    } else if (!(*it)[0].is_string()) {
      rd.add("INVALID_FIELD", "motif", "'motif' must be a string");
    } else {
      e.motif = make_motif((*it)[0].get<std::string>());
    }
  } else {
    rd.add("INVALID_FIELD", "motif", "'motif' must be a string");
  }

  if (auto it = record.find("compute_bound_tags"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) {
      rd.add("INVALID_FIELD", "compute_bound_tags", "'compute_bound_tags' must be an array");
    } else {
      for (const auto& t : *it) {
        auto tag = t.is_string() ? parse_compute_bound_tag(t.get<std::string>()) : std::nullopt;
        if (!tag) {
          rd.add("UNKNOWN_COMPUTE_TAG", "compute_bound_tags",
                 "unknown compute-bound tag " + t.dump());
          continue;
        }
        e.compute_bound_tags.insert(*tag);
      }
    }
  }

  if (auto v = rd.int_field(record, "schema_version", "schema_version", false)) {
    e.schema_version = *v;
  } else {
    e.schema_version = schema_version;
  }

  if (auto it = record.find("rating"); it == record.end() || it->is_null()) {
    rd.add("MISSING_FIELD", "rating", "required field 'rating' is missing");
  } else {
    e.rating = rd.rating(*it);
  }

  if (findings.size() != before) return std::nullopt;
  return e;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

Registry::Registry(std::vector<BenchmarkEntry> entries, CorpusManifest manifest)
    : entries_(std::move(entries)), manifest_(std::move(manifest)) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (auto findings = validate_entry(e); !findings.empty()) {
      throw ValidationError("entry '" + e.id + "'", std::move(findings));
    }
    if (!seen.insert(e.id).second) throw DuplicateIdError(e.id);
  }
  sort_canonical(entries_);
  manifest_.entry_count = entries_.size();
}

const BenchmarkEntry* Registry::find(std::string_view id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Registry add_entry(const Registry& r, BenchmarkEntry e) {
  if (r.find(e.id) != nullptr) throw DuplicateIdError(e.id);
  std::vector<BenchmarkEntry> entries = r.entries();
  entries.push_back(std::move(e));
  return Registry(std::move(entries), r.manifest());
}

std::vector<Finding> validate_record(const json& record, int schema_version) {
  std::vector<Finding> findings;
  if (auto e = read_record(record, schema_version, findings)) findings = validate_entry(*e);
  return findings;
}

BenchmarkEntry entry_from_json(const json& record, int schema_version) {
  std::vector<Finding> findings;
  auto e = read_record(record, schema_version, findings);
  std::string subject = "entry";
  if (record.is_object()) {
    if (auto it = record.find("id"); it != record.end() && it->is_string()) {
      subject = "entry '" + it->get<std::string>() + "'";
    }
  }
  if (!e) throw ValidationError(subject, std::move(findings));
  if (auto f = validate_entry(*e); !f.empty()) throw ValidationError(subject, std::move(f));
  return *e;
}

RatingCard rating_card_from_json(const json& card) {
  std::vector<Finding> findings;
  RecordReader rd(findings);
  RatingCard out = rd.rating(card);
  if (!findings.empty()) throw ValidationError("rating card", std::move(findings));
  return out;
}

ordered_json rating_card_to_json(const RatingCard& card) {
  ordered_json out = ordered_json::object();
  auto put = [&](const char* key, const auto& checklist) {
    if (!checklist) return;
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < checklist->names.size(); ++i) {
      obj[std::string(checklist->names[i])] = checklist->criteria[i];
    }
    out[key] = std::move(obj);
  };
  put("software", card.software);
  put("specification", card.specification);
  put("dataset", card.dataset);
  if (card.metrics) {
    out["metrics"] = {{"definitions_level", card.metrics->definitions_level},
                      {"quality_level", card.metrics->quality_level}};
  }
  put("reference", card.reference);
  put("documentation", card.documentation);
  if (!card.overrides.empty()) {
    ordered_json ov = ordered_json::object();
    for (auto cat : kCategories) {
      if (auto it = card.overrides.find(cat); it != card.overrides.end()) {
        ov[std::string(to_string(cat))] = it->second.to_string();
      }
    }
    out["overrides"] = std::move(ov);
  }
  if (!card.provenance.empty()) out["provenance"] = card.provenance;
  return out;
}

ordered_json entry_to_json(const BenchmarkEntry& e) {
  ordered_json out = ordered_json::object();
  out["id"] = e.id;
  out["citation_key"] = e.citation_key;
  out["title"] = e.title;
  out["description"] = e.description;
  if (e.url) out["url"] = *e.url;
  ordered_json domains = ordered_json::array();
  for (const auto& d : e.domains) domains.push_back(d.name);
  out["domains"] = std::move(domains);
  out["motif"] = e.motif.name;
  ordered_json tags = ordered_json::array();
  for (auto t : e.compute_bound_tags) tags.push_back(std::string(to_string(t)));
  out["compute_bound_tags"] = std::move(tags);
  out["rating"] = rating_card_to_json(e.rating);
  // Informational only; recomputed on load.
  const AggregateRating agg = entry_rating(e);
  out["rating"]["aggregate"] = {{"average", agg.average.to_string()},
                                {"display", agg.display},
                                {"endorsed", agg.endorsed}};
  out["date_added"] = e.date_added;
  out["schema_version"] = kSchemaVersion;
  return out;
}

Registry parse_corpus(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("corpus parse error: ") + e.what(), line_of(text, e.byte), e.byte);
  }
  if (!doc.is_object() || !doc.contains("manifest") || !doc.contains("entries") ||
      !doc["manifest"].is_object() || !doc["entries"].is_array()) {
    throw ParseError("corpus must be an object with 'manifest' and 'entries'", 1, 0);
  }
  const json& m = doc["manifest"];
  CorpusManifest manifest;
  std::vector<Finding> findings;
  RecordReader rd(findings);
  if (auto v = rd.int_field(m, "schema_version", "manifest.schema_version", true)) {
    manifest.schema_version = *v;
  }
  auto count = rd.int_field(m, "entry_count", "manifest.entry_count", true);
  if (auto v = rd.string_field(m, "generated_at", "manifest.generated_at", false)) {
    manifest.generated_at = *v;
  }
  if (auto v = rd.string_field(m, "source", "manifest.source", false)) manifest.source = *v;
  if (manifest.schema_version < 0 || manifest.schema_version > kSchemaVersion) {
    rd.add("UNSUPPORTED_SCHEMA_VERSION", "manifest.schema_version",
           "schema_version " + std::to_string(manifest.schema_version) + " not supported");
  }
  if (count && static_cast<std::size_t>(*count) != doc["entries"].size()) {
    rd.add("ENTRY_COUNT_MISMATCH", "manifest.entry_count",
           "manifest says " + std::to_string(*count) + " entries, file has " +
               std::to_string(doc["entries"].size()));
  }
  if (!findings.empty()) throw ValidationError("corpus manifest", std::move(findings));

  std::vector<BenchmarkEntry> entries;
  entries.reserve(doc["entries"].size());
  std::unordered_set<std::string> seen;
  for (const auto& record : doc["entries"]) {
    BenchmarkEntry e = entry_from_json(record, manifest.schema_version);
    if (!seen.insert(e.id).second) throw DuplicateIdError(e.id);
    entries.push_back(std::move(e));
  }
  return Registry(std::move(entries), std::move(manifest));
}

std::string serialize_corpus(const Registry& r) {
  CorpusManifest m = r.manifest();
  if (m.schema_version < kSchemaVersion) {
    m.source += (m.source.empty() ? "" : " ");
    m.source += "(migrated from schema_version " + std::to_string(m.schema_version) + ")";
  }
  ordered_json doc;
  doc["manifest"] = {{"schema_version", kSchemaVersion},
                     {"entry_count", r.size()},
                     {"generated_at", m.generated_at},
                     {"source", m.source}};
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries()) entries.push_back(entry_to_json(e));
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

Registry load_corpus(const std::filesystem::path& path) { return parse_corpus(read_text_file(path)); }

void save_corpus(const Registry& r, const std::filesystem::path& path) {
  write_text_file(path, serialize_corpus(r));
}

}  // namespace sciontology
