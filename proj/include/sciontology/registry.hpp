#pragma once

// Canonical corpus file (.ontology.json): loading, validation, deterministic
// saving, and value-semantic additions.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sciontology/ontology.hpp"

namespace sciontology {

struct CorpusManifest {
  int schema_version = kSchemaVersion;
  std::size_t entry_count = 0;
  std::string generated_at;
  std::string source;

  bool operator==(const CorpusManifest&) const = default;
};

/// Immutable collection of entries kept in canonical order
/// (descending exact average, then ascending id). Ids are unique.
class Registry {
 public:
  Registry() = default;

  /// Validates every entry and rejects duplicate ids. Throws ValidationError
  /// or DuplicateIdError. manifest.entry_count is overwritten.
  explicit Registry(std::vector<BenchmarkEntry> entries, CorpusManifest manifest = {});

  const std::vector<BenchmarkEntry>& entries() const noexcept { return entries_; }
  const CorpusManifest& manifest() const noexcept { return manifest_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// nullptr when absent.
  const BenchmarkEntry* find(std::string_view id) const;

  bool operator==(const Registry&) const = default;

 private:
  std::vector<BenchmarkEntry> entries_;
  CorpusManifest manifest_;
};

/// New registry with `e` added; `r` is untouched.
Registry add_entry(const Registry& r, BenchmarkEntry e);

/// Parse and validate a corpus document. Aggregates stored in the file are
/// ignored and recomputed. Throws ParseError, ValidationError, DuplicateIdError.
Registry parse_corpus(std::string_view text);
Registry load_corpus(const std::filesystem::path& path);

/// Byte-deterministic canonical form. Legacy schema versions are written as
/// the current version with the migration noted in manifest.source.
std::string serialize_corpus(const Registry& r);
void save_corpus(const Registry& r, const std::filesystem::path& path);

nlohmann::ordered_json entry_to_json(const BenchmarkEntry& e);
nlohmann::ordered_json rating_card_to_json(const RatingCard& card);

/// Structural + invariant findings for one raw entry record, e.g.
/// MULTIPLE_MOTIFS when "motif" holds more than one value.
std::vector<Finding> validate_record(const nlohmann::json& record, int schema_version = kSchemaVersion);

/// Throws ValidationError carrying every finding from validate_record.
BenchmarkEntry entry_from_json(const nlohmann::json& record, int schema_version = kSchemaVersion);

/// A bare rating card object (same shape as an entry's "rating" field).
RatingCard rating_card_from_json(const nlohmann::json& card);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sciontology
