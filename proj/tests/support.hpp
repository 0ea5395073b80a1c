#pragma once

#include <array>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sciontology/cli.hpp"
#include "sciontology/ontology.hpp"
#include "sciontology/registry.hpp"

namespace testing {

namespace so = sciontology;

inline std::filesystem::path data_dir() { return TEST_DATA_DIR; }
inline std::filesystem::path seed_corpus() { return SEED_CORPUS; }

/// Card with the six scores given in half-points as overrides.
inline so::RatingCard card_from_halves(const std::array<int, 6>& halves) {
  so::RatingCard c;
  for (std::size_t i = 0; i < 6; ++i) c.overrides[so::kCategories[i]] = so::Rational(halves[i], 2);
  c.provenance = std::string(so::kAggregateOnlyProvenance);
  return c;
}

inline so::RatingCard full_checklist_card(bool value, int def = 3, int qual = 2) {
  so::RatingCard c;
  c.software = so::SoftwareChecklist{};
  c.specification = so::SpecificationChecklist{};
  c.dataset = so::DatasetChecklist{};
  c.reference = so::ReferenceChecklist{};
  c.documentation = so::DocumentationChecklist{};
  c.software->criteria.fill(value);
  c.specification->criteria.fill(value);
  c.dataset->criteria.fill(value);
  c.reference->criteria.fill(value);
  c.documentation->criteria.fill(value);
  c.metrics = so::MetricsRating{def, qual};
  return c;
}

inline so::BenchmarkEntry make_entry(const std::string& citation, const std::string& task,
                                     std::vector<std::string> domains, const std::string& motif,
                                     so::RatingCard card, std::string title = "") {
  so::BenchmarkEntry e;
  e.citation_key = citation;
  e.id = so::make_entry_id(citation, task);
  e.title = title.empty() ? citation : title;
  e.description = "test entry";
  for (const auto& d : domains) e.domains.insert(so::make_domain(d));
  e.motif = so::make_motif(motif);
  e.rating = std::move(card);
  e.date_added = "2025-01-01";
  return e;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

inline CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "sciontology");
  std::ostringstream out, err;
  const int code = so::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("sciontology-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
