#include "sciontology/query.hpp"

#include <algorithm>
#include <cctype>

namespace sciontology {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle_lower) {
  return lower(haystack).find(needle_lower) != std::string::npos;
}

std::string_view to_string(SortField f) {
  switch (f) {
    case SortField::Average: return "average";
    case SortField::Id: return "id";
    case SortField::Title: return "title";
    case SortField::DateAdded: return "date_added";
  }
  return "";
}

[[noreturn]] void bad_query(const std::string& field, const std::string& message) {
  throw ValidationError("query", Finding{"INVALID_QUERY", field, message});
}

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (!v.is_array()) bad_query(field, "'" + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad_query(field, "'" + field + "' must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

void validate_query(const Query& q) {
  if (q.min_average && (*q.min_average < Rational(0) || *q.min_average > Rational(5))) {
    bad_query("min_average", "min_average must lie in [0, 5]");
  }
}

Query query_from_json(const json& j) {
  if (!j.is_object()) bad_query("query", "query must be a JSON object");
  Query q;
  for (const auto& [key, v] : j.items()) {
    if (v.is_null()) continue;
    if (key == "domains_any_of") {
      auto names = string_list(v, key);
      if (names.empty()) continue;
      std::set<Domain> s;
      for (const auto& n : names) s.insert(make_domain(n));
      q.domains_any_of = std::move(s);
    } else if (key == "motifs_any_of") {
      auto names = string_list(v, key);
      if (names.empty()) continue;
      std::set<Motif> s;
      for (const auto& n : names) s.insert(make_motif(n));
      q.motifs_any_of = std::move(s);
    } else if (key == "compute_tags_any_of") {
      auto names = string_list(v, key);
      if (names.empty()) continue;
      std::set<ComputeBoundTag> s;
      for (const auto& n : names) {
        auto tag = parse_compute_bound_tag(n);
        if (!tag) bad_query(key, "unknown compute-bound tag '" + n + "'");
        s.insert(*tag);
      }
      q.compute_tags_any_of = std::move(s);
    } else if (key == "min_average") {
      try {
        if (v.is_string()) {
          q.min_average = Rational::parse(v.get<std::string>());
        } else if (v.is_number()) {
          q.min_average = Rational::parse(v.dump());
        } else {
          bad_query(key, "min_average must be a number or rational string");
        }
      } catch (const InvalidArgument& e) {
        bad_query(key, e.what());
      }
    } else if (key == "endorsed_only") {
      if (!v.is_boolean()) bad_query(key, "endorsed_only must be a boolean");
      q.endorsed_only = v.get<bool>();
    } else if (key == "text") {
      if (!v.is_string()) bad_query(key, "text must be a string");
      if (!v.get<std::string>().empty()) q.text = v.get<std::string>();
    } else if (key == "sort") {
      if (!v.is_object()) bad_query(key, "sort must be an object {field, direction}");
      for (const auto& [sk, sv] : v.items()) {
        if (!sv.is_string()) bad_query("sort." + sk, "sort values must be strings");
        const std::string s = sv.get<std::string>();
        if (sk == "field") {
          if (s == "average") q.sort.field = SortField::Average;
          else if (s == "id") q.sort.field = SortField::Id;
          else if (s == "title") q.sort.field = SortField::Title;
          else if (s == "date_added") q.sort.field = SortField::DateAdded;
          else bad_query("sort.field", "unknown sort field '" + s + "'");
        } else if (sk == "direction") {
          if (s == "asc") q.sort.direction = SortDirection::Asc;
          else if (s == "desc") q.sort.direction = SortDirection::Desc;
          else bad_query("sort.direction", "direction must be 'asc' or 'desc'");
        } else {
          bad_query("sort." + sk, "unknown sort field '" + sk + "'");
        }
      }
    } else {
      bad_query(key, "unknown query field '" + key + "'");
    }
  }
  validate_query(q);
  return q;
}

ordered_json query_to_json(const Query& q) {
  ordered_json out = ordered_json::object();
  if (q.domains_any_of) {
    ordered_json a = ordered_json::array();
    for (const auto& d : *q.domains_any_of) a.push_back(d.name);
    out["domains_any_of"] = std::move(a);
  }
  if (q.motifs_any_of) {
    ordered_json a = ordered_json::array();
    for (const auto& m : *q.motifs_any_of) a.push_back(m.name);
    out["motifs_any_of"] = std::move(a);
  }
  if (q.min_average) out["min_average"] = q.min_average->to_string();
  out["endorsed_only"] = q.endorsed_only;
  if (q.text) out["text"] = *q.text;
  if (q.compute_tags_any_of) {
    ordered_json a = ordered_json::array();
    for (auto t : *q.compute_tags_any_of) a.push_back(std::string(to_string(t)));
    out["compute_tags_any_of"] = std::move(a);
  }
  out["sort"] = {{"field", std::string(to_string(q.sort.field))},
                 {"direction", q.sort.direction == SortDirection::Asc ? "asc" : "desc"}};
  return out;
}

bool matches(const Query& q, const BenchmarkEntry& e) {
  if (q.domains_any_of) {
    const bool hit = std::any_of(e.domains.begin(), e.domains.end(),
                                 [&](const Domain& d) { return q.domains_any_of->contains(d); });
    if (!hit) return false;
  }
  if (q.motifs_any_of && !q.motifs_any_of->contains(e.motif)) return false;
  if (q.compute_tags_any_of) {
    const bool hit =
        std::any_of(e.compute_bound_tags.begin(), e.compute_bound_tags.end(),
                    [&](ComputeBoundTag t) { return q.compute_tags_any_of->contains(t); });
    if (!hit) return false;
  }
  if (q.min_average || q.endorsed_only) {
    const AggregateRating agg = entry_rating(e);
    if (q.min_average && agg.average < *q.min_average) return false;
    if (q.endorsed_only && !agg.endorsed) return false;
  }
  if (q.text) {
    const std::string needle = lower(*q.text);
    if (!contains_ci(e.title, needle) && !contains_ci(e.description, needle) &&
        !contains_ci(e.citation_key, needle)) {
      return false;
    }
  }
  return true;
}

std::vector<BenchmarkEntry> evaluate(const Query& q, const Registry& r) {
  validate_query(q);
  struct Keyed {
    Rational average;
    const BenchmarkEntry* entry;
  };
  std::vector<Keyed> hits;
  for (const auto& e : r.entries()) {
    if (matches(q, e)) hits.push_back({entry_rating(e).average, &e});
  }
  const bool desc = q.sort.direction == SortDirection::Desc;
  auto primary = [&](const Keyed& a, const Keyed& b) -> std::strong_ordering {
    switch (q.sort.field) {
      case SortField::Average: return a.average <=> b.average;
      case SortField::Id: return a.entry->id <=> b.entry->id;
      case SortField::Title: return a.entry->title <=> b.entry->title;
      case SortField::DateAdded: return a.entry->date_added <=> b.entry->date_added;
    }
    return std::strong_ordering::equal;
  };
  std::sort(hits.begin(), hits.end(), [&](const Keyed& a, const Keyed& b) {
    const auto c = primary(a, b);
    if (c != 0) return desc ? c > 0 : c < 0;
    return a.entry->id < b.entry->id;
  });
  std::vector<BenchmarkEntry> out;
  out.reserve(hits.size());
  for (const auto& k : hits) out.push_back(*k.entry);
  return out;
}

std::size_t HeatmapMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (auto c : row) sum += c;
  }
  return sum;
}

HeatmapMatrix heatmap(const Registry& r) {
  HeatmapMatrix h;
  h.rows = canonical_domains();
  h.cols = canonical_motifs();
  std::set<std::string> extra_rows, extra_cols;
  for (const auto& e : r.entries()) {
    for (const auto& d : e.domains) {
      if (!is_canonical(d)) extra_rows.insert(d.name);
    }
    if (!is_canonical(e.motif)) extra_cols.insert(e.motif.name);
  }
  h.rows.insert(h.rows.end(), extra_rows.begin(), extra_rows.end());
  h.cols.insert(h.cols.end(), extra_cols.begin(), extra_cols.end());
  h.counts.assign(h.rows.size(), std::vector<std::size_t>(h.cols.size(), 0));

  auto index_of = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
  };
  for (const auto& e : r.entries()) {
    const std::size_t col = index_of(h.cols, e.motif.name);
    for (const auto& d : e.domains) ++h.counts[index_of(h.rows, d.name)][col];
  }
  return h;
}

ordered_json heatmap_to_json(const HeatmapMatrix& h) {
  return {{"rows", h.rows}, {"cols", h.cols}, {"counts", h.counts}, {"total", h.total()}};
}

FacetCounts facet_counts(const Query& q, const Registry& r) {
  FacetCounts out;
  // Canonical values are listed even when their count is zero.
  for (const auto& d : canonical_domains()) out["domain"][d] = 0;
  for (const auto& m : canonical_motifs()) out["motif"][m] = 0;
  for (auto t : kComputeBoundTags) out["compute_tag"][std::string(to_string(t))] = 0;
  out["endorsed"]["true"] = 0;
  out["endorsed"]["false"] = 0;

  Query without_domain = q;
  without_domain.domains_any_of.reset();
  Query without_motif = q;
  without_motif.motifs_any_of.reset();
  Query without_tag = q;
  without_tag.compute_tags_any_of.reset();
  Query without_endorsed = q;
  without_endorsed.endorsed_only = false;

  for (const auto& e : r.entries()) {
    if (matches(without_domain, e)) {
      for (const auto& d : e.domains) ++out["domain"][d.name];
    }
    if (matches(without_motif, e)) ++out["motif"][e.motif.name];
    if (matches(without_tag, e)) {
      for (auto t : e.compute_bound_tags) ++out["compute_tag"][std::string(to_string(t))];
    }
    if (matches(without_endorsed, e)) {
      ++out["endorsed"][entry_rating(e).endorsed ? "true" : "false"];
    }
  }
  return out;
}

}  // namespace sciontology
