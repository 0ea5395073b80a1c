#include "sciontology/service.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "httplib.h"

namespace sciontology {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json public_entry_json(const BenchmarkEntry& e) {
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
  out["date_added"] = e.date_added;
  const auto scores = category_scores(e.rating);
  ordered_json sc = ordered_json::object();
  ordered_json sc_exact = ordered_json::object();
  for (std::size_t i = 0; i < kCategories.size(); ++i) {
    sc[std::string(to_string(kCategories[i]))] = scores[i].to_fixed2();
    sc_exact[std::string(to_string(kCategories[i]))] = scores[i].to_string();
  }
  out["scores"] = std::move(sc);
  out["scores_exact"] = std::move(sc_exact);
  const AggregateRating agg = aggregate(scores);
  out["average"] = agg.display;
  out["average_exact"] = agg.average.to_string();
  out["endorsed"] = agg.endorsed;
  return out;
}

ordered_json site_data(const Registry& r, const std::string& generated_at) {
  const HeatmapMatrix h = heatmap(r);
  ordered_json tags = ordered_json::array();
  for (auto t : kComputeBoundTags) tags.push_back(std::string(to_string(t)));
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries()) entries.push_back(public_entry_json(e));
  ordered_json out;
  out["generated_at"] = generated_at;
  out["entry_count"] = r.size();
  out["vocabularies"] = {{"domains", h.rows}, {"motifs", h.cols}, {"compute_bound_tags", tags}};
  out["heatmap"] = heatmap_to_json(h);
  out["entries"] = std::move(entries);
  return out;
}

namespace {

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

std::string report_markdown(const Registry& r) {
  std::string out = "| Citation | Domain | AI/ML Motif | Average Rating |\n";
  out += "|---|---|---|---|\n";
  for (const auto& e : r.entries()) {
    std::string domains;
    for (const auto& d : e.domains) domains += (domains.empty() ? "" : ", ") + d.name;
    const AggregateRating agg = entry_rating(e);
    const std::string avg = agg.endorsed ? "**" + agg.display + "**" : agg.display;
    out += "| " + md_cell(e.citation_key) + " | " + md_cell(domains) + " | " + md_cell(e.motif.name) +
           " | " + avg + " |\n";
  }
  return out;
}

void export_site(const Registry& r, const std::filesystem::path& out_dir,
                 const std::string& generated_at) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  write_text_file(out_dir / "site-data.json", site_data(r, generated_at).dump(2) + "\n");
  write_text_file(out_dir / "report.md", report_markdown(r));
}

const std::vector<std::string>& api_error_codes() {
  static const std::vector<std::string> codes{
      "INVALID_JSON",   "INVALID_QUERY",    "INVALID_RATING_CARD", "INVALID_CLUSTER_REQUEST",
      "NOT_FOUND",      "METHOD_NOT_ALLOWED", "DEGENERATE_INPUT",  "NO_TRACES",
      "INTERNAL_ERROR"};
  return codes;
}

namespace {

constexpr std::size_t kDefaultLimit = 50;
constexpr std::size_t kMaxLimit = 1000;

ApiResponse ok(const ordered_json& body) { return {200, body.dump()}; }

ApiResponse api_error(int status, const std::string& code, const std::string& message,
                      const ordered_json& detail = nullptr) {
  ordered_json err = {{"code", code}, {"message", message}};
  if (!detail.is_null()) err["detail"] = detail;
  return {status, ordered_json{{"error", err}}.dump()};
}

ordered_json findings_json(const std::vector<Finding>& findings) {
  ordered_json out = ordered_json::array();
  for (const auto& f : findings) {
    out.push_back({{"code", f.code}, {"field", f.field}, {"message", f.message}});
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::size_t parse_size(const std::string& name, const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
    throw ValidationError("query", Finding{"INVALID_QUERY", name, name + " must be a nonnegative integer"});
  }
  return out;
}

// GET query parameters -> the same JSON shape POST /query accepts.
json params_to_query_json(const std::multimap<std::string, std::string>& params) {
  json q = json::object();
  for (const auto& [k, v] : params) {
    if (k == "limit" || k == "offset") continue;
    if (k == "domains_any_of" || k == "motifs_any_of" || k == "compute_tags_any_of") {
      if (!q.contains(k)) q[k] = json::array();
      for (auto& piece : split_csv(v)) q[k].push_back(piece);
    } else if (k == "endorsed_only") {
      if (v != "true" && v != "false" && v != "1" && v != "0") {
        throw ValidationError("query", Finding{"INVALID_QUERY", k, "endorsed_only must be true/false"});
      }
      q[k] = v == "true" || v == "1";
    } else if (k == "min_average" || k == "text") {
      q[k] = v;
    } else if (k == "sort") {
      const auto colon = v.find(':');
      q["sort"]["field"] = v.substr(0, colon);
      if (colon != std::string::npos) q["sort"]["direction"] = v.substr(colon + 1);
    } else if (k == "direction") {
      q["sort"]["direction"] = v;
    } else {
      q[k] = v;  // rejected by query_from_json as unknown
    }
  }
  return q;
}

std::vector<std::string> path_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t j = path.find('/', i);
    if (i < path.size()) out.emplace_back(path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return out;
}

ordered_json score_response(const RatingCard& card) {
  const auto scores = category_scores(card);
  const AggregateRating agg = aggregate(scores);
  ordered_json sc = ordered_json::object();
  for (std::size_t i = 0; i < kCategories.size(); ++i) {
    sc[std::string(to_string(kCategories[i]))] = {{"score", scores[i].to_fixed2()},
                                                 {"exact", scores[i].to_string()}};
  }
  return {{"scores", sc},
          {"average", agg.display},
          {"average_exact", agg.average.to_string()},
          {"endorsed", agg.endorsed}};
}

}  // namespace

SelectionRequest selection_request_from_json(const json& body, std::size_t n_bins) {
  auto bad = [](const std::string& field, const std::string& msg) {
    return ValidationError("cluster request", Finding{"INVALID_CLUSTER_REQUEST", field, msg});
  };
  if (!body.is_object()) throw bad("body", "body must be a JSON object");
  SelectionRequest req;
  for (const auto& [k, v] : body.items()) {
    if (v.is_null()) continue;
    if (k == "threshold") {
      if (!v.is_number()) throw bad(k, "threshold must be a number");
      req.threshold = v.get<double>();
    } else if (k == "k") {
      if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) throw bad(k, "k must be a positive integer");
      req.k = v.get<std::size_t>();
    } else if (k == "linkage") {
      auto l = v.is_string() ? parse_linkage(v.get<std::string>()) : std::nullopt;
      if (!l) throw bad(k, "linkage must be average, single or complete");
      req.linkage = *l;
    } else if (k == "include_rubric_axes") {
      if (!v.is_boolean()) throw bad(k, "include_rubric_axes must be a boolean");
      req.include_rubric_axes = v.get<bool>();
    } else if (k == "weights") {
      if (v.is_array()) {
        WeightVector w;
        for (const auto& x : v) {
          if (!x.is_number()) throw bad(k, "weights must be numbers");
          w.weights.push_back(x.get<double>());
          w.axes.push_back("axis" + std::to_string(w.axes.size()));
        }
        req.weights = std::move(w);
      } else if (v.is_object()) {
        double power = 1.0;
        std::optional<std::array<double, 6>> rubric;
        for (const auto& [wk, wv] : v.items()) {
          if (wk == "power") {
            if (!wv.is_number()) throw bad("weights.power", "must be a number");
            power = wv.get<double>();
          } else if (wk == "rubric") {
            if (!wv.is_array() || wv.size() != 6) {
              throw bad("weights.rubric", "must be six numbers in category order");
            }
            rubric.emplace();
            for (std::size_t i = 0; i < 6; ++i) {
              if (!wv[i].is_number()) throw bad("weights.rubric", "must be six numbers");
              (*rubric)[i] = wv[i].get<double>();
            }
          } else {
            throw bad("weights." + wk, "unknown weight group '" + wk + "'");
          }
        }
        if (rubric) req.include_rubric_axes = true;
        req.weights = WeightVector::for_features(n_bins, power, rubric);
      } else {
        throw bad(k, "weights must be an array or {power, rubric}");
      }
    } else {
      throw bad(k, "unknown field '" + k + "'");
    }
  }
  if (req.threshold.has_value() == req.k.has_value()) {
    throw bad("threshold", "exactly one of threshold or k is required");
  }
  if (req.threshold && !(*req.threshold >= 0.0 && *req.threshold <= 1.0)) {
    throw bad("threshold", "threshold must lie in [0, 1]");
  }
  return req;
}

namespace {

ordered_json selection_json(const SelectionResult& res) {
  ordered_json clusters = ordered_json::array();
  for (std::size_t c = 0; c < res.clusters.clusters.size(); ++c) {
    clusters.push_back({{"members", res.clusters.clusters[c]},
                        {"representative", res.representative_ids[c]}});
  }
  ordered_json reps = ordered_json::array();
  for (const auto& e : res.representatives) reps.push_back(public_entry_json(e));
  ordered_json assignments = ordered_json::object();
  for (const auto& id : res.workload_ids) assignments[id] = res.assignments.at(id);
  return {{"threshold", res.clusters.threshold},
          {"cluster_count", res.clusters.clusters.size()},
          {"clusters", clusters},
          {"assignments", assignments},
          {"medoids", res.representative_ids},
          {"representatives", reps},
          {"dendrogram", dendrogram_to_json(res.dendrogram)},
          {"warnings", res.warnings}};
}

}  // namespace

ApiService::ApiService(Registry registry, std::vector<FeatureVector> vectors, std::string generated_at)
    : snapshot_(std::make_shared<const Snapshot>(Snapshot{std::move(registry), std::move(vectors)})),
      generated_at_(std::move(generated_at)) {}

void ApiService::reload(Registry registry, std::vector<FeatureVector> vectors) {
  auto next = std::make_shared<const Snapshot>(Snapshot{std::move(registry), std::move(vectors)});
  std::lock_guard lock(mu_);
  snapshot_ = std::move(next);
}

std::shared_ptr<const ApiService::Snapshot> ApiService::snapshot() const {
  std::lock_guard lock(mu_);
  return snapshot_;
}

ApiResponse ApiService::handle(const ApiRequest& req) const {
  const auto snap = snapshot();
  const Registry& reg = snap->registry;
  const auto seg = path_segments(req.path);
  if (seg.size() < 3 || seg[0] != "api" || seg[1] != "v1") {
    return api_error(404, "NOT_FOUND", "no such endpoint: " + req.path);
  }
  const std::string& resource = seg[2];
  const bool is_get = req.method == "GET";
  const bool is_post = req.method == "POST";
  auto wrong_method = [&] {
    return api_error(405, "METHOD_NOT_ALLOWED", req.method + " not allowed on " + req.path);
  };
  auto parse_body = [&](json& out) -> std::optional<ApiResponse> {
    try {
      out = json::parse(req.body);
      return std::nullopt;
    } catch (const json::parse_error& e) {
      return api_error(400, "INVALID_JSON", e.what(), {{"byte", e.byte}});
    }
  };

  try {
    if (resource == "benchmarks" && seg.size() == 3) {
      if (!is_get) return wrong_method();
      std::size_t limit = kDefaultLimit, offset = 0;
      if (auto it = req.params.find("limit"); it != req.params.end()) {
        limit = std::min(parse_size("limit", it->second), kMaxLimit);
      }
      if (auto it = req.params.find("offset"); it != req.params.end()) {
        offset = parse_size("offset", it->second);
      }
      const Query q = query_from_json(params_to_query_json(req.params));
      const auto hits = evaluate(q, reg);
      ordered_json items = ordered_json::array();
      for (std::size_t i = offset; i < hits.size() && i < offset + limit; ++i) {
        items.push_back(public_entry_json(hits[i]));
      }
      return ok({{"total", hits.size()}, {"limit", limit}, {"offset", offset}, {"items", items}});
    }
    if (resource == "benchmarks" && seg.size() == 4) {
      if (!is_get) return wrong_method();
      const BenchmarkEntry* e = reg.find(seg[3]);
      if (!e) return api_error(404, "NOT_FOUND", "unknown benchmark id '" + seg[3] + "'");
      return ok(public_entry_json(*e));
    }
    if (seg.size() != 3) return api_error(404, "NOT_FOUND", "no such endpoint: " + req.path);
    if (resource == "query") {
      if (!is_post) return wrong_method();
      json body;
      if (auto err = parse_body(body)) return *err;
      const Query q = query_from_json(body);
      const auto hits = evaluate(q, reg);
      ordered_json items = ordered_json::array();
      for (const auto& e : hits) items.push_back(public_entry_json(e));
      ordered_json facets = facet_counts(q, reg);
      return ok({{"query", query_to_json(q)}, {"total", hits.size()}, {"items", items}, {"facets", facets}});
    }
    if (resource == "heatmap") {
      if (!is_get) return wrong_method();
      return ok(heatmap_to_json(heatmap(reg)));
    }
    if (resource == "site-data") {
      if (!is_get) return wrong_method();
      return ok(site_data(reg, generated_at_));
    }
    if (resource == "score") {
      if (!is_post) return wrong_method();
      json body;
      if (auto err = parse_body(body)) return *err;
      const json& card_json = body.is_object() && body.contains("rating") ? body["rating"] : body;
      try {
        const RatingCard card = rating_card_from_json(card_json);
        BenchmarkEntry probe;
        probe.rating = card;
        std::vector<Finding> findings;
        for (auto& f : validate_entry(probe)) {
          if (f.field.rfind("rating", 0) == 0) findings.push_back(std::move(f));
        }
        if (!findings.empty()) throw ValidationError("rating card", std::move(findings));
        return ok(score_response(card));
      } catch (const ValidationError& e) {
        return api_error(400, "INVALID_RATING_CARD", e.what(), findings_json(e.findings()));
      }
    }
    if (resource == "cluster") {
      if (!is_post) return wrong_method();
      json body;
      if (auto err = parse_body(body)) return *err;
      if (snap->vectors.empty()) {
        return api_error(422, "NO_TRACES", "the service was started without power traces");
      }
      SelectionRequest sel;
      try {
        sel = selection_request_from_json(body, snap->vectors.front().values.size());
      } catch (const ValidationError& e) {
        return api_error(400, "INVALID_CLUSTER_REQUEST", e.what(), findings_json(e.findings()));
      }
      try {
        return ok(selection_json(select_subset(reg, snap->vectors, sel)));
      } catch (const DegenerateVectorError& e) {
        return api_error(422, "DEGENERATE_INPUT", e.what(), {{"workload_id", e.workload_id()}});
      } catch (const InvalidArgument& e) {
        return api_error(422, "DEGENERATE_INPUT", e.what());
      }
    }
    return api_error(404, "NOT_FOUND", "no such endpoint: " + req.path);
  } catch (const ValidationError& e) {
    return api_error(400, "INVALID_QUERY", e.what(), findings_json(e.findings()));
  } catch (const std::exception& e) {
    return api_error(500, "INTERNAL_ERROR", e.what());
  }
}

void serve(const ApiService& service, const std::string& host, int port,
           const std::filesystem::path& static_dir) {
  httplib::Server server;
  auto bridge = [&service](const httplib::Request& in, httplib::Response& out) {
    ApiRequest req{in.method, in.path, {}, in.body};
    for (const auto& [k, v] : in.params) req.params.emplace(k, v);
    const ApiResponse resp = service.handle(req);
    out.status = resp.status;
    out.set_content(resp.body, "application/json");
  };
  server.Get(R"(/api/v1/.*)", bridge);
  server.Post(R"(/api/v1/.*)", bridge);
  server.Put(R"(/api/v1/.*)", bridge);
  server.Delete(R"(/api/v1/.*)", bridge);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir.string())) {
    throw IoError("cannot serve static directory '" + static_dir.string() + "'");
  }
  if (!server.listen(host, port)) {
    throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace sciontology
