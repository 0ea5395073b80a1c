#include "sciontology/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <unordered_set>

#include "CLI11.hpp"
#include "sciontology/cluster.hpp"
#include "sciontology/features.hpp"
#include "sciontology/query.hpp"
#include "sciontology/registry.hpp"
#include "sciontology/service.hpp"

namespace sciontology {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kCorpusEnv = "ONTOLOGY_CORPUS";

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string resolve_corpus(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv(kCorpusEnv); env && *env) return env;
  throw UsageError(std::string("no corpus given and ") + kCorpusEnv + " is not set");
}

json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what(), 0, e.byte);
  }
}

json parse_json_arg(const std::string& what, const std::string& text) {
  if (!text.empty() && text.front() == '@') return read_json_file(text.substr(1));
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(what + " is not valid JSON: " + e.what());
  }
}

void print_findings(std::ostream& os, const std::string& subject, const std::vector<Finding>& fs) {
  for (const auto& f : fs) os << subject << ": " << f.code << " [" << f.field << "] " << f.message << "\n";
}

int cmd_validate(const std::string& corpus_arg, std::ostream& out) {
  const std::string path = resolve_corpus(corpus_arg);
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what(), 0, e.byte);
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError("'" + path + "': corpus must be an object with 'manifest' and 'entries'", 1);
  }
  int schema_version = kSchemaVersion;
  if (doc.contains("manifest") && doc["manifest"].contains("schema_version") &&
      doc["manifest"]["schema_version"].is_number_integer()) {
    schema_version = doc["manifest"]["schema_version"].get<int>();
  }
  std::size_t problems = 0;
  std::unordered_set<std::string> seen;
  std::size_t index = 0;
  for (const auto& record : doc["entries"]) {
    std::string subject = "entries[" + std::to_string(index++) + "]";
    if (record.is_object() && record.contains("id") && record["id"].is_string()) {
      subject = record["id"].get<std::string>();
      if (!seen.insert(subject).second) {
        out << subject << ": DUPLICATE_ID [id] id appears more than once\n";
        ++problems;
      }
    }
    const auto findings = validate_record(record, schema_version);
    problems += findings.size();
    print_findings(out, subject, findings);
    if (findings.empty()) {
      for (const auto& w : vocabulary_warnings(entry_from_json(record, schema_version))) {
        out << subject << ": warning " << w.code << " [" << w.field << "] " << w.message << "\n";
      }
    }
  }
  if (problems == 0) {
    // Manifest-level checks.
    try {
      (void)parse_corpus(text);
    } catch (const ValidationError& e) {
      print_findings(out, e.subject(), e.findings());
      return kExitValidation;
    }
    out << "OK: " << doc["entries"].size() << " entries\n";
    return kExitOk;
  }
  out << problems << " finding(s)\n";
  return kExitValidation;
}

int cmd_score(const std::string& entry_file, std::ostream& out) {
  const json doc = read_json_file(entry_file);
  const json& card_json = doc.is_object() && doc.contains("rating") ? doc["rating"] : doc;
  const RatingCard card = rating_card_from_json(card_json);
  BenchmarkEntry probe;
  probe.rating = card;
  std::vector<Finding> findings;
  for (auto& f : validate_entry(probe)) {
    if (f.field.rfind("rating", 0) == 0) findings.push_back(std::move(f));
  }
  if (!findings.empty()) throw ValidationError("rating card", std::move(findings));
  const auto scores = category_scores(card);
  for (std::size_t i = 0; i < kCategories.size(); ++i) {
    char line[64];
    std::snprintf(line, sizeof line, "%-14s %s", std::string(to_string(kCategories[i])).c_str(),
                  scores[i].to_fixed2().c_str());
    out << line << "\n";
  }
  const AggregateRating agg = aggregate(scores);
  out << "average        " << agg.average.to_string() << "\n";
  out << agg.display << (agg.endorsed ? " ENDORSED" : " NOT ENDORSED") << "\n";
  return kExitOk;
}

int cmd_add(const std::string& corpus, const std::string& entry_file, std::ostream& out) {
  const Registry reg = load_corpus(corpus);
  const BenchmarkEntry e = entry_from_json(read_json_file(entry_file));
  const Registry next = add_entry(reg, e);
  save_corpus(next, corpus);
  out << "added " << e.id << " (" << entry_rating(e).display << "); " << next.size() << " entries\n";
  return kExitOk;
}

int cmd_query(const std::string& corpus_arg, const std::string& query_text, const std::string& format,
              std::ostream& out) {
  const Registry reg = load_corpus(resolve_corpus(corpus_arg));
  const Query q = query_from_json(query_text.empty() ? json::object() : parse_json_arg("--query", query_text));
  const auto hits = evaluate(q, reg);
  if (format == "json") {
    ordered_json items = ordered_json::array();
    for (const auto& e : hits) items.push_back(public_entry_json(e));
    out << items.dump(2) << "\n";
  } else if (format == "ids") {
    for (const auto& e : hits) out << e.id << "\n";
  } else {
    for (const auto& e : hits) {
      std::string domains;
      for (const auto& d : e.domains) domains += (domains.empty() ? "" : "; ") + d.name;
      out << e.id << "\t" << entry_rating(e).display << "\t" << e.motif.name << "\t" << domains << "\t"
          << e.title << "\n";
    }
  }
  return kExitOk;
}

int cmd_featurize(const std::string& trace_file, int bins, double pmax, std::ostream& out,
                  std::ostream& err) {
  const PowerTrace t = load_trace(trace_file);
  BinningConfig cfg;
  cfg.n_bins = bins;
  if (pmax > 0.0) cfg.p_max = pmax;
  std::size_t clamped = 0;
  const FeatureVector fv = featurize(t, cfg, &clamped);
  if (clamped > 0) err << "warning: " << clamped << " sample(s) above p_max clamped into the top bin\n";
  out << ordered_json{{"workload_id", fv.workload_id}, {"values", fv.values}}.dump() << "\n";
  return kExitOk;
}

struct ClusterArgs {
  std::string corpus;
  std::string traces;
  std::string weights;
  double threshold = -1.0;
  std::size_t k = 0;
  std::string linkage = "average";
  bool rubric_axes = false;
  int bins = 16;
  double pmax = 0.0;
  std::string format = "text";
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out, std::ostream& err) {
  const Registry reg = load_corpus(resolve_corpus(a.corpus));
  const auto traces = load_trace_dir(a.traces);
  if (traces.empty()) throw IoError("no *.csv traces in '" + a.traces + "'");
  BinningConfig cfg;
  cfg.n_bins = a.bins;
  if (a.pmax > 0.0) cfg.p_max = a.pmax;
  std::vector<std::string> warnings;
  const auto vectors = featurize_all(traces, cfg, &warnings);

  json body = json::object();
  if (!a.weights.empty()) body["weights"] = parse_json_arg("--weights", a.weights);
  if (a.threshold >= 0.0) body["threshold"] = a.threshold;
  if (a.k > 0) body["k"] = a.k;
  body["linkage"] = a.linkage;
  body["include_rubric_axes"] = a.rubric_axes;
  SelectionRequest req;
  try {
    req = selection_request_from_json(body, static_cast<std::size_t>(a.bins));
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  const SelectionResult res = select_subset(reg, vectors, req);
  warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  if (a.format == "json") {
    ordered_json clusters = ordered_json::array();
    for (std::size_t c = 0; c < res.clusters.clusters.size(); ++c) {
      clusters.push_back({{"members", res.clusters.clusters[c]}, {"representative", res.representative_ids[c]}});
    }
    out << ordered_json{{"threshold", res.clusters.threshold},
                        {"clusters", clusters},
                        {"dendrogram", dendrogram_to_json(res.dendrogram)}}
               .dump(2)
        << "\n";
    return kExitOk;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", res.clusters.threshold);
  out << "threshold " << buf << "\n";
  out << res.clusters.clusters.size() << " clusters\n";
  for (std::size_t c = 0; c < res.clusters.clusters.size(); ++c) {
    out << "cluster " << c << " (representative " << res.representative_ids[c] << "):";
    for (const auto& id : res.clusters.clusters[c]) out << " " << id;
    out << "\n";
  }
  out << format_dendrogram(res.dendrogram);
  return kExitOk;
}

int cmd_export_site(const std::string& corpus_arg, const std::string& out_dir,
                    const std::string& generated_at, std::ostream& out) {
  const Registry reg = load_corpus(resolve_corpus(corpus_arg));
  const std::string stamp = generated_at.empty() ? reg.manifest().generated_at : generated_at;
  export_site(reg, out_dir, stamp);
  out << "wrote " << out_dir << "/site-data.json and " << out_dir << "/report.md\n";
  return kExitOk;
}

int cmd_report(const std::string& corpus_arg, const std::string& out_file, std::ostream& out) {
  const Registry reg = load_corpus(resolve_corpus(corpus_arg));
  const std::string md = report_markdown(reg);
  if (out_file.empty() || out_file == "-") {
    out << md;
  } else {
    write_text_file(out_file, md);
  }
  return kExitOk;
}

struct ServeArgs {
  std::string corpus;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string traces;
  int bins = 16;
  double pmax = 0.0;
  std::string static_dir;
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  Registry reg = load_corpus(resolve_corpus(a.corpus));
  std::vector<FeatureVector> vectors;
  if (!a.traces.empty()) {
    BinningConfig cfg;
    cfg.n_bins = a.bins;
    if (a.pmax > 0.0) cfg.p_max = a.pmax;
    std::vector<std::string> warnings;
    vectors = featurize_all(load_trace_dir(a.traces), cfg, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
  }
  const std::string stamp = reg.manifest().generated_at;
  ApiService service(std::move(reg), std::move(vectors), stamp);
  out << "serving /api/v1 on http://" << a.host << ":" << a.port << std::endl;
  serve(service, a.host, a.port, a.static_dir);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scientific ML benchmark registry: rubric scoring, faceted queries and workload clustering",
               "sciontology"};
  app.require_subcommand(1);

  std::function<int()> action;

  std::string corpus;
  auto* validate = app.add_subcommand("validate", "Validate a corpus file");
  validate->add_option("corpus", corpus, "Corpus (.ontology.json); default $ONTOLOGY_CORPUS");
  validate->callback([&] { action = [&] { return cmd_validate(corpus, out); }; });

  std::string entry_file;
  auto* score = app.add_subcommand("score", "Score a rating card or entry file");
  score->add_option("entry-file", entry_file, "Entry or rating-card JSON")->required();
  score->callback([&] { action = [&] { return cmd_score(entry_file, out); }; });

  std::string add_corpus, add_entry_file;
  auto* add = app.add_subcommand("add", "Add an entry to a corpus file");
  add->add_option("corpus", add_corpus, "Corpus (.ontology.json)")->required();
  add->add_option("entry-file", add_entry_file, "Entry JSON")->required();
  add->callback([&] { action = [&] { return cmd_add(add_corpus, add_entry_file, out); }; });

  std::string query_text, query_format = "tsv";
  auto* query = app.add_subcommand("query", "Filter and sort the registry");
  query->add_option("corpus", corpus, "Corpus; default $ONTOLOGY_CORPUS");
  query->add_option("--query,-q", query_text, "Query JSON, or @file");
  query->add_option("--format", query_format, "tsv, ids or json")
      ->check(CLI::IsMember({"tsv", "ids", "json"}));
  query->callback([&] { action = [&] { return cmd_query(corpus, query_text, query_format, out); }; });

  std::string trace_file;
  int bins = 16;
  double pmax = 0.0;
  auto* feat = app.add_subcommand("featurize", "Power-distribution histogram of one trace CSV");
  feat->add_option("trace", trace_file, "Trace CSV")->required();
  feat->add_option("--bins", bins, "Number of bins")->check(CLI::Range(2, 1 << 20));
  feat->add_option("--pmax", pmax, "Upper power bound in watts (default: trace max)")
      ->check(CLI::PositiveNumber);
  feat->callback([&] { action = [&] { return cmd_featurize(trace_file, bins, pmax, out, err); }; });

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "Cluster traced workloads and pick representatives");
  cluster->add_option("corpus", ca.corpus, "Corpus; default $ONTOLOGY_CORPUS");
  cluster->add_option("--traces", ca.traces, "Directory of trace CSVs named <entry-id>.csv")->required();
  cluster->add_option("--weights", ca.weights, "Weights JSON ([..] or {\"power\":w,\"rubric\":[6]}), or @file");
  auto* thr = cluster->add_option("--threshold", ca.threshold, "Cut threshold in [0,1]")
                  ->check(CLI::Range(0.0, 1.0));
  auto* kopt = cluster->add_option("--k", ca.k, "Target number of clusters")->check(CLI::PositiveNumber);
  thr->excludes(kopt);
  cluster->add_option("--linkage", ca.linkage, "average, single or complete")
      ->check(CLI::IsMember({"average", "single", "complete"}));
  cluster->add_flag("--rubric-axes", ca.rubric_axes, "Append the six rubric scores as axes");
  cluster->add_option("--bins", ca.bins, "Histogram bins")->check(CLI::Range(2, 1 << 20));
  cluster->add_option("--pmax", ca.pmax, "Shared upper power bound")->check(CLI::PositiveNumber);
  cluster->add_option("--format", ca.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cluster->callback([&] {
    if (thr->count() == 0 && kopt->count() == 0) throw CLI::ValidationError("one of --threshold or --k is required");
    action = [&] { return cmd_cluster(ca, out, err); };
  });

  std::string out_dir, generated_at;
  auto* site = app.add_subcommand("export-site", "Write site-data.json and report.md");
  site->add_option("corpus", corpus, "Corpus; default $ONTOLOGY_CORPUS");
  site->add_option("-o,--out", out_dir, "Output directory")->required();
  site->add_option("--generated-at", generated_at, "Timestamp to embed (default: manifest generated_at)");
  site->callback([&] { action = [&] { return cmd_export_site(corpus, out_dir, generated_at, out); }; });

  std::string report_file;
  auto* report = app.add_subcommand("report", "Markdown table of the registry");
  report->add_option("corpus", corpus, "Corpus; default $ONTOLOGY_CORPUS");
  report->add_option("-o,--out", report_file, "Output file ('-' for stdout)")->required();
  report->callback([&] { action = [&] { return cmd_report(corpus, report_file, out); }; });

  ServeArgs sa;
  auto* srv = app.add_subcommand("serve", "Serve the /api/v1 HTTP API");
  srv->add_option("corpus", sa.corpus, "Corpus; default $ONTOLOGY_CORPUS");
  srv->add_option("--port", sa.port, "TCP port")->required()->check(CLI::Range(1, 65535));
  srv->add_option("--host", sa.host, "Bind address");
  srv->add_option("--traces", sa.traces, "Directory of trace CSVs for /api/v1/cluster");
  srv->add_option("--bins", sa.bins, "Histogram bins")->check(CLI::Range(2, 1 << 20));
  srv->add_option("--pmax", sa.pmax, "Shared upper power bound")->check(CLI::PositiveNumber);
  srv->add_option("--static", sa.static_dir, "Serve a UI build directory at / (development)");
  srv->callback([&] { action = [&] { return cmd_serve(sa, out, err); }; });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    print_findings(err, e.subject(), e.findings());
    return kExitValidation;
  } catch (const DuplicateIdError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DegenerateVectorError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace sciontology
