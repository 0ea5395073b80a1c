// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "oracles/compare.hpp"
#include "oracles/oracles.hpp"
#include "sciontology/cluster.hpp"
#include "sciontology/features.hpp"
#include "sciontology/query.hpp"
#include "sciontology/registry.hpp"
#include "support.hpp"

namespace so = sciontology;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tolerances and limits.
constexpr double kCosineTol = 1e-12;
constexpr double kOracleTol = 1e-12;
constexpr double kCutThreshold = 0.72;
constexpr std::size_t kExpectedGroups = 3;
constexpr int kRubricCards = 50;
constexpr int kCosinePairs = 1000;
constexpr int kOracleMatrices = 100;
constexpr std::size_t kOracleMaxN = 8;
constexpr int kCutDendrograms = 50;
constexpr int kParityQueries = 20;
constexpr double kOneSecond = 1.0;
constexpr double kTenSeconds = 10.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failure notes; the first few are reported.
struct Check {
  Outcome out;
  int failures = 0;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    out.pass = false;
    if (failures++ < 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
  }
};

int g_failed = 0;

void report(const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3fs", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << timing;
  if (limit_s > 0) std::cout << " / limit " << limit_s << "s";
  std::cout << "]";
  if (!o.detail.empty()) std::cout << "  " << o.detail;
  std::cout << std::endl;
  if (!o.pass) ++g_failed;
}

// ---------------------------------------------------------------------------

Outcome rubric_exactness() {
  Check c;
  std::mt19937 rng(20250901);
  std::uniform_int_distribution<int> half(0, 10);
  std::bernoulli_distribution coin(0.5);
  int endorsed_seen = 0;
  for (int i = 0; i < kRubricCards; ++i) {
    // Half the cards mix checklists and metrics with overrides.
    so::RatingCard card;
    std::array<int, 6> halves{};
    const bool mixed = i % 2 == 1;
    for (std::size_t k = 0; k < 6; ++k) {
      halves[k] = half(rng);
      if (i % 5 == 0) halves[k] = std::max(halves[k], 9);  // bias some cards near the threshold
    }
    if (mixed) {
      card = testing::full_checklist_card(false, 0, 0);
      auto fill = [&](auto& checklist, int points) {
        for (int p = 0; p < 5; ++p) checklist->criteria[p] = p < points;
      };
      for (std::size_t k = 0; k < 6; ++k) {
        if (halves[k] % 2 == 1 || coin(rng)) {
          card.overrides[so::kCategories[k]] = so::Rational(halves[k], 2);
          continue;
        }
        const int points = halves[k] / 2;
        switch (so::kCategories[k]) {
          case so::Category::Software: fill(card.software, points); break;
          case so::Category::Specification: fill(card.specification, points); break;
          case so::Category::Dataset: fill(card.dataset, points); break;
          case so::Category::Reference: fill(card.reference, points); break;
          case so::Category::Documentation: fill(card.documentation, points); break;
          case so::Category::Metrics:
            card.metrics = so::MetricsRating{std::min(points, 3), points - std::min(points, 3)};
            break;
        }
      }
    } else {
      card = testing::card_from_halves(halves);
    }
    const int sum_half = halves[0] + halves[1] + halves[2] + halves[3] + halves[4] + halves[5];
    const auto scores = so::category_scores(card);
    so::Rational sum;
    for (std::size_t k = 0; k < 6; ++k) {
      c.expect(scores[k] >= so::Rational(0) && scores[k] <= so::Rational(5) && scores[k].is_half_step(),
               "score outside [0,5] half steps");
      c.expect(scores[k] == so::Rational(halves[k], 2), "category score mismatch");
      sum += scores[k];
    }
    const auto agg = so::aggregate(card);
    c.expect(agg.average == sum / so::Rational(6), "average != sum/6");
    c.expect(agg.average * so::Rational(6) == so::Rational(sum_half, 2), "average*6 != sum");
    c.expect(agg.average.to_string() == oracle::exact(sum_half), "exact average differs from oracle");
    c.expect(agg.endorsed == (agg.average >= so::Rational(9, 2)), "endorsement rule");
    c.expect(agg.endorsed == oracle::endorsed(sum_half), "endorsement differs from oracle");
    c.expect(agg.display == oracle::display(sum_half), "display differs from oracle");
    endorsed_seen += agg.endorsed ? 1 : 0;
  }
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(kRubricCards) + " cards, " +
                  std::to_string(endorsed_seen) + " endorsed";
  return c.out;
}

Outcome corpus_fidelity() {
  Check c;
  const auto reg = so::load_corpus(testing::seed_corpus());
  const auto rows = oracle::read_table(RATING_TABLE);
  using Key = std::tuple<std::string, std::set<std::string>, std::string, std::string, bool>;
  std::multiset<Key> want, got;
  for (const auto& r : rows) {
    want.insert({r.citation, {r.domains.begin(), r.domains.end()}, r.motif, r.average, r.bold});
    c.expect(r.bold == (so::Rational::parse(r.average) >= so::Rational(9, 2)),
             "table bolding disagrees with listed average for " + r.citation);
  }
  std::size_t endorsed = 0;
  for (const auto& e : reg.entries()) {
    std::set<std::string> domains;
    for (const auto& d : e.domains) domains.insert(d.name);
    const auto agg = so::entry_rating(e);
    got.insert({e.citation_key, domains, e.motif.name, agg.display, agg.endorsed});
    endorsed += agg.endorsed ? 1 : 0;
  }
  c.expect(reg.size() == rows.size(), "entry count " + std::to_string(reg.size()) + " != " +
                                          std::to_string(rows.size()) + " rows");
  c.expect(got == want, "entry (citation, domains, motif, display, endorsed) multiset differs from table");
  for (const char* v : {"5.00", "4.42", "3.75", "1.92"}) {
    bool found = false;
    for (const auto& k : got) found = found || std::get<3>(k) == v;
    c.expect(found, std::string("no entry displays ") + v);
  }
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(reg.size()) + " entries, " +
                  std::to_string(endorsed) + " endorsed";
  return c.out;
}

Outcome query_check() {
  Check c;
  const auto reg = so::load_corpus(testing::seed_corpus());
  so::Query q;
  q.domains_any_of = std::set<so::Domain>{so::make_domain("Climate & Earth Science")};
  q.motifs_any_of = std::set<so::Motif>{so::make_motif("Anomaly Detection")};
  const auto hits = so::evaluate(q, reg);
  std::multiset<std::string> avgs;
  for (const auto& e : hits) avgs.insert(so::entry_rating(e).display);
  c.expect(hits.size() == 2, "expected 2 entries, got " + std::to_string(hits.size()));
  c.expect(avgs == std::multiset<std::string>{"4.50", "3.83"}, "averages differ from {4.50, 3.83}");
  std::size_t pairs = 0;
  for (const auto& e : reg.entries()) pairs += e.domains.size();
  const auto h = so::heatmap(reg);
  c.expect(h.total() == pairs, "heatmap total " + std::to_string(h.total()) + " != " + std::to_string(pairs));
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::string("heatmap total ") + std::to_string(h.total());
  return c.out;
}

Outcome cosine_properties() {
  Check c;
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0), scale(1e-3, 1e3);
  for (int i = 0; i < kCosinePairs; ++i) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<double> a(n), b(n), w(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = rng() % 4 == 0 ? 0.0 : u(rng);
      b[k] = rng() % 4 == 0 ? 0.0 : u(rng);
      w[k] = 0.05 + u(rng);
    }
    a[rng() % n] += 0.5;
    b[rng() % n] += 0.5;
    const double d = so::cosine_distance(a, b, w);
    c.expect(d == so::cosine_distance(b, a, w), "asymmetric");
    c.expect(so::cosine_distance(a, a, w) <= kCosineTol, "self distance");
    c.expect(d >= 0.0 && d <= 1.0 + kCosineTol, "out of range");
    const double s = scale(rng);
    auto sa = a;
    for (auto& x : sa) x *= s;
    c.expect(std::abs(so::cosine_distance(sa, b, w) - d) <= kCosineTol, "scaling a changed distance");
  }
  // Weight rescaling over whole distance matrices.
  for (int set = 0; set < 50; ++set) {
    const std::size_t m = 2 + rng() % 10, dim = 2 + rng() % 20;
    std::vector<so::FeatureVector> vs;
    for (std::size_t i = 0; i < m; ++i) {
      so::FeatureVector v{"v" + std::to_string(i), std::vector<double>(dim)};
      for (auto& x : v.values) x = u(rng);
      vs.push_back(v);
    }
    so::WeightVector w = so::WeightVector::uniform(dim);
    for (auto& x : w.weights) x = 0.1 + u(rng);
    so::WeightVector sw = w;
    const double s = scale(rng);
    for (auto& x : sw.weights) x *= s;
    const auto d1 = so::pairwise(vs, w);
    const auto d2 = so::pairwise(vs, sw);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        c.expect(std::abs(d1(i, j) - d2(i, j)) <= kCosineTol, "weight rescaling changed a distance");
      }
    }
  }
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(kCosinePairs) + " pairs";
  return c.out;
}

Outcome oracle_equivalence() {
  Check c;
  std::mt19937_64 rng(8675309);
  for (int i = 0; i < kOracleMatrices; ++i) {
    const std::size_t n = 2 + rng() % (kOracleMaxN - 1);
    const auto d = oracle::random_matrix(rng, n);
    for (auto link : {so::Linkage::Average, so::Linkage::Single, so::Linkage::Complete}) {
      const auto dend = so::agglomerate(oracle::to_matrix(d), link);
      const auto diff = oracle::compare_merges(oracle::as_leaf_sets(dend),
                                               oracle::agglomerate(d, oracle::to_oracle(link)), kOracleTol);
      c.expect(diff.empty(), "matrix " + std::to_string(i) + " " + std::string(so::to_string(link)) + ": " + diff);
    }
  }
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(kOracleMatrices) + " matrices x 3 linkages";
  return c.out;
}

Outcome synthetic_groups() {
  Check c;
  const auto dir = testing::data_dir() / "synthetic";
  const auto reg = so::load_corpus(dir / "corpus.ontology.json");
  const auto vectors = so::featurize_all(so::load_trace_dir(dir / "traces"), {});
  std::ifstream in(dir / "membership.json");
  const json membership = json::parse(in);
  std::map<std::string, std::set<std::string>> by_group;
  for (const auto& [id, g] : membership.items()) by_group[g.get<std::string>()].insert(id);

  so::SelectionRequest req;
  req.threshold = kCutThreshold;
  const auto res = so::select_subset(reg, vectors, req);
  std::set<std::set<std::string>> got, want;
  for (const auto& members : res.clusters.clusters) got.insert({members.begin(), members.end()});
  for (const auto& [g, ids] : by_group) want.insert(ids);
  c.expect(vectors.size() == 9, "expected 9 traces");
  c.expect(res.clusters.clusters.size() == kExpectedGroups,
           "K = " + std::to_string(res.clusters.clusters.size()));
  c.expect(got == want, "membership differs from construction");
  const auto& mg = res.dendrogram.merges;
  char buf[96];
  std::snprintf(buf, sizeof buf, "K=%zu; top merges %.4f, %.4f; next %.4f", res.clusters.clusters.size(),
                mg[mg.size() - 1].distance, mg[mg.size() - 2].distance, mg[mg.size() - 3].distance);
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::string(buf);
  return c.out;
}

Outcome cut_monotonicity() {
  Check c;
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checks = 0;
  for (int i = 0; i < kCutDendrograms; ++i) {
    const std::size_t n = 2 + rng() % 14;
    const auto link = std::array{so::Linkage::Average, so::Linkage::Single, so::Linkage::Complete}[i % 3];
    const auto dend = so::agglomerate(oracle::to_matrix(oracle::random_matrix(rng, n)), link);
    std::vector<double> ts{0.0, 1.0};
    for (const auto& m : dend.merges) ts.push_back(m.distance);
    for (int k = 0; k < 20; ++k) ts.push_back(u(rng));
    std::sort(ts.begin(), ts.end());
    oracle::Partition prev = oracle::as_partition(so::cut(dend, ts.front()), dend);
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const auto next = oracle::as_partition(so::cut(dend, ts[k]), dend);
      c.expect(oracle::refines(prev, next), "partition split when threshold increased");
      c.expect(next.size() <= prev.size(), "cluster count grew");
      prev = next;
      ++checks;
    }
  }
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(kCutDendrograms) + " dendrograms, " +
                  std::to_string(checks) + " threshold steps";
  return c.out;
}

Outcome round_trip() {
  Check c;
  const auto dir = testing::temp_dir("acceptance-roundtrip");
  const auto r1 = so::load_corpus(testing::seed_corpus());
  so::save_corpus(r1, dir / "first.ontology.json");
  const auto r2 = so::load_corpus(dir / "first.ontology.json");
  so::save_corpus(r2, dir / "second.ontology.json");
  const auto r3 = so::load_corpus(dir / "second.ontology.json");
  c.expect(r1 == r2 && r2 == r3, "values changed across load/save");
  c.expect(so::read_text_file(dir / "first.ontology.json") == so::read_text_file(dir / "second.ontology.json"),
           "second save not byte-identical");
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(fs::file_size(dir / "second.ontology.json")) +
                  " bytes";
  fs::remove_all(dir);
  return c.out;
}

// --- API parity ------------------------------------------------------------

int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

struct Server {
  pid_t pid = -1;
  ~Server() {
    if (pid > 0) {
      ::kill(pid, SIGTERM);
      ::waitpid(pid, nullptr, 0);
    }
  }
};

std::string run_cli_ids(const fs::path& query_file) {
  const std::string cmd = std::string("'") + SCIONTOLOGY_CLI + "' query '" + testing::seed_corpus().string() +
                          "' --format ids --query @'" + query_file.string() + "'";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = ::pclose(p);
  if (status != 0) throw std::runtime_error("CLI exited with status " + std::to_string(status));
  return out;
}

json random_query(std::mt19937& rng) {
  const auto& doms = so::canonical_domains();
  const auto& mots = so::canonical_motifs();
  json q = json::object();
  if (rng() % 2) q["domains_any_of"] = {doms[rng() % doms.size()], doms[rng() % doms.size()]};
  if (rng() % 2) q["motifs_any_of"] = {mots[rng() % mots.size()]};
  if (rng() % 3 == 0) q["min_average"] = so::Rational(static_cast<std::int64_t>(rng() % 10), 2).to_string();
  if (rng() % 4 == 0) q["endorsed_only"] = true;
  if (rng() % 4 == 0) q["text"] = std::string(1, static_cast<char>('a' + rng() % 26));
  static const char* fields[] = {"average", "id", "title", "date_added"};
  if (rng() % 2) q["sort"] = {{"field", fields[rng() % 4]}, {"direction", rng() % 2 ? "asc" : "desc"}};
  return q;
}

Outcome api_parity() {
  Check c;
  const int port = free_port();
  Server server;
  server.pid = ::fork();
  if (server.pid == 0) {
    if (!std::freopen("/dev/null", "w", stdout)) ::_exit(126);
    const std::string p = std::to_string(port);
    const std::string corpus = testing::seed_corpus().string();
    ::execl(SCIONTOLOGY_CLI, SCIONTOLOGY_CLI, "serve", corpus.c_str(), "--port", p.c_str(), "--host",
            "127.0.0.1", static_cast<char*>(nullptr));
    ::_exit(127);
  }
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(1);
  bool up = false;
  for (int i = 0; i < 200 && !up; ++i) {
    if (auto r = client.Get("/api/v1/heatmap"); r && r->status == 200) up = true;
    else std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  if (!up) return {false, "server did not start"};

  const auto dir = testing::temp_dir("acceptance-parity");
  std::mt19937 rng(4242);
  std::size_t nonempty = 0, total_ids = 0;
  for (int i = 0; i < kParityQueries; ++i) {
    const json q = random_query(rng);
    const auto qfile = dir / ("q" + std::to_string(i) + ".json");
    std::ofstream(qfile) << q.dump();
    std::vector<std::string> cli_ids;
    std::istringstream lines(run_cli_ids(qfile));
    for (std::string line; std::getline(lines, line);) cli_ids.push_back(line);

    auto resp = client.Post("/api/v1/query", q.dump(), "application/json");
    if (!resp || resp->status != 200) {
      c.expect(false, "query " + std::to_string(i) + ": HTTP failure");
      continue;
    }
    std::vector<std::string> api_ids;
    const json body = json::parse(resp->body);
    for (const auto& e : body["items"]) api_ids.push_back(e["id"]);
    c.expect(cli_ids == api_ids, "query " + std::to_string(i) + " differs: " + q.dump());
    nonempty += api_ids.empty() ? 0 : 1;
    total_ids += api_ids.size();
  }
  fs::remove_all(dir);
  c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(kParityQueries) + " queries (" +
                  std::to_string(nonempty) + " non-empty, " + std::to_string(total_ids) + " ids compared)";
  return c.out;
}

}  // namespace

int main() {
  report("rubric exactness", kOneSecond, rubric_exactness);
  report("corpus fidelity", kOneSecond, corpus_fidelity);
  report("query check", kOneSecond, query_check);
  report("cosine properties", 0, cosine_properties);
  report("oracle equivalence", kTenSeconds, oracle_equivalence);
  report("synthetic power groups at 0.72", kOneSecond, synthetic_groups);
  report("cut monotonicity", 0, cut_monotonicity);
  report("round trip", 0, round_trip);
  report("api parity", 0, api_parity);
  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed") << std::endl;
  return g_failed == 0 ? 0 : 1;
}
