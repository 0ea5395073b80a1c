#pragma once

// Site-data / report exporters and the /api/v1 HTTP JSON service.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sciontology/cluster.hpp"
#include "sciontology/features.hpp"
#include "sciontology/query.hpp"
#include "sciontology/registry.hpp"

namespace sciontology {

/// Public projection of an entry: no override provenance; averages as
/// two-decimal strings plus exact rationals.
nlohmann::ordered_json public_entry_json(const BenchmarkEntry& e);

/// Deterministic given (registry, generated_at).
nlohmann::ordered_json site_data(const Registry& r, const std::string& generated_at);

/// Markdown table: Citation | Domain | AI/ML Motif | Average Rating, with
/// endorsed averages in bold, in registry order.
std::string report_markdown(const Registry& r);

/// Writes site-data.json and report.md into `out_dir` (created if needed).
void export_site(const Registry& r, const std::filesystem::path& out_dir,
                 const std::string& generated_at);

/// Cluster request body: {weights: [..] | {power, rubric: [6]}, threshold | k,
/// linkage, include_rubric_axes}. Throws ValidationError (INVALID_CLUSTER_REQUEST).
SelectionRequest selection_request_from_json(const nlohmann::json& body, std::size_t n_bins);

/// Every `code` an ApiError response may carry.
const std::vector<std::string>& api_error_codes();

struct ApiRequest {
  std::string method;
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Read-only service over an immutable registry snapshot plus the feature
/// vectors of any ingested traces. `handle` is safe to call concurrently;
/// `reload` swaps the snapshot atomically.
class ApiService {
 public:
  ApiService(Registry registry, std::vector<FeatureVector> vectors, std::string generated_at);

  ApiResponse handle(const ApiRequest& req) const;
  void reload(Registry registry, std::vector<FeatureVector> vectors);

 private:
  struct Snapshot {
    Registry registry;
    std::vector<FeatureVector> vectors;
  };
  std::shared_ptr<const Snapshot> snapshot() const;

  mutable std::mutex mu_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::string generated_at_;
};

/// Blocking HTTP server on host:port. `static_dir`, when non-empty, is served
/// at "/" for UI development.
void serve(const ApiService& service, const std::string& host, int port,
           const std::filesystem::path& static_dir = {});

}  // namespace sciontology
