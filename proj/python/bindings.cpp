#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "sciontology/cluster.hpp"
#include "sciontology/features.hpp"
#include "sciontology/query.hpp"
#include "sciontology/registry.hpp"
#include "sciontology/service.hpp"

namespace py = pybind11;
namespace so = sciontology;

namespace {

// Python objects cross the boundary as JSON text.
py::object to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::handle& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

py::list entries_to_py(const std::vector<so::BenchmarkEntry>& entries) {
  py::list out;
  for (const auto& e : entries) out.append(to_py(so::public_entry_json(e)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Benchmark registry: rubric scoring, faceted queries and workload clustering";

  // Translators run most-recent first, so derived types are registered last.
  auto base = py::register_exception<so::Error>(m, "OntologyError");
  py::register_exception<so::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<so::ValidationError>(m, "ValidationError", base.ptr());

  py::class_<so::Registry>(m, "Registry")
      .def(py::init<>())
      .def_static("load", &so::load_corpus, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return so::parse_corpus(text); }, py::arg("text"))
      .def("save", [](const so::Registry& r, const std::string& path) { so::save_corpus(r, path); },
           py::arg("path"))
      .def("serialize", &so::serialize_corpus)
      .def("__len__", &so::Registry::size)
      .def("ids",
           [](const so::Registry& r) {
             std::vector<std::string> ids;
             for (const auto& e : r.entries()) ids.push_back(e.id);
             return ids;
           })
      .def("entries", [](const so::Registry& r) { return entries_to_py(r.entries()); })
      .def("get",
           [](const so::Registry& r, const std::string& id) -> py::object {
             const auto* e = r.find(id);
             return e ? to_py(so::public_entry_json(*e)) : py::object(py::none());
           })
      .def("add",
           [](const so::Registry& r, const py::object& entry) {
             return so::add_entry(r, so::entry_from_json(from_py(entry)));
           },
           py::arg("entry"), "Return a new registry with the entry added.")
      .def("__eq__", [](const so::Registry& a, const so::Registry& b) { return a == b; });

  m.def("score",
        [](const py::object& card) {
          const auto scores = so::category_scores(so::rating_card_from_json(from_py(card)));
          const auto agg = so::aggregate(scores);
          py::dict out;
          py::dict per;
          for (std::size_t i = 0; i < so::kCategories.size(); ++i) {
            per[py::str(std::string(so::to_string(so::kCategories[i])))] = scores[i].to_string();
          }
          out["scores"] = per;
          out["average"] = agg.display;
          out["average_exact"] = agg.average.to_string();
          out["endorsed"] = agg.endorsed;
          return out;
        },
        py::arg("card"), "Score a rating card given as a dict.");

  m.def("query",
        [](const so::Registry& r, const py::object& q) {
          const so::Query query = q.is_none() ? so::Query{} : so::query_from_json(from_py(q));
          return entries_to_py(so::evaluate(query, r));
        },
        py::arg("registry"), py::arg("query") = py::none());

  m.def("facet_counts",
        [](const so::Registry& r, const py::object& q) {
          const so::Query query = q.is_none() ? so::Query{} : so::query_from_json(from_py(q));
          return to_py(nlohmann::ordered_json(so::facet_counts(query, r)));
        },
        py::arg("registry"), py::arg("query") = py::none());

  m.def("heatmap", [](const so::Registry& r) { return to_py(so::heatmap_to_json(so::heatmap(r))); });

  m.def("featurize",
        [](const std::string& csv_text, const std::string& workload_id, int n_bins,
           std::optional<double> p_max) {
          std::istringstream in(csv_text);
          const auto trace = so::parse_trace(in, workload_id);
          return so::featurize(trace, so::BinningConfig{n_bins, p_max}).values;
        },
        py::arg("csv_text"), py::arg("workload_id") = "trace", py::arg("n_bins") = 16,
        py::arg("p_max") = py::none());

  m.def("featurize_dir",
        [](const std::string& dir, int n_bins, std::optional<double> p_max) {
          std::map<std::string, std::vector<double>> out;
          for (auto& fv : so::featurize_all(so::load_trace_dir(dir), so::BinningConfig{n_bins, p_max})) {
            out[fv.workload_id] = std::move(fv.values);
          }
          return out;
        },
        py::arg("dir"), py::arg("n_bins") = 16, py::arg("p_max") = py::none(),
        "Featurize every trace in a directory with a shared p_max.");

  m.def("cosine_distance",
        [](const std::vector<double>& a, const std::vector<double>& b,
           std::optional<std::vector<double>> w) {
          const auto weights = w.value_or(std::vector<double>(a.size(), 1.0));
          return so::cosine_distance(a, b, weights);
        },
        py::arg("a"), py::arg("b"), py::arg("weights") = py::none());

  m.def("cluster",
        [](const so::Registry& r, const std::map<std::string, std::vector<double>>& vectors,
           const py::object& request) {
          std::vector<so::FeatureVector> fvs;
          for (const auto& [id, values] : vectors) fvs.push_back({id, values});
          const std::size_t dim = fvs.empty() ? 0 : fvs.front().values.size();
          const auto req = so::selection_request_from_json(from_py(request), dim);
          const auto res = so::select_subset(r, fvs, req);
          py::dict out;
          out["threshold"] = res.clusters.threshold;
          out["clusters"] = res.clusters.clusters;
          out["medoids"] = res.representative_ids;
          out["assignments"] = res.assignments;
          out["dendrogram"] = to_py(so::dendrogram_to_json(res.dendrogram));
          out["warnings"] = res.warnings;
          return out;
        },
        py::arg("registry"), py::arg("vectors"), py::arg("request"));

  m.def("report_markdown", &so::report_markdown);

  py::class_<so::ApiService>(m, "ApiService")
      .def(py::init([](const so::Registry& r, const std::map<std::string, std::vector<double>>& vectors,
                       const std::string& generated_at) {
             std::vector<so::FeatureVector> fvs;
             for (const auto& [id, values] : vectors) fvs.push_back({id, values});
             return std::make_unique<so::ApiService>(r, std::move(fvs), generated_at);
           }),
           py::arg("registry"), py::arg("vectors") = std::map<std::string, std::vector<double>>{},
           py::arg("generated_at") = "")
      .def("handle",
           [](const so::ApiService& s, const std::string& method, const std::string& path,
              const std::map<std::string, std::string>& params, const std::string& body) {
             so::ApiRequest req{method, path, {}, body};
             for (const auto& [k, v] : params) req.params.emplace(k, v);
             const auto resp = s.handle(req);
             return py::make_tuple(resp.status, resp.body);
           },
           py::arg("method"), py::arg("path"), py::arg("params") = std::map<std::string, std::string>{},
           py::arg("body") = "");
}
