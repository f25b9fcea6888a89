// Copyright 2026 The icncache Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "icn/error.hpp"
#include "icn/harness.hpp"
#include "icn/metrics.hpp"
#include "icn/topology.hpp"
#include "icn/workload.hpp"

namespace py = pybind11;

namespace {

// JSON crosses the boundary as text; the Python side wraps json.loads/dumps.
icn::ExperimentSpec spec_from_text(const std::string& text, const std::string& base_dir) {
  return icn::parse_experiment_spec(nlohmann::json::parse(text), base_dir);
}

std::string run_experiment_text(const std::string& spec_text, const std::string& base_dir,
                                const std::string& output_dir) {
  auto spec = spec_from_text(spec_text, base_dir);
  if (!output_dir.empty()) spec.output_dir = output_dir;
  icn::ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = icn::run_experiment(spec);
  }
  nlohmann::ordered_json out;
  out["aggregate"] = icn::to_json(result.aggregate);
  out["runs_csv"] = icn::runs_csv(result.runs);
  return out.dump();
}

std::string compare_text(const std::string& a, const std::string& b) {
  const auto ra = icn::aggregate_from_json(nlohmann::json::parse(a));
  const auto table = b.empty() ? icn::compare(ra) : icn::compare(ra, icn::aggregate_from_json(nlohmann::json::parse(b)));
  return icn::to_json(table).dump();
}

std::string render_text(const std::string& a) {
  return icn::render_comparison(icn::compare(icn::aggregate_from_json(nlohmann::json::parse(a))));
}

icn::PopularityModel popularity(const std::string& model, double s, double shape, double scale) {
  if (model == "zipf") return icn::PopularityModel::zipf(s);
  if (model == "weibull") return icn::PopularityModel::weibull(shape, scale);
  throw icn::Error(icn::errc::kInvalidArgument, "unknown popularity model '" + model + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cache-network simulator and metrics";

  // Kept alive by the module attribute; the handle outlives every call.
  static py::handle icn_error = py::exception<icn::Error>(m, "IcnError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const icn::Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(icn_error)(e.what());
      instance.attr("code") = e.code();
      PyErr_SetObject(icn_error.ptr(), instance.ptr());
    }
  });

  py::class_<icn::Graph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<icn::Edge>& edges) { return icn::Graph(n, edges); }),
           py::arg("node_count"), py::arg("edges"))
      .def_property_readonly("node_count", &icn::Graph::node_count)
      .def_property_readonly("edge_count", &icn::Graph::edge_count)
      .def_property_readonly("edges", &icn::Graph::edges)
      .def_property_readonly("connected", &icn::Graph::connected)
      .def_property_readonly("warnings", &icn::Graph::warnings)
      .def("degree", &icn::Graph::degree)
      .def("neighbors", [](const icn::Graph& g, icn::NodeId v) {
        auto n = g.neighbors(v);
        return std::vector<icn::NodeId>(n.begin(), n.end());
      })
      .def("source_id", &icn::Graph::source_id);

  m.def("load_topology", [](const std::string& text) { return icn::load_topology(text); }, py::arg("text"));
  m.def("generate_ba", &icn::generate_ba, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("make_tree", &icn::make_tree, py::arg("branching"), py::arg("depth"));
  m.def("shortest_path", &icn::shortest_path, py::arg("graph"), py::arg("a"), py::arg("b"));
  m.def("betweenness", [](const icn::Graph& g) { return icn::betweenness(g).values; }, py::arg("graph"));
  m.def(
      "degree_ccdf_fit",
      [](const icn::Graph& g, std::size_t k_min, std::size_t k_max) {
        const auto fit = icn::fit_degree_ccdf(g, k_min, k_max);
        return py::dict(py::arg("slope") = fit.slope, py::arg("intercept") = fit.intercept,
                        py::arg("r_squared") = fit.r_squared, py::arg("points") = fit.points);
      },
      py::arg("graph"), py::arg("k_min") = 3, py::arg("k_max") = 50);

  m.def(
      "catalog_weights",
      [](std::size_t n, const std::string& model, double s, double shape, double scale) {
        const auto c = icn::build_catalog(n, popularity(model, s, shape, scale), icn::SizeModel::fixed(1), 0);
        std::vector<double> w;
        for (const auto& e : c.entries) w.push_back(e.weight);
        return w;
      },
      py::arg("n"), py::arg("model") = "zipf", py::arg("s") = 1.0, py::arg("shape") = 1.0, py::arg("scale") = 1.0);

  m.def("footprint_reduction",
        [](double x, double x_theta) { return icn::footprint_reduction(x, icn::BaselineFootprint{x_theta}); },
        py::arg("x"), py::arg("x_theta"));
  m.def("rebase", [](const std::vector<double>& ys, double y_beta) { return icn::rebase(ys, y_beta); },
        py::arg("y_values"), py::arg("y_beta"));
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return icn::pearson(x, y); });

  m.def("_run_experiment", &run_experiment_text, py::arg("spec"), py::arg("base_dir") = "",
        py::arg("output_dir") = "");
  m.def("_compare", &compare_text, py::arg("a"), py::arg("b") = "");
  m.def("_render", &render_text, py::arg("a"));
  m.def("metric_names", &icn::metric_names);
}
