#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>

#include "dsl/engine.hpp"
#include "dsl/error.hpp"
#include "dsl/evaluation.hpp"
#include "dsl/ingestion.hpp"

namespace py = pybind11;
using namespace dsl;

namespace {

using Features = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::shared_ptr<Dataset> dataset_from_array(Features x, std::optional<Labeling> labels) {
  if (x.ndim() != 2) throw py::value_error("features must be a 2-D array");
  const auto n = static_cast<std::size_t>(x.shape(0));
  const auto d = static_cast<std::size_t>(x.shape(1));
  auto ds = std::make_shared<Dataset>(n, d, std::vector<double>(x.data(), x.data() + n * d));
  if (labels) ds->set_labels(std::move(*labels));
  return ds;
}

Features features_of(const Dataset& ds) {
  Features out({ds.size(), ds.dims()});
  std::copy(ds.values().begin(), ds.values().end(), out.mutable_data());
  return out;
}

Metric metric_named(const std::string& name, std::uint64_t seed) {
  if (name == "euclidean") return Metric::euclidean();
  if (name == "cosine") return Metric::cosine();
  if (name == "random") return Metric::random(seed);
  throw Error(ErrorCode::InvalidSpec, "unknown metric '" + name + "'");
}

py::dict outcome_dict(const StepOutcome& o) {
  py::dict d;
  d["kind"] = std::string(to_string(o.kind));
  d["node"] = o.node;
  d["partner"] = o.partner;
  d["parent"] = o.parent;
  d["verdict"] = std::string(to_string(o.verdict));
  return d;
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["labels"] = r.labels;
  d["reason"] = std::string(to_string(r.reason));
  d["queries"] = r.queries;
  d["steps"] = r.steps;
  d["final_ari"] = r.final_ari;
  d["lambda"] = r.lambda;
  d["query_bound"] = r.query_bound;
  d["within_bound"] = r.within_bound;
  return d;
}

Theta theta_named(const std::string& verdict) {
  if (verdict == "must_link") return Theta::MustLink;
  if (verdict == "cannot_link") return Theta::CannotLink;
  throw py::value_error("verdict must be 'must_link' or 'cannot_link'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Active clustering over a nearest-neighbor data skeleton.";

  static py::handle error_type = py::exception<Error>(m, "DslError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(std::string(to_string(e.code())) + ": " +
                                                                   e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  py::class_<Dataset, std::shared_ptr<Dataset>>(m, "Dataset")
      .def(py::init(&dataset_from_array), py::arg("features"), py::arg("labels") = std::nullopt)
      .def_property_readonly("n", &Dataset::size)
      .def_property_readonly("d", &Dataset::dims)
      .def_property_readonly("features", &features_of)
      .def_property_readonly("labels", [](const Dataset& ds) { return ds.labels(); })
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def("class_count", &Dataset::class_count)
      .def("to_csv", [](const Dataset& ds) { return to_csv(ds); });

  py::class_<Metric>(m, "Metric")
      .def(py::init(&metric_named), py::arg("name") = "euclidean", py::arg("seed") = 0)
      .def_property_readonly("name", &Metric::name)
      .def("__call__", [](const Metric& mt, const Dataset& ds, NodeId i, NodeId j) { return mt(ds, i, j); });

  m.def(
      "generate_blobs",
      [](std::size_t n, std::size_t k, std::size_t d, double spread, std::uint64_t seed) {
        return std::make_shared<Dataset>(generate_blobs(BlobSpec{n, k, d, spread, seed}));
      },
      py::arg("n"), py::arg("k"), py::arg("d") = 2, py::arg("spread") = 1.0, py::arg("seed") = 0);

  m.def(
      "load_csv",
      [](const std::string& path, std::optional<std::string> label_col, const std::string& normalize) {
        CsvOptions o;
        if (label_col) o.label_column = ColumnRef{*label_col};
        o.normalize = parse_normalization(normalize);
        return std::make_shared<Dataset>(load_csv(path, o));
      },
      py::arg("path"), py::arg("label_col") = std::nullopt, py::arg("normalize") = "none");

  py::class_<DataSkeleton>(m, "Skeleton")
      .def_property_readonly("n", &DataSkeleton::node_count)
      .def_property_readonly("edge_count", &DataSkeleton::edge_count)
      .def_property_readonly("unconfirmed_count", &DataSkeleton::unconfirmed_count)
      .def_property_readonly("representatives",
                             [](const DataSkeleton& s) {
                               return std::vector<NodeId>(s.representatives().begin(), s.representatives().end());
                             })
      .def("edges",
           [](const DataSkeleton& s) {
             py::list out;
             for (const auto& e : s.edges()) out.append(py::make_tuple(e.source, e.target, e.distance, e.confirmed));
             return out;
           })
      .def("component_labels", [](const DataSkeleton& s) { return connected_component_labels(s); })
      .def("to_json", [](const DataSkeleton& s) { return skeleton_to_json(s).dump(); });

  m.def(
      "ds_init",
      [](const Dataset& ds, const Metric& metric, std::uint64_t seed) { return ds_init(ds, metric, seed); },
      py::arg("dataset"), py::arg("metric") = Metric::euclidean(), py::arg("seed") = 0);

  py::class_<Session>(m, "Session")
      .def(py::init([](std::shared_ptr<Dataset> ds, const Metric& metric, std::uint64_t seed,
                       std::optional<std::size_t> budget, bool interactive) {
             SessionOptions o;
             o.seed = seed;
             o.budget = budget;
             o.oracle = interactive ? OracleMode::Interactive : OracleMode::GroundTruth;
             return std::make_unique<Session>(std::move(ds), metric, o);
           }),
           py::arg("dataset"), py::arg("metric") = Metric::euclidean(), py::arg("seed") = 0,
           py::arg("budget") = std::nullopt, py::arg("interactive") = false)
      .def("run", [](Session& s) { return result_dict(s.run()); })
      .def("drive", [](Session& s) { return std::string(to_string(s.drive())); })
      .def("recons_step", [](Session& s) { return outcome_dict(s.recons_step()); })
      .def("resume", [](Session& s, const std::string& v) { return outcome_dict(s.resume_with_answer(theta_named(v))); },
           py::arg("verdict"))
      .def("deduce",
           [](Session& s, NodeId i, NodeId j) -> std::optional<std::string> {
             const auto v = s.deduce(i, j);
             if (!v) return std::nullopt;
             return std::string(to_string(*v));
           })
      .def("accept", &Session::accept)
      .def("result", [](const Session& s) { return result_dict(s.result()); })
      .def_property_readonly("pending",
                             [](const Session& s) -> std::optional<std::pair<NodeId, NodeId>> {
                               if (!s.pending()) return std::nullopt;
                               return std::pair(s.pending()->i, s.pending()->j);
                             })
      .def_property_readonly("done", &Session::done)
      .def_property_readonly("phase", [](const Session& s) { return std::string(to_string(s.phase())); })
      .def_property_readonly("query_count", &Session::query_count)
      .def_property_readonly("step_count", &Session::step_count)
      .def_property_readonly("cluster_count", &Session::cluster_count)
      .def_property_readonly("ari", &Session::current_ari)
      .def_property_readonly("labels", &Session::labels)
      .def_property_readonly("skeleton", &Session::skeleton, py::return_value_policy::copy)
      .def("trace", [](const Session& s) {
        py::list out;
        for (const auto& t : s.trace().samples()) out.append(py::make_tuple(t.queries, t.ari));
        return out;
      })
      .def("trace_csv", [](const Session& s) { return s.trace().to_csv(); })
      .def("snapshot", [](const Session& s) { return export_snapshot(s).dump(); });

  m.def(
      "adjusted_rand_index", [](const Labeling& a, const Labeling& b) { return adjusted_rand_index(a, b); },
      py::arg("a"), py::arg("b"));
  m.def(
      "auic",
      [](const std::vector<std::pair<std::size_t, double>>& samples, std::size_t n) {
        IceTrace t;
        for (const auto& [q, v] : samples) t.record({q, v, 0});
        return auic(t, n);
      },
      py::arg("samples"), py::arg("n"));
  m.def(
      "erroneous_edge_rate",
      [](const DataSkeleton& s, const Labeling& labels) { return erroneous_edge_rate(s, labels); },
      py::arg("skeleton"), py::arg("labels"));
  m.def("query_upper_bound", &query_upper_bound, py::arg("lam"), py::arg("k"), py::arg("n"));
}
