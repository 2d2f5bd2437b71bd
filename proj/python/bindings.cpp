#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "mixop/harness.hpp"
#include "mixop/json_io.hpp"
#include "mixop/mixing.hpp"
#include "mixop/parametric.hpp"
#include "mixop/transport.hpp"

namespace py = pybind11;
using namespace mixop;

namespace {

std::vector<Point> to_points(const std::vector<std::vector<double>>& rows) {
  std::vector<Point> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r);
  return pts;
}

std::vector<std::vector<double>> from_points(const DiscreteMeasure& mu) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : mu.points()) rows.emplace_back(p.coords().begin(), p.coords().end());
  return rows;
}

std::vector<std::vector<double>> plan_matrix(const TransportPlan& plan) {
  std::vector<std::vector<double>> m(plan.rows, std::vector<double>(plan.cols));
  for (std::size_t i = 0; i < plan.rows; ++i) {
    for (std::size_t j = 0; j < plan.cols; ++j) m[i][j] = plan.at(i, j);
  }
  return m;
}

GroundMetric metric_from(const std::string& name) {
  if (name == "w1") return GroundMetric::W1;
  if (name == "bl") return GroundMetric::BoundedLipschitz;
  throw py::value_error("metric must be 'w1' or 'bl'");
}

}  // namespace

PYBIND11_MODULE(_mixop, m) {
  m.doc() = "Mixing operator on finitely supported measures";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());
  py::register_exception<MassMismatch>(m, "MassMismatch", error.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", error.ptr());
  py::register_exception<NonexpansiveViolation>(m, "NonexpansiveViolation", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());

  py::class_<TestSet>(m, "TestSet")
      .def_static("box", &TestSet::box, py::arg("lo"), py::arg("hi"))
      .def_static(
          "ball", [](std::vector<double> c, double r) { return TestSet::ball(Point(std::move(c)), r); },
          py::arg("center"), py::arg("radius"))
      .def_static("half_space", &TestSet::half_space, py::arg("normal"), py::arg("offset"))
      .def_property_readonly("dim", &TestSet::dim)
      .def_property_readonly("kind", &TestSet::kind_name)
      .def("contains", [](const TestSet& a, std::vector<double> x) { return a.contains(Point(std::move(x))); })
      .def("boundary_distance",
           [](const TestSet& a, std::vector<double> x) { return a.boundary_distance(Point(std::move(x))); });

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init([](const std::vector<std::vector<double>>& points, std::vector<double> weights,
                       std::optional<std::size_t> dim) {
             std::size_t d = dim.value_or(points.empty() ? 0 : points.front().size());
             return DiscreteMeasure(d, to_points(points), std::move(weights));
           }),
           py::arg("points"), py::arg("weights"), py::arg("dim") = py::none())
      .def_property_readonly("dim", &DiscreteMeasure::dim)
      .def_property_readonly("points", &from_points)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def_property_readonly("mass", [](const DiscreteMeasure& mu) { return mass(mu); })
      .def("__len__", &DiscreteMeasure::size)
      .def("__eq__", [](const DiscreteMeasure& a, const DiscreteMeasure& b) { return a == b; })
      .def("to_json", [](const DiscreteMeasure& mu) { return to_json(mu); })
      .def_static("from_json", &parse_measure)
      .def("__repr__", [](const DiscreteMeasure& mu) {
        return "DiscreteMeasure(dim=" + std::to_string(mu.dim()) + ", atoms=" + std::to_string(mu.size()) + ")";
      });

  py::class_<MetaMeasure>(m, "MetaMeasure")
      .def(py::init([](std::vector<DiscreteMeasure> atoms, std::vector<double> weights,
                       std::optional<std::size_t> dim) {
             std::size_t d = dim.value_or(atoms.empty() ? 0 : atoms.front().dim());
             return MetaMeasure(d, std::move(atoms), std::move(weights));
           }),
           py::arg("atoms"), py::arg("weights"), py::arg("dim") = py::none())
      .def_property_readonly("dim", &MetaMeasure::dim)
      .def_property_readonly("atoms", &MetaMeasure::atoms)
      .def_property_readonly("weights", &MetaMeasure::weights)
      .def_property_readonly("mass_bound", &MetaMeasure::mass_bound)
      .def("__len__", &MetaMeasure::size)
      .def("__eq__", [](const MetaMeasure& a, const MetaMeasure& b) { return a == b; })
      .def("to_json", [](const MetaMeasure& nu) { return to_json(nu); })
      .def_static("from_json", &parse_meta_measure);

  py::class_<ThetaMeasure>(m, "ThetaMeasure")
      .def(py::init([](const std::vector<std::pair<double, double>>& thetas, std::vector<double> weights) {
             std::vector<ThetaPoint> pts;
             for (const auto& [mean, sd] : thetas) pts.emplace_back(mean, sd);
             return ThetaMeasure(std::move(pts), std::move(weights));
           }),
           py::arg("thetas"), py::arg("weights"))
      .def_property_readonly("thetas",
                             [](const ThetaMeasure& l) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& t : l.thetas) out.emplace_back(t.mean(), t.sd());
                               return out;
                             })
      .def_property_readonly("weights", [](const ThetaMeasure& l) { return l.weights; });

  m.def("dirac", [](std::vector<double> x, double w) { return DiscreteMeasure::dirac(Point(std::move(x)), w); },
        py::arg("x"), py::arg("weight") = 1.0);
  m.def("meta_dirac", &MetaMeasure::dirac, py::arg("mu"), py::arg("weight") = 1.0);
  m.def("mix", &mix, py::arg("nu"));
  m.def("mix_mass", &mix_mass, py::arg("nu"));
  m.def("meta_linear_combination", [](const std::vector<double>& c, const std::vector<MetaMeasure>& metas) {
    return meta_linear_combination(c, metas);
  });
  m.def("linear_combination", [](const std::vector<double>& c, const std::vector<DiscreteMeasure>& mus) {
    return linear_combination(c, mus);
  });
  m.def("measure_of_set", &measure_of_set, py::arg("mu"), py::arg("set"));
  m.def("boundary_mass", &boundary_mass, py::arg("mu"), py::arg("set"));

  m.def(
      "w1_exact",
      [](const DiscreteMeasure& a, const DiscreteMeasure& b, bool with_plan) -> py::object {
        const auto r = w1_exact(a, b);
        if (!with_plan) return py::float_(r.cost);
        return py::make_tuple(r.cost, plan_matrix(r.plan));
      },
      py::arg("mu"), py::arg("nu"), py::arg("with_plan") = false);
  m.def("bl_distance", &bl_distance, py::arg("mu"), py::arg("nu"));
  m.def(
      "w1_sinkhorn",
      [](const DiscreteMeasure& a, const DiscreteMeasure& b, double epsilon, int max_iter) {
        py::gil_scoped_release release;
        return w1_sinkhorn(a, b, epsilon, max_iter);
      },
      py::arg("mu"), py::arg("nu"), py::arg("epsilon") = 1e-3, py::arg("max_iter") = 100000);
  m.def(
      "nested_w1",
      [](const MetaMeasure& a, const MetaMeasure& b, const std::string& metric, unsigned threads) {
        py::gil_scoped_release release;
        return nested_w1(a, b, metric_from(metric), threads).cost;
      },
      py::arg("nu"), py::arg("nu_prime"), py::arg("metric") = "w1", py::arg("threads") = 1);

  m.def("normal_quantile", &normal_quantile, py::arg("p"));
  m.def(
      "psi_normal", [](double mean, double sd, std::size_t n) { return psi_normal(ThetaPoint(mean, sd), n); },
      py::arg("mean"), py::arg("sd"), py::arg("n_quantiles") = kDefaultQuantiles);
  m.def("mix_theta", &mix_theta, py::arg("lam"), py::arg("n_quantiles") = kDefaultQuantiles);

  m.def(
      "converge",
      [](const std::string& config_json, unsigned threads) {
        auto cfg = parse_convergence_config(config_json);
        cfg.options.threads = threads;
        ConvergenceRun run;
        {
          py::gil_scoped_release release;
          run = run_convergence(cfg.spec, cfg.sets, cfg.options);
        }
        std::ostringstream csv;
        write_report_csv(csv, run.report);
        py::dict out;
        out["csv"] = csv.str();
        out["summary"] = summary_json(run);
        return out;
      },
      py::arg("config_json"), py::arg("threads") = 1,
      "Runs a convergence experiment from its JSON config; returns the CSV report and JSON summary.");
}
