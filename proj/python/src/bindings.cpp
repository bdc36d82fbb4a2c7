#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cprsim/config.hpp"
#include "cprsim/equilibria.hpp"
#include "cprsim/io.hpp"
#include "cprsim/sweep.hpp"

namespace py = pybind11;
using namespace cprsim;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const GridMatrix<double>& m) {
  py::array_t<double> out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

py::dict trajectory_dict(const Trajectory& t) {
  std::vector<double> r, x;
  for (const auto& s : t.states) {
    r.push_back(s.resource);
    x.push_back(s.coop_fraction);
  }
  py::dict d;
  d["time"] = to_array(t.times);
  d["R"] = to_array(r);
  d["x"] = to_array(x);
  d["terminal"] = to_string(t.terminal);
  return d;
}

py::dict ensemble_dict(const EnsembleSummary& e) {
  py::dict d;
  d["time"] = to_array(e.times);
  d["mean_R"] = to_array(e.mean_resource);
  d["stderr_R"] = to_array(e.stderr_resource);
  d["mean_x"] = to_array(e.mean_coop);
  d["stderr_x"] = to_array(e.stderr_coop);
  d["seeds"] = e.seeds;
  const auto n = static_cast<py::ssize_t>(e.realizations.size());
  const auto t = static_cast<py::ssize_t>(e.times.size());
  py::array_t<double> r({n, t}), x({n, t});
  auto rv = r.mutable_unchecked<2>();
  auto xv = x.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t k = 0; k < t; ++k) {
      rv(i, k) = e.realizations[i][k].resource;
      xv(i, k) = e.realizations[i][k].coop_fraction;
    }
  }
  d["realizations_R"] = r;
  d["realizations_x"] = x;
  return d;
}

ModelSpec make_spec(const std::string& family, double ec, double ed, double T, double w, double c,
                    double a) {
  FamilyParams p;
  p.family = parse_family(family);
  p.w = w;
  p.c = c;
  p.a = a;
  return ModelSpec(T, ec, ed, make_greed(p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the cprsim simulation core";
  m.attr("__version__") = CPRSIM_VERSION;

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init(&make_spec), py::arg("family"), py::arg("ec"), py::arg("ed"), py::arg("T") = 2.0,
           py::arg("w") = -1.0, py::arg("c") = 0.0, py::arg("a") = 0.0)
      .def_property_readonly("growth_rate", &ModelSpec::growth_rate)
      .def_property_readonly("ec", &ModelSpec::e_c_hat)
      .def_property_readonly("ed", &ModelSpec::e_d_hat)
      .def_property_readonly("family", [](const ModelSpec& s) { return family_name(s.greed()); })
      .def("greed", [](const ModelSpec& s, double r, double x) { return greed_eval(s.greed(), {r, x}); });

  py::class_<IntegratorOptions>(m, "IntegratorOptions")
      .def(py::init<>())
      .def_readwrite("step_size", &IntegratorOptions::step_size)
      .def_readwrite("max_time", &IntegratorOptions::max_time)
      .def_readwrite("steady_tol", &IntegratorOptions::steady_tol)
      .def_readwrite("window", &IntegratorOptions::window)
      .def_readwrite("depletion_floor", &IntegratorOptions::depletion_floor)
      .def_readwrite("record_interval", &IntegratorOptions::record_interval);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("r0_points", &GridSpec::r0_points)
      .def_readwrite("x0_points", &GridSpec::x0_points)
      .def_property(
          "r0_range", [](const GridSpec& g) { return std::make_pair(g.r0_range.lo, g.r0_range.hi); },
          [](GridSpec& g, std::pair<double, double> v) { g.r0_range = {v.first, v.second}; })
      .def_property(
          "x0_range", [](const GridSpec& g) { return std::make_pair(g.x0_range.lo, g.x0_range.hi); },
          [](GridSpec& g, std::pair<double, double> v) { g.x0_range = {v.first, v.second}; })
      .def("r0_axis", [](const GridSpec& g) { return to_array(g.r0_axis()); })
      .def("x0_axis", [](const GridSpec& g) { return to_array(g.x0_axis()); });

  py::class_<AbmConfig>(m, "AbmConfig")
      .def(py::init<>())
      .def_readwrite("n_players", &AbmConfig::n_players)
      .def_readwrite("seed", &AbmConfig::seed)
      .def_readwrite("t_end", &AbmConfig::t_end)
      .def_property(
          "initial", [](const AbmConfig& c) { return std::make_pair(c.initial.resource, c.initial.coop_fraction); },
          [](AbmConfig& c, std::pair<double, double> v) { c.initial = SystemState(v.first, v.second); })
      .def_property(
          "network", [](const AbmConfig& c) { return to_string(c.network.kind); },
          [](AbmConfig& c, const std::string& k) { c.network.kind = parse_network_kind(k); })
      .def_property(
          "ba_m", [](const AbmConfig& c) { return c.network.ba_m; },
          [](AbmConfig& c, int v) { c.network.ba_m = v; })
      .def_property(
          "sw_k", [](const AbmConfig& c) { return c.network.sw_k; },
          [](AbmConfig& c, int v) { c.network.sw_k = v; })
      .def_property(
          "sw_beta", [](const AbmConfig& c) { return c.network.sw_beta; },
          [](AbmConfig& c, double v) { c.network.sw_beta = v; });

  m.def(
      "integrate",
      [](const ModelSpec& spec, double r0, double x0, const IntegratorOptions& opts) {
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = integrate(spec, {r0, x0}, opts);
        }
        return trajectory_dict(t);
      },
      py::arg("spec"), py::arg("r0"), py::arg("x0"), py::arg("opts") = IntegratorOptions{});

  m.def(
      "sample_trajectory",
      [](const ModelSpec& spec, double r0, double x0, double t_end, double dt) {
        return trajectory_dict(sample_trajectory(spec, {r0, x0}, t_end, dt));
      },
      py::arg("spec"), py::arg("r0"), py::arg("x0"), py::arg("t_end"), py::arg("dt") = 1.0);

  m.def(
      "critical_value",
      [](const ModelSpec& spec) {
        const auto cv = critical_value(spec);
        py::dict d;
        d["value"] = cv.value ? py::cast(*cv.value) : py::none();
        d["model"] = cv.model_tag;
        d["region"] = to_string(cv.region);
        d["warning"] = cv.warning;
        return d;
      },
      py::arg("spec"));

  m.def("region_of", [](double ec, double ed) { return to_string(region_of(ec, ed)); });

  m.def(
      "stationary_solutions",
      [](const ModelSpec& spec) {
        py::list out;
        for (const auto& e : stationary_solutions(spec).points) {
          py::dict d;
          d["label"] = e.label;
          d["R"] = e.state.resource;
          d["x"] = e.state.coop_fraction;
          d["boundary_line"] = e.boundary_line;
          d["exists"] = e.existence_condition_met;
          d["stability"] = to_string(e.classification);
          d["eigenvalues"] = std::vector<std::complex<double>>(e.eigenvalues.begin(), e.eigenvalues.end());
          out.append(d);
        }
        return out;
      },
      py::arg("spec"));

  m.def("jacobian", [](const ModelSpec& spec, double r, double x) { return jacobian(spec, {r, x}); });

  m.def(
      "density_sweep",
      [](const ModelSpec& spec, const GridSpec& grid, const IntegratorOptions& opts, std::size_t threads) {
        DensityGrid g;
        {
          py::gil_scoped_release release;
          g = density_sweep(spec, grid, opts, threads);
        }
        const auto e = empirical_critical(g, opts.depletion_floor);
        py::array_t<int> term({g.terminal.rows, g.terminal.cols});
        std::transform(g.terminal.data.begin(), g.terminal.data.end(), term.mutable_data(),
                       [](Terminal t) { return static_cast<int>(t); });
        py::dict d;
        d["r0_axis"] = to_array(grid.r0_axis());
        d["x0_axis"] = to_array(grid.x0_axis());
        d["r_star"] = to_array(g.r_star);
        d["x_star"] = to_array(g.x_star);
        d["terminal"] = term;
        d["empirical_critical"] = e.value ? py::cast(*e.value) : py::none();
        d["unresolved_cells"] = e.unresolved_cells;
        d["non_monotone_columns"] = e.non_monotone_columns;
        return d;
      },
      py::arg("spec"), py::arg("grid") = GridSpec{}, py::arg("opts") = IntegratorOptions{},
      py::arg("threads") = 0);

  m.def(
      "run_ensemble",
      [](const AbmConfig& config, const ModelSpec& spec, int n_real, std::size_t threads) {
        EnsembleSummary e;
        {
          py::gil_scoped_release release;
          e = run_ensemble(config, spec, n_real, threads);
        }
        return ensemble_dict(e);
      },
      py::arg("config"), py::arg("spec"), py::arg("n_real") = 10, py::arg("threads") = 0);

  m.def(
      "compare_ode_abm",
      [](const ModelSpec& spec, const AbmConfig& config, int n_real) {
        ComparisonBundle b;
        {
          py::gil_scoped_release release;
          b = compare_ode_abm(spec, config, n_real);
        }
        py::dict d;
        d["ode"] = trajectory_dict(b.ode);
        d["ensemble"] = ensemble_dict(b.ensemble);
        d["gap_R"] = to_array(b.gap_resource);
        d["gap_x"] = to_array(b.gap_coop);
        d["max_gap_R"] = b.max_gap_resource;
        d["max_gap_x"] = b.max_gap_coop;
        return d;
      },
      py::arg("spec"), py::arg("config"), py::arg("n_real") = 10);

  py::class_<RunConfig>(m, "RunConfig")
      .def("serialize", [](const RunConfig& c) { return serialize(c); })
      .def_property_readonly("defaulted", [](const RunConfig& c) { return c.defaulted; })
      .def_property(
          "output_dir", [](const RunConfig& c) { return c.output.directory; },
          [](RunConfig& c, const std::string& d) { c.output.directory = d; })
      .def_property_readonly("model_spec", [](const RunConfig& c) { return c.model.spec(); });

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("subcommand_names", &subcommand_names);
  m.def(
      "compute_subcommand",
      [](const std::string& name, const RunConfig& config) {
        std::vector<OutputFile> files;
        {
          py::gil_scoped_release release;
          files = compute_subcommand(name, config);
        }
        py::dict d;
        for (const auto& f : files) d[py::str(f.name)] = f.contents;
        return d;
      },
      py::arg("name"), py::arg("config"));
  m.def(
      "run_subcommand",
      [](const std::string& name, const RunConfig& config) {
        std::ostringstream diag;
        const int code = run_subcommand(name, config, diag);
        return std::make_pair(code, diag.str());
      },
      py::arg("name"), py::arg("config"));
}
