#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "srlab/config.hpp"
#include "srlab/errors.hpp"
#include "srlab/indicators.hpp"
#include "srlab/measure.hpp"
#include "srlab/noise.hpp"
#include "srlab/pullback.hpp"
#include "srlab/rds.hpp"

namespace py = pybind11;
using namespace srlab;
using config::RunConfig;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict measure_dict(const measure::PeriodicMeasure& pm) {
    const auto& g = pm.grid();
    py::array_t<double> masses({pm.phases(), static_cast<std::size_t>(g.n_bins)});
    auto m = masses.mutable_unchecked<2>();
    for (std::size_t k = 0; k < pm.phases(); ++k) {
        for (int i = 0; i < g.n_bins; ++i) m(k, i) = pm.densities[k].mass(i);
    }
    std::vector<double> centers(static_cast<std::size_t>(g.n_bins));
    for (int i = 0; i < g.n_bins; ++i) centers[static_cast<std::size_t>(i)] = g.center(i);
    py::dict d;
    d["method"] = measure::to_string(pm.method);
    d["period"] = pm.period;
    d["sigma"] = pm.sigma;
    d["phase_times"] = to_array(pm.phase_times);
    d["bin_centers"] = to_array(centers);
    d["masses"] = masses;
    d["drops"] = pm.drops;
    d["periods_run"] = pm.periods_run;
    d["cycle_distance"] = pm.cycle_distance;
    return d;
}

measure::PeriodicMeasure measure_from(const RunConfig& cfg, const std::string& method) {
    return measure::parse_method(method) == measure::Method::Mc
               ? measure::mc_periodic_measure(cfg.system(), cfg.mc_options())
               : measure::fp_periodic_measure(cfg.system(), cfg.fp_options());
}

py::dict record_dict(const indicators::IndicatorRecord& r) {
    py::dict d;
    d["sigma"] = r.sigma;
    d["p_minus"] = r.ok ? r.p_minus : std::nan("");
    d["p_plus"] = r.ok ? r.p_plus : std::nan("");
    d["p"] = r.ok ? r.p : std::nan("");
    d["x_bar"] = r.ok ? r.x_bar : std::nan("");
    d["method"] = measure::to_string(r.method);
    d["ok"] = r.ok;
    d["error"] = r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(_srlab, m) {
    m.doc() = "Periodically forced double-well SDE: pullback orbits, periodic measures, resonance indicators";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<RunConfig>(m, "Config")
        .def(py::init([](const std::string& preset) { return RunConfig::preset_named(preset); }),
             py::arg("preset") = "fast")
        .def_static("parse", &RunConfig::parse)
        .def("set", [](RunConfig& c, const std::string& key, const py::object& value) {
            c.set(key, py::str(value).cast<std::string>());
            return &c;
        }, py::return_value_policy::reference_internal)
        .def("to_text", &RunConfig::to_text)
        .def("validate", &RunConfig::validate)
        .def_property_readonly("period", &RunConfig::period)
        .def_property_readonly("sde_dt", &RunConfig::sde_dt)
        .def_readwrite("alpha", &RunConfig::alpha)
        .def_readwrite("beta", &RunConfig::beta)
        .def_readwrite("A", &RunConfig::amplitude)
        .def_readwrite("nu", &RunConfig::nu)
        .def_readwrite("sigma", &RunConfig::sigma)
        .def_readwrite("tau", &RunConfig::tau)
        .def_readwrite("dt", &RunConfig::dt)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("n_paths", &RunConfig::n_paths)
        .def_readwrite("n_seeds", &RunConfig::n_seeds)
        .def_readwrite("t_span", &RunConfig::t_span)
        .def_readwrite("sigma_list", &RunConfig::sigma_list)
        .def_readwrite("workers", &RunConfig::workers)
        .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; })
        .def("__repr__", [](const RunConfig& c) { return "<Config preset=" + c.preset + ">"; });

    m.def("philox4x32_10", [](std::array<std::uint32_t, 4> counter, std::uint64_t key) {
        return noise::philox4x32_10(counter, key);
    }, py::arg("counter"), py::arg("key"));

    m.def("simulate", [](const RunConfig& cfg) {
        cfg.validate();
        const double dt = cfg.sde_dt();
        const std::int64_t k0 = noise::aligned_index(cfg.tau, dt);
        const auto n = static_cast<std::int64_t>(std::llround(cfg.t_span / dt));
        const noise::WienerGrid path(cfg.seed, dt, k0, k0 + n);
        std::vector<double> x;
        {
            py::gil_scoped_release release;
            x = rds::trajectory(cfg.system(), path, static_cast<double>(k0) * dt, static_cast<double>(n) * dt,
                                cfg.x0, cfg.record_every);
        }
        std::vector<double> t(x.size());
        for (std::size_t j = 0; j < t.size(); ++j) {
            t[j] = static_cast<double>(k0 + static_cast<std::int64_t>(j) * cfg.record_every) * dt;
        }
        return py::make_tuple(to_array(t), to_array(x));
    }, py::arg("config"), "Euler-Maruyama trajectory over t_span; returns (t, x).");

    m.def("pullback_point", [](const RunConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        const double dt = cfg.sde_dt();
        const std::int64_t k = noise::aligned_index(cfg.tau, dt);
        noise::WienerGrid path(seed, dt, k, k);
        pullback::RandomPointSample s;
        {
            py::gil_scoped_release release;
            s = pullback::random_point(cfg.system(), path, cfg.tau, cfg.pullback_config());
        }
        py::dict d;
        d["value"] = s.value;
        d["diameter"] = s.diameter;
        d["pullback_time"] = s.pullback_time;
        d["converged"] = s.converged;
        std::vector<double> times, diameters;
        for (const auto& h : s.history) {
            times.push_back(h.pullback_time);
            diameters.push_back(h.image.diameter());
        }
        d["schedule"] = to_array(times);
        d["diameters"] = to_array(diameters);
        return d;
    }, py::arg("config"), py::arg("seed"), "Pullback estimate of the random periodic point A(tau, omega).");

    m.def("periodic_measure", [](const RunConfig& cfg, const std::string& method) {
        cfg.validate();
        measure::PeriodicMeasure pm;
        {
            py::gil_scoped_release release;
            pm = measure_from(cfg, method);
        }
        return measure_dict(pm);
    }, py::arg("config"), py::arg("method") = "pde", "Periodic measure at K phases by 'mc' or 'pde'.");

    m.def("resonance_indicator", [](const RunConfig& cfg, const std::string& method) {
        cfg.validate();
        measure::PeriodicMeasure pm;
        {
            py::gil_scoped_release release;
            pm = measure_from(cfg, method);
        }
        return record_dict(indicators::resonance_indicator(pm));
    }, py::arg("config"), py::arg("method") = "pde", "p_minus, p_plus, p and x_bar at config.sigma.");

    m.def("sweep", [](const RunConfig& cfg, const std::string& method) {
        cfg.validate();
        std::vector<indicators::IndicatorRecord> rows;
        {
            py::gil_scoped_release release;
            rows = indicators::sigma_sweep(rds::Drift::duffing(cfg.duffing()), cfg.sigma_list,
                                           cfg.sweep_config(measure::parse_method(method)));
        }
        py::list out;
        for (const auto& r : rows) out.append(record_dict(r));
        return out;
    }, py::arg("config"), py::arg("method") = "pde", "Resonance indicators over config.sigma_list.");
}
