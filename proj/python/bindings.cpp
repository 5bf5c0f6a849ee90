#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "levy/density.hpp"
#include "levy/msd.hpp"
#include "levy/search.hpp"
#include "levy/simulation.hpp"

namespace py = pybind11;
using namespace levy;

namespace {

SearchModel make_model(double gamma, double u0) {
    SearchModel m;
    m.flight.gamma = gamma;
    m.velocity.u0 = u0;
    return m;
}

py::dict simulate(const std::map<std::string, std::string>& settings) {
    SimConfig c;
    for (const auto& [k, v] : settings) apply_setting(c, k, v);
    c.validate();
    TrialResult r;
    {
        py::gil_scoped_release release;
        r = run_trial(c);
    }
    std::vector<std::tuple<double, double, std::int64_t>> trades;
    trades.reserve(r.tape.size());
    for (const auto& t : r.tape) trades.emplace_back(t.time, t.price.to_double(), t.quantity);
    py::dict d;
    d["n_trades"] = r.report.n_trades;
    d["n_events"] = r.report.n_events;
    d["efficiency"] = r.report.efficiency;
    d["trades_per_event"] = r.report.trades_per_event;
    d["efficiency_per_rate"] = r.report.efficiency_per_rate;
    d["noise_fraction"] = r.noise_fraction;
    d["end_time"] = r.end_time;
    d["trades"] = trades;
    d["config"] = config_snapshot(c);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Levy-walk tatonnement: simulator and analytics";
    m.attr("__version__") = LEVY_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("simulate", &simulate, py::arg("settings") = std::map<std::string, std::string>{},
          "Run one trial from key=value settings; returns a summary dict with the trade list.");
    m.def("cauchy_propagator", &cauchy_propagator, py::arg("u0"), py::arg("x"), py::arg("t"));
    m.def(
        "propagator",
        [](double k, std::complex<double> s, double gamma, double u0, const std::string& form) -> std::complex<double> {
            const auto model = make_model(gamma, u0);
            if (form == "walker") return propagator_fl(model, k, s);
            if (form == "renewal") return renewal_density_fl(model, k, s);
            if (form == "asymptotic") return asymptotic_propagator(model, k, s);
            if (form == "cauchy") return cauchy_propagator_fl(u0, k, s);
            throw std::invalid_argument("unknown form '" + form + "'");
        },
        py::arg("k"), py::arg("s"), py::arg("gamma") = 1.5, py::arg("u0") = 1.0, py::arg("form") = "walker");
    m.def(
        "ballistic_scaling",
        [](double y, double gamma, double u0) {
            const auto v = ballistic_scaling_function(make_model(gamma, u0), y);
            return py::make_tuple(v.value, v.flagged);
        },
        py::arg("y"), py::arg("gamma") = 0.5, py::arg("u0") = 1.0);
    m.def(
        "interauction_density",
        [](double B, double tau, double D, double v_star, double omega, const std::string& regime) {
            InterauctionParams p;
            p.B = B;
            p.tau = tau;
            p.D = D;
            p.v_star = v_star;
            p.omega = omega;
            return interauction_density(p, parse_interauction_regime(regime));
        },
        py::arg("B") = 0.2, py::arg("tau") = 0.01, py::arg("D") = 1.0, py::arg("v_star") = 1.0,
        py::arg("omega") = 1.0, py::arg("regime") = "diffusive");
    m.def(
        "factor_surface",
        [](bool zoom) {
            const auto s = default_factor_surface(zoom);
            return py::make_tuple(s.tau, s.B, s.factor);
        },
        py::arg("zoom") = false, "Returns (tau, B, factor[tau][B]).");
    m.def(
        "msd_exponent_synthetic",
        [](int walkers, double gamma, std::uint64_t seed) {
            MsdEstimate e;
            {
                py::gil_scoped_release release;
                e = msd_exponent(levy_walk_ensemble(walkers, gamma, 1.0, log_spaced(1.0, 1e3, 40), seed));
            }
            return py::make_tuple(e.alpha, e.std_error);
        },
        py::arg("walkers") = 10000, py::arg("gamma") = 1.5, py::arg("seed") = 1);
}
