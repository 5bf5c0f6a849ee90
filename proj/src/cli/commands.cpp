#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config_file.hpp"
#include "levy/density.hpp"
#include "levy/msd.hpp"
#include "levy/search.hpp"
#include "levy/simulation.hpp"
#include "levy/sweep.hpp"
#include "levy/tape_io.hpp"
#include "manifest.hpp"

namespace levy::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string join_args(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) {
        if (!s.empty()) s += ' ';
        s += a;
    }
    return s;
}

// stdout unless a path is given
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
            out_ = file_.get();
        }
    }
    std::ostream& operator*() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

// An error that should exit 2 regardless of the exception type underneath.
struct FlagError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Coefficient parse_coefficient(const std::string& key, const std::string& text) {
    if (text.find(':') == std::string::npos) {
        auto v = parse_number_list(key, text);
        if (v.size() != 1) throw ConfigError(key, "expected a number or a t:v,t:v table");
        return v[0];
    }
    std::vector<double> ts, vs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(key, "table entry '" + item + "' is not t:v");
        ts.push_back(parse_number_list(key, item.substr(0, colon)).at(0));
        vs.push_back(parse_number_list(key, item.substr(colon + 1)).at(0));
    }
    try {
        return Coefficient::tabulated(ts, vs);
    } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
    }
}

std::uint64_t env_seed(std::uint64_t fallback) {
    const char* s = std::getenv("LEVY_AUCTION_SEED");
    if (!s || !*s) return fallback;
    return parse_seed("LEVY_AUCTION_SEED", s);
}

// Trial flags shared by simulate and sweep, kept as text so that apply_setting validates them
// with the same messages as a config file.
struct TrialFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { flags[key] = v; }, help);
    }
};

void add_trial_flags(CLI::App* app, TrialFlags& f) {
    app->add_option("--config", f.config_path, "key=value config file");
    app->add_option("--set", f.sets, "key=value override (repeatable)");
    f.add(app, "--seed", "seed", "base seed");
    f.add(app, "--event-rate", "event_rate", "Poisson event rate");
    f.add(app, "--gamma", "gamma", "flight-time tail exponent");
    f.add(app, "--u0", "u0", "Cauchy velocity scale");
    f.add(app, "--bias", "bias", "none or quantity");
    f.add(app, "--noise-fraction", "noise_fraction", "fraction of noise traders, or 'random'");
    f.add(app, "--n-traders", "n_traders", "number of traders");
    f.add(app, "--max-events", "max_events", "event budget");
}

// defaults < LEVY_AUCTION_SEED < config file < --set < flags
SimConfig resolve_config(const TrialFlags& f, SweepSettings* sweep) {
    SimConfig c;
    c.seed = env_seed(c.seed);
    std::vector<Setting> settings;
    if (!f.config_path.empty()) settings = read_config_file(f.config_path);
    for (const auto& s : f.sets) settings.push_back(parse_assignment(s));
    for (const auto& [k, v] : f.flags) settings.emplace_back(k, v);
    for (const auto& [k, v] : settings) {
        if (sweep && is_sweep_key(k)) apply_sweep_setting(*sweep, k, v);
        else apply_setting(c, k, v);
    }
    c.validate();
    return c;
}

void write_report_csv(std::ostream& out, const TrialResult& r) {
    const auto& e = r.report;
    out << "n_trades,n_events,efficiency,trades_per_event,efficiency_per_rate,noise_fraction,"
           "insufficient_trades,end_time\n";
    out << e.n_trades << ',' << e.n_events << ',' << num(e.efficiency) << ',' << num(e.trades_per_event) << ','
        << num(e.efficiency_per_rate) << ',' << num(r.noise_fraction) << ',' << (e.insufficient_trades ? 1 : 0)
        << ',' << num(r.end_time) << '\n';
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

// Runs `body` with the manifest written afterwards whatever happens; exit 1 on failure.
int run_with_manifest(RunManifest& m, const fs::path& dir, std::ostream& err, const std::function<void()>& body) {
    m.version = LEVY_VERSION;
    m.start_time = utc_now();
    int code = 0;
    try {
        fs::create_directories(dir);
        body();
        m.status = "ok";
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = e.what();
        err << "error: " << e.what() << '\n';
        code = 1;
    }
    m.end_time = utc_now();
    try {
        write_manifest((dir / "manifest.json").string(), m);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = 1;
    }
    return code;
}

struct SimulateOpts {
    TrialFlags trial;
    std::string out = ".";
    bool walk_log = false;
};

int cmd_simulate(const SimulateOpts& o, const std::string& cmdline, std::ostream& err) {
    const SimConfig cfg = resolve_config(o.trial, nullptr);
    RunManifest m;
    m.command_line = cmdline;
    m.config = config_snapshot(cfg);
    m.seeds = {cfg.seed};
    const fs::path dir(o.out);
    return run_with_manifest(m, dir, err, [&] {
        const TrialResult r = run_trial(cfg);
        {
            auto f = open_out(dir / "tape.csv");
            write_tape_csv(f, r.tape);
        }
        m.outputs.push_back((dir / "tape.csv").string());
        {
            auto f = open_out(dir / "report.csv");
            write_report_csv(f, r);
        }
        m.outputs.push_back((dir / "report.csv").string());
        if (o.walk_log) {
            double longest = 0.0;
            for (const auto& t : r.traders) longest = std::max(longest, std::min(t.flight_time, r.end_time));
            WalkLog log;
            if (longest > 2e-3) log = quote_walk_log(r, log_spaced(1e-3, longest, 40));
            auto f = open_out(dir / "walk.csv");
            write_walk_log_csv(f, log);
            m.outputs.push_back((dir / "walk.csv").string());
        }
    });
}

struct SweepOpts {
    TrialFlags trial;
    bool paper = false;
    bool desk = false;
    std::optional<std::string> rates, gammas, biases;
    std::optional<int> trials, jobs;
    std::string out = ".";
};

int cmd_sweep(const SweepOpts& o, const std::string& cmdline, std::ostream& err) {
    if (o.paper && o.desk) throw FlagError("--paper-grid and --desk-scale are exclusive");
    SweepSettings s;
    const SimConfig base = resolve_config(o.trial, &s);
    if (o.rates) s.rates = parse_grid("rates", *o.rates);
    if (o.gammas) s.gammas = parse_grid("gammas", *o.gammas);
    if (o.biases) s.biases = parse_bias_list("biases", *o.biases);
    if (o.trials) s.trials = *o.trials;
    if (o.jobs) s.jobs = *o.jobs;

    SweepGrid grid;
    grid.biases = {Bias::None};
    if (o.paper) grid = paper_grid();
    if (o.desk) grid = desk_grid();
    if (s.rates) grid.event_rates = *s.rates;
    if (s.gammas) grid.gammas = *s.gammas;
    if (s.biases) grid.biases = *s.biases;
    if (s.trials) grid.trials = *s.trials;
    if (grid.trials < 1) throw ConfigError("trials", "must be >= 1");
    if (grid.trial_count() == 0) throw ConfigError("", "empty grid: no rates, gammas or biases");
    for (double r : grid.event_rates)
        if (!(r > 0.0)) throw ConfigError("rates", "must be > 0");
    for (double g : grid.gammas)
        if (!(g > 0.0)) throw ConfigError("gammas", "must be > 0");
    const int jobs = s.jobs.value_or(1);
    if (jobs < 1) throw ConfigError("jobs", "must be >= 1");

    RunManifest m;
    m.command_line = cmdline;
    m.config = config_snapshot(base);
    auto join = [](const std::vector<double>& v) {
        std::string t;
        for (double x : v) t += (t.empty() ? "" : ",") + num(x);
        return t;
    };
    m.config["rates"] = join(grid.event_rates);
    m.config["gammas"] = join(grid.gammas);
    std::string b;
    for (Bias x : grid.biases) b += (b.empty() ? "" : ",") + std::string(to_string(x));
    m.config["biases"] = b;
    m.config["trials"] = std::to_string(grid.trials);
    for (const auto& p : plan_sweep(grid, base.seed)) m.seeds.push_back(p.seed);
    const fs::path dir(o.out);
    return run_with_manifest(m, dir, err, [&] {
        const SweepResult r = run_sweep(grid, base, {jobs, false});
        {
            auto f = open_out(dir / "trials.csv");
            write_trial_rows_csv(f, r.trials);
        }
        m.outputs.push_back((dir / "trials.csv").string());
        {
            auto f = open_out(dir / "cells.csv");
            write_cell_rows_csv(f, r.cells);
        }
        m.outputs.push_back((dir / "cells.csv").string());
    });
}

// ---- analytics

struct PropagatorOpts {
    double gamma = 1.5, u0 = 1.0, s_imag = 0.0;
    std::string k = "0:2:21", s = "1", form = "walker", out;
};

int cmd_propagator(const PropagatorOpts& o, std::ostream& stdout_) {
    const auto ks = parse_grid("k", o.k);
    const auto ss = parse_grid("s", o.s);
    SearchModel model;
    model.velocity.u0 = o.u0;
    model.flight.gamma = o.gamma;
    model.validate();
    std::function<cplx(double, cplx)> f;
    if (o.form == "walker") f = [&](double k, cplx s) { return propagator_fl(model, k, s); };
    else if (o.form == "renewal") f = [&](double k, cplx s) { return renewal_density_fl(model, k, s); };
    else if (o.form == "asymptotic") f = [&](double k, cplx s) { return asymptotic_propagator(model, k, s); };
    else if (o.form == "cauchy") f = [&](double k, cplx s) { return cauchy_propagator_fl(o.u0, k, s); };
    else throw ConfigError("form", "expected walker, renewal, asymptotic or cauchy");
    Sink sink(o.out, stdout_);
    *sink << "k,s_re,s_im,re,im\n";
    for (double s : ss)
        for (double k : ks) {
            const cplx v = f(k, cplx(s, o.s_imag));
            *sink << num(k) << ',' << num(s) << ',' << num(o.s_imag) << ',' << num(v.real()) << ','
                  << num(v.imag()) << '\n';
        }
    return 0;
}

struct ScalingOpts {
    double gamma = 0.5, u0 = 1.0;
    std::string y = "-5:5:101", out;
};

int cmd_scaling(const ScalingOpts& o, std::ostream& stdout_) {
    SearchModel model;
    model.velocity.u0 = o.u0;
    model.flight.gamma = o.gamma;
    const auto ys = parse_grid("y", o.y);
    Sink sink(o.out, stdout_);
    *sink << "y,phi,raw_eps1e-2,raw_eps1e-3,raw_eps1e-4,flagged\n";
    for (double y : ys) {
        const auto v = ballistic_scaling_function(model, y);
        *sink << num(y) << ',' << num(v.value) << ',' << num(v.raw[0]) << ',' << num(v.raw[1]) << ','
              << num(v.raw[2]) << ',' << (v.flagged ? 1 : 0) << '\n';
    }
    return 0;
}

struct CauchyOpts {
    double u0 = 1.0;
    std::string x = "0", t = "1", out;
};

int cmd_cauchy(const CauchyOpts& o, std::ostream& stdout_) {
    const auto xs = parse_grid("x", o.x);
    const auto ts = parse_grid("t", o.t);
    Sink sink(o.out, stdout_);
    *sink << "x,t,value\n";
    for (double t : ts)
        for (double x : xs) *sink << num(x) << ',' << num(t) << ',' << num(cauchy_propagator(o.u0, x, t)) << '\n';
    return 0;
}

struct DensityOpts {
    std::string scenario = "master";
    std::string D = "1", lambda1 = "0", lambda2 = "0", v = "0", v1 = "0", phi2 = "0";
    double v_star = 0.0, c = 0.0;
    std::string x = "-5:5:21", t = "1";
    std::string init = "gaussian";
    double init_x = 0.0, init_width = 1.0, init_mass = 1.0;
    std::optional<double> line_x;
    std::string line_rate = "1";
    double chi = 0.0, mass = 1.0;
    std::string regime;
    std::optional<std::string> B, tau;
    double omega = 1.0, lambda2_star = 0.0, lambda1_star = 0.0, phi2_star = 0.0;
    bool zoom = false;
    std::string out;
};

ScenarioParams scenario_params(const DensityOpts& o) {
    ScenarioParams p;
    p.D = parse_coefficient("D", o.D);
    p.lambda1 = parse_coefficient("lambda1", o.lambda1);
    p.lambda2 = parse_coefficient("lambda2", o.lambda2);
    p.v = parse_coefficient("v", o.v);
    p.v1 = parse_coefficient("v1", o.v1);
    p.phi2 = parse_coefficient("phi2", o.phi2);
    p.v_star = o.v_star;
    p.c = o.c;
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw FlagError(e.what());
    }
    return p;
}

InitialCondition initial_condition(const DensityOpts& o) {
    InitialCondition ic;
    if (o.init == "gaussian") {
        if (!(o.init_width > 0.0)) throw ConfigError("init-width", "must be > 0");
        const double mu = o.init_x, sd = o.init_width, m = o.init_mass;
        ic.density = [mu, sd, m](double x) {
            const double z = (x - mu) / sd;
            return m * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * 3.141592653589793));
        };
    } else if (o.init == "point") {
        ic.masses.push_back({o.init_x, o.init_mass});
    } else if (o.init != "none") {
        throw ConfigError("init", "expected gaussian, point or none");
    }
    return ic;
}

int cmd_density(const DensityOpts& o, std::ostream& stdout_) {
    Sink sink(o.out, stdout_);
    if (o.scenario == "interauction" || o.scenario == "surface") {
        const auto Bs = parse_grid("B", o.B.value_or("0.2"));
        const auto taus = parse_grid("tau", o.tau.value_or("0.01"));
        const auto Dv = parse_number_list("D", o.D);
        if (Dv.size() != 1) throw ConfigError("D", "must be a single number here");
        *sink << "B,tau,factor\n";
        if (o.scenario == "surface") {
            const FactorSurface s = !o.B && !o.tau && Dv[0] == 1.0 && o.v_star == 0.0
                                        ? default_factor_surface(o.zoom)
                                        : multiplying_factor_surface(Bs, taus, Dv[0], o.v_star == 0.0 ? 1.0 : o.v_star);
            for (std::size_t i = 0; i < s.tau.size(); ++i)
                for (std::size_t j = 0; j < s.B.size(); ++j)
                    *sink << num(s.B[j]) << ',' << num(s.tau[i]) << ',' << num(s.factor[i][j]) << '\n';
            return 0;
        }
        InterauctionRegime regime = InterauctionRegime::Diffusive;
        if (!o.regime.empty()) {
            try {
                regime = parse_interauction_regime(o.regime);
            } catch (const std::exception& e) {
                throw ConfigError("regime", e.what());
            }
        }
        InterauctionParams p;
        p.D = Dv[0];
        p.v_star = o.v_star == 0.0 ? 1.0 : o.v_star;
        p.omega = o.omega;
        p.lambda2_star = o.lambda2_star;
        p.lambda1_star = o.lambda1_star;
        p.phi2_star = o.phi2_star;
        for (double tau : taus)
            for (double B : Bs) {
                p.B = B;
                p.tau = tau;
                *sink << num(B) << ',' << num(tau) << ',' << num(interauction_density(p, regime)) << '\n';
            }
        return 0;
    }

    const ScenarioParams params = scenario_params(o);
    const auto xs = parse_grid("x", o.x);
    const auto ts = parse_grid("t", o.t);
    std::function<double(double, double)> g;
    if (o.scenario == "master") {
        auto ic = std::make_shared<InitialCondition>(initial_condition(o));
        auto src = std::make_shared<Source>();
        if (o.line_x) src->lines.push_back({*o.line_x, parse_coefficient("line-rate", o.line_rate)});
        g = [params, ic, src](double x, double t) { return master_density(params, *src, *ic, x, t); };
    } else if (o.scenario == "steady") {
        const double D = params.D(kSteadyLag);
        const double chi = o.chi;
        auto Q = [D, chi](double x) { return (x - chi) * (x - chi) / std::sqrt(4.0 * D * kSteadyLag); };
        g = [params, Q](double x, double) { return steady_state_density(params, Q, x); };
    } else if (o.scenario == "large-demand") {
        const double M = o.mass;
        g = [params, M](double x, double t) { return large_demand_density(params, M, x, t); };
    } else if (o.scenario == "inflow") {
        InflowRegime regime = InflowRegime::Time;
        if (!o.regime.empty()) {
            try {
                regime = parse_inflow_regime(o.regime);
            } catch (const std::exception& e) {
                throw ConfigError("regime", e.what());
            }
        }
        g = [params, regime](double x, double t) { return sustained_inflow_density(params, regime, x, t); };
    } else if (o.scenario == "high-reaction") {
        auto ic = std::make_shared<InitialCondition>(initial_condition(o));
        g = [params, ic](double x, double t) { return high_reaction_density(params, *ic, x, t); };
    } else {
        throw ConfigError("scenario", "unknown scenario '" + o.scenario + "'");
    }
    const DensityField f = evaluate_field(g, xs, ts);
    *sink << "x,t,value\n";
    std::size_t i = 0;
    for (double t : f.t)
        for (double x : f.x) *sink << num(x) << ',' << num(t) << ',' << num(f.values[i++]) << '\n';
    return 0;
}

struct SurfaceOpts {
    bool zoom = false;
    double D = 1.0, v_star = 1.0;
    std::optional<std::string> B, tau;
    std::string out;
};

int cmd_surface(const SurfaceOpts& o, std::ostream& stdout_) {
    FactorSurface s = default_factor_surface(o.zoom);
    if (o.B || o.tau || o.D != 1.0 || o.v_star != 1.0)
        s = multiplying_factor_surface(o.B ? parse_grid("B", *o.B) : s.B, o.tau ? parse_grid("tau", *o.tau) : s.tau,
                                       o.D, o.v_star);
    Sink sink(o.out, stdout_);
    *sink << "tau\\B";
    for (double b : s.B) *sink << ',' << num(b);
    *sink << '\n';
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
        *sink << num(s.tau[i]);
        for (double f : s.factor[i]) *sink << ',' << num(f);
        *sink << '\n';
    }
    return 0;
}

struct MsdOpts {
    std::string walk_log;
    bool synthetic = false;
    double gamma = 1.5, speed = 1.0, t_min = 1.0, t_max = 1e3;
    int walkers = 10000, points = 40;
    std::optional<std::string> seed;
    std::string out;
};

int cmd_msd(const MsdOpts& o, std::ostream& stdout_) {
    WalkLog log;
    if (o.synthetic == !o.walk_log.empty()) throw FlagError("give exactly one of --walk-log or --synthetic");
    if (o.synthetic) {
        if (o.walkers < 2) throw ConfigError("walkers", "must be >= 2");
        if (!(o.t_min > 0.0 && o.t_max > o.t_min)) throw ConfigError("t-max", "need 0 < t-min < t-max");
        const std::uint64_t seed = o.seed ? parse_seed("seed", *o.seed) : env_seed(1);
        log = levy_walk_ensemble(o.walkers, o.gamma, o.speed, log_spaced(o.t_min, o.t_max, o.points), seed);
    } else {
        std::ifstream in(o.walk_log);
        if (!in) throw FlagError("cannot read walk log '" + o.walk_log + "'");
        log = read_walk_log_csv(in);
    }
    const MsdEstimate e = msd_exponent(log);
    Sink sink(o.out, stdout_);
    *sink << "alpha,std_error,n_points,fit_from,fit_to,flagged\n";
    *sink << num(e.alpha) << ',' << num(e.std_error) << ',' << e.n_points << ',' << num(e.fit_from) << ','
          << num(e.fit_to) << ',' << (e.flagged ? 1 : 0) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    const std::string cmdline = join_args(args);

    CLI::App app{"Levy-walk tatonnement: auction simulator and search analytics", "levy-auction"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(LEVY_VERSION));

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "run one trial; writes tape.csv, report.csv, manifest.json");
    add_trial_flags(simulate, sim.trial);
    simulate->add_option("--out", sim.out, "output directory");
    simulate->add_flag("--walk-log", sim.walk_log, "also write walk.csv of quote displacements");

    SweepOpts sw;
    auto* sweep = app.add_subcommand("sweep", "run a trial grid; writes trials.csv, cells.csv, manifest.json");
    add_trial_flags(sweep, sw.trial);
    sweep->add_flag("--paper-grid", sw.paper, "the full 3960-trial grid");
    sweep->add_flag("--desk-scale", sw.desk, "the reduced 240-trial grid");
    sweep->add_option("--rates", sw.rates, "event rates, comma separated");
    sweep->add_option("--gammas", sw.gammas, "gamma values, comma separated");
    sweep->add_option("--biases", sw.biases, "bias settings, comma separated");
    sweep->add_option("--trials", sw.trials, "trials per cell");
    sweep->add_option("--jobs", sw.jobs, "worker threads");
    sweep->add_option("--out", sw.out, "output directory");

    auto* analytics = app.add_subcommand("analytics", "evaluate search and density analytics as CSV");
    analytics->require_subcommand(1);

    PropagatorOpts po;
    auto* prop = analytics->add_subcommand("propagator", "Fourier-Laplace propagator on a k,s grid");
    prop->add_option("--gamma", po.gamma);
    prop->add_option("--u0", po.u0);
    prop->add_option("--k", po.k, "k grid");
    prop->add_option("--s", po.s, "real part of s, grid");
    prop->add_option("--s-imag", po.s_imag, "imaginary part of s");
    prop->add_option("--form", po.form, "walker, renewal, asymptotic or cauchy");
    prop->add_option("--out", po.out, "output file (default stdout)");

    ScalingOpts so;
    auto* scal = analytics->add_subcommand("scaling", "ballistic scaling function");
    scal->add_option("--gamma", so.gamma);
    scal->add_option("--u0", so.u0);
    scal->add_option("--y", so.y, "y grid");
    scal->add_option("--out", so.out);

    CauchyOpts co;
    auto* cau = analytics->add_subcommand("cauchy", "closed-form Cauchy propagator");
    cau->add_option("--u0", co.u0);
    cau->add_option("--x", co.x, "x grid");
    cau->add_option("--t", co.t, "t grid");
    cau->add_option("--out", co.out);

    DensityOpts dn;
    auto* den = analytics->add_subcommand("density", "price-density evaluators");
    den->add_option("--scenario", dn.scenario,
                    "master, steady, large-demand, inflow, high-reaction, interauction or surface");
    den->add_option("--D", dn.D, "number or t:v,t:v table");
    den->add_option("--lambda1", dn.lambda1);
    den->add_option("--lambda2", dn.lambda2);
    den->add_option("--v", dn.v);
    den->add_option("--v1", dn.v1);
    den->add_option("--phi2", dn.phi2);
    den->add_option("--v-star", dn.v_star);
    den->add_option("--c", dn.c);
    den->add_option("--x", dn.x, "x grid");
    den->add_option("--t", dn.t, "t grid");
    den->add_option("--init", dn.init, "gaussian, point or none");
    den->add_option("--init-x", dn.init_x);
    den->add_option("--init-width", dn.init_width);
    den->add_option("--init-mass", dn.init_mass);
    den->add_option("--line-x", dn.line_x, "position of a line source");
    den->add_option("--line-rate", dn.line_rate, "line source rate, number or table");
    den->add_option("--chi", dn.chi, "steady-state centre");
    den->add_option("--mass", dn.mass, "large-demand mass");
    den->add_option("--regime", dn.regime, "inflow or interauction regime");
    den->add_option("--B", dn.B, "B grid");
    den->add_option("--tau", dn.tau, "tau grid");
    den->add_option("--omega", dn.omega);
    den->add_option("--lambda2-star", dn.lambda2_star);
    den->add_option("--lambda1-star", dn.lambda1_star);
    den->add_option("--phi2-star", dn.phi2_star);
    den->add_flag("--zoom", dn.zoom, "surface: short-interval view");
    den->add_option("--out", dn.out);

    SurfaceOpts su;
    auto* surf = analytics->add_subcommand("surface", "multiplying-factor matrix, rows tau, columns B");
    surf->add_flag("--zoom", su.zoom);
    surf->add_option("--D", su.D);
    surf->add_option("--v-star", su.v_star);
    surf->add_option("--B", su.B, "B grid");
    surf->add_option("--tau", su.tau, "tau grid");
    surf->add_option("--out", su.out);

    MsdOpts mo;
    auto* msd = analytics->add_subcommand("msd", "MSD exponent from a walk log or synthetic walkers");
    msd->add_option("--walk-log", mo.walk_log, "walker,time,position CSV");
    msd->add_flag("--synthetic", mo.synthetic);
    msd->add_option("--gamma", mo.gamma);
    msd->add_option("--walkers", mo.walkers);
    msd->add_option("--speed", mo.speed);
    msd->add_option("--t-min", mo.t_min);
    msd->add_option("--t-max", mo.t_max);
    msd->add_option("--points", mo.points);
    msd->add_option("--seed", mo.seed);
    msd->add_option("--out", mo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << LEVY_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*simulate) return cmd_simulate(sim, cmdline, err);
        if (*sweep) return cmd_sweep(sw, cmdline, err);
        if (*prop) return cmd_propagator(po, out);
        if (*scal) return cmd_scaling(so, out);
        if (*cau) return cmd_cauchy(co, out);
        if (*den) return cmd_density(dn, out);
        if (*surf) return cmd_surface(su, out);
        if (*msd) return cmd_msd(mo, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const FlagError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        // invalid_argument and domain_error: parameters outside the evaluator's domain
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace levy::cli
