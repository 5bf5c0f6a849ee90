#include "levy/sweep.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "levy/rng.hpp"

namespace levy {

SweepGrid paper_grid() {
    SweepGrid g;
    g.event_rates = {1, 6, 10, 100, 1000, 10000};
    for (int i = 1; i <= 11; ++i) g.gammas.push_back(0.25 * i);
    g.biases = {Bias::None, Bias::Quantity};
    g.trials = 30;
    return g;
}

SweepGrid desk_grid() {
    SweepGrid g;
    g.event_rates = {1, 10, 100, 1000};
    g.gammas = {0.5, 1.5, 2.5};
    g.biases = {Bias::None, Bias::Quantity};
    g.trials = 10;
    return g;
}

std::vector<TrialPlan> plan_sweep(const SweepGrid& grid, std::uint64_t base_seed) {
    std::vector<TrialPlan> plan;
    plan.reserve(grid.trial_count());
    std::size_t cell = 0;
    for (Bias b : grid.biases)
        for (double rate : grid.event_rates)
            for (double gamma : grid.gammas) {
                for (int t = 0; t < grid.trials; ++t) {
                    TrialPlan p;
                    p.cell = cell;
                    p.event_rate = rate;
                    p.gamma = gamma;
                    p.bias = b;
                    p.trial = t;
                    p.seed = derive_seed(base_seed, {std::bit_cast<std::uint64_t>(rate),
                                                     std::bit_cast<std::uint64_t>(gamma),
                                                     static_cast<std::uint64_t>(b),
                                                     static_cast<std::uint64_t>(t)});
                    plan.push_back(p);
                }
                ++cell;
            }
    return plan;
}

namespace {

void mean_sd(const std::vector<double>& xs, double* mean, double* sd) {
    *mean = 0.0;
    *sd = 0.0;
    if (xs.empty()) return;
    double s = 0.0;
    for (double x : xs) s += x;
    *mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double ss = 0.0;
    for (double x : xs) ss += (x - *mean) * (x - *mean);
    *sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::string g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

constexpr const char* kTrialHeader =
    "event_rate,gamma,bias,trial,seed,n_trades,efficiency,trades_per_event,noise_fraction,"
    "efficiency_per_rate,n_events,status";

}  // namespace

std::vector<CellRow> aggregate_cells(const SweepGrid& grid, const std::vector<TrialRow>& rows) {
    std::vector<CellRow> cells(grid.cell_count());
    std::vector<std::vector<double>> eff(cells.size()), tpe(cells.size()), epr(cells.size());
    for (const TrialRow& r : rows) {
        CellRow& c = cells.at(r.plan.cell);
        c.event_rate = r.plan.event_rate;
        c.gamma = r.plan.gamma;
        c.bias = r.plan.bias;
        if (r.failed) {
            ++c.n_failed;
            continue;
        }
        ++c.n_trials;
        eff[r.plan.cell].push_back(r.efficiency);
        tpe[r.plan.cell].push_back(r.trades_per_event);
        epr[r.plan.cell].push_back(r.efficiency_per_rate);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        mean_sd(eff[i], &cells[i].mean_efficiency, &cells[i].sd_efficiency);
        mean_sd(tpe[i], &cells[i].mean_trades_per_event, &cells[i].sd_trades_per_event);
        double unused = 0.0;
        mean_sd(epr[i], &cells[i].mean_efficiency_per_rate, &unused);
    }
    return cells;
}

SweepResult run_sweep(const SweepGrid& grid, const SimConfig& base, const SweepOptions& options) {
    const auto plan = plan_sweep(grid, base.seed);
    SweepResult res;
    res.trials.resize(plan.size());
    if (options.keep_tapes) res.tapes.resize(plan.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < plan.size(); i = next++) {
            TrialRow& row = res.trials[i];
            row.plan = plan[i];
            SimConfig c = base;
            c.event_rate = plan[i].event_rate;
            c.gamma = plan[i].gamma;
            c.bias = plan[i].bias;
            c.seed = plan[i].seed;
            c.record_events = false;
            try {
                TrialResult t = run_trial(c);
                row.n_trades = t.report.n_trades;
                row.n_events = t.report.n_events;
                row.efficiency = t.report.efficiency;
                row.trades_per_event = t.report.trades_per_event;
                row.efficiency_per_rate = t.report.efficiency_per_rate;
                row.noise_fraction = t.noise_fraction;
                row.insufficient_trades = t.report.insufficient_trades;
                if (options.keep_tapes) res.tapes[i] = std::move(t.tape);
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    res.cells = aggregate_cells(grid, res.trials);
    return res;
}

void write_trial_rows_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << kTrialHeader << '\n';
    for (const TrialRow& r : rows) {
        out << g9(r.plan.event_rate) << ',' << g9(r.plan.gamma) << ',' << to_string(r.plan.bias)
            << ',' << r.plan.trial << ',' << r.plan.seed << ',';
        if (r.failed) {
            out << ",,,," << ",," << "failed" << '\n';
            continue;
        }
        out << r.n_trades << ',' << g9(r.efficiency) << ',' << g9(r.trades_per_event) << ','
            << g9(r.noise_fraction) << ',' << g9(r.efficiency_per_rate) << ',' << r.n_events << ','
            << (r.insufficient_trades ? "insufficient_trades" : "ok") << '\n';
    }
}

void write_cell_rows_csv(std::ostream& out, const std::vector<CellRow>& rows) {
    out << "event_rate,gamma,bias,n_trials,n_failed,mean_efficiency,sd_efficiency,"
           "mean_trades_per_event,sd_trades_per_event,mean_efficiency_per_rate\n";
    for (const CellRow& c : rows)
        out << g9(c.event_rate) << ',' << g9(c.gamma) << ',' << to_string(c.bias) << ','
            << c.n_trials << ',' << c.n_failed << ',' << g9(c.mean_efficiency) << ','
            << g9(c.sd_efficiency) << ',' << g9(c.mean_trades_per_event) << ','
            << g9(c.sd_trades_per_event) << ',' << g9(c.mean_efficiency_per_rate) << '\n';
}

std::vector<TrialRow> read_trial_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTrialHeader)
        throw std::runtime_error("trial summary: missing or unexpected header");
    std::vector<TrialRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c = split(line);
        if (c.size() != 12) throw std::runtime_error("trial summary: bad row '" + line + "'");
        TrialRow r;
        r.plan.event_rate = std::stod(c[0]);
        r.plan.gamma = std::stod(c[1]);
        r.plan.bias = parse_bias(c[2]);
        r.plan.trial = std::stoi(c[3]);
        r.plan.seed = std::stoull(c[4]);
        if (c[11] == "failed") {
            r.failed = true;
        } else {
            r.n_trades = std::stoll(c[5]);
            r.efficiency = std::stod(c[6]);
            r.trades_per_event = std::stod(c[7]);
            r.noise_fraction = std::stod(c[8]);
            r.efficiency_per_rate = std::stod(c[9]);
            r.n_events = std::stoll(c[10]);
            r.insufficient_trades = c[11] == "insufficient_trades";
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace levy
