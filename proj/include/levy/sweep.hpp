#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "levy/simulation.hpp"

namespace levy {

struct SweepGrid {
    std::vector<double> event_rates;
    std::vector<double> gammas;
    std::vector<Bias> biases;
    int trials = 1;

    std::size_t cell_count() const { return event_rates.size() * gammas.size() * biases.size(); }
    std::size_t trial_count() const { return cell_count() * static_cast<std::size_t>(trials); }
};

// rates {1,6,10,100,1000,10000} x gammas 0.25..2.75 step 0.25 x both bias sets x 30 trials
SweepGrid paper_grid();
// rates {1,10,100,1000} x gammas {0.5,1.5,2.5} x both bias sets x 10 trials
SweepGrid desk_grid();

struct TrialPlan {
    std::size_t cell = 0;
    double event_rate = 0.0;
    double gamma = 0.0;
    Bias bias = Bias::None;
    int trial = 0;
    std::uint64_t seed = 0;
};

// Trial seeds depend on the base seed and the cell/trial coordinates only.
std::vector<TrialPlan> plan_sweep(const SweepGrid& grid, std::uint64_t base_seed);

struct TrialRow {
    TrialPlan plan;
    std::int64_t n_trades = 0;
    std::int64_t n_events = 0;
    double efficiency = 0.0;
    double trades_per_event = 0.0;
    double efficiency_per_rate = 0.0;
    double noise_fraction = 0.0;
    bool insufficient_trades = false;
    bool failed = false;
    std::string error;
};

struct CellRow {
    double event_rate = 0.0;
    double gamma = 0.0;
    Bias bias = Bias::None;
    int n_trials = 0;
    int n_failed = 0;
    double mean_efficiency = 0.0;
    double sd_efficiency = 0.0;
    double mean_trades_per_event = 0.0;
    double sd_trades_per_event = 0.0;
    double mean_efficiency_per_rate = 0.0;
};

struct SweepResult {
    std::vector<TrialRow> trials;
    std::vector<CellRow> cells;
    std::vector<TradeTape> tapes;  // parallel to trials when kept
};

struct SweepOptions {
    int jobs = 1;
    bool keep_tapes = false;
};

// Runs every planned trial with `base` as the template config. Output order follows the plan
// regardless of the number of workers.
SweepResult run_sweep(const SweepGrid& grid, const SimConfig& base, const SweepOptions& options = {});
std::vector<CellRow> aggregate_cells(const SweepGrid& grid, const std::vector<TrialRow>& rows);

void write_trial_rows_csv(std::ostream& out, const std::vector<TrialRow>& rows);
void write_cell_rows_csv(std::ostream& out, const std::vector<CellRow>& rows);
std::vector<TrialRow> read_trial_rows_csv(std::istream& in);

}  // namespace levy
