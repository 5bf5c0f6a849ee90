#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "levy/simulation.hpp"

namespace levy {

// Displacements of an ensemble sampled at common times: positions[walker][time index].
struct WalkLog {
    std::vector<double> times;
    std::vector<std::vector<double>> positions;
};

struct MsdEstimate {
    double alpha = 0.0;
    double std_error = 0.0;
    int n_points = 0;
    double fit_from = 0.0;
    double fit_to = 0.0;
    bool flagged = true;
    std::vector<double> msd;  // per time in the log
};

std::vector<double> log_spaced(double lo, double hi, int count);

// Ensemble variance of displacement vs time, slope of the log-log fit over the central decade.
MsdEstimate msd_exponent(const WalkLog& log);

// Walkers at constant speed with a fresh random direction per flight, flights drawn from the
// power-tail law with exponent gamma.
WalkLog levy_walk_ensemble(int walkers, double gamma, double speed, const std::vector<double>& times,
                           std::uint64_t seed);

// Quote displacement of every searcher that entered: velocity times time in flight, frozen once
// its flight ends (fill, cancel or exit). Time is measured from each searcher's entry.
WalkLog quote_walk_log(const TrialResult& trial, const std::vector<double>& times);
MsdEstimate msd_of_quotes(const TrialResult& trial, int points = 40);

// CSV `walker,time,position`.
void write_walk_log_csv(std::ostream& out, const WalkLog& log);
WalkLog read_walk_log_csv(std::istream& in);

}  // namespace levy
