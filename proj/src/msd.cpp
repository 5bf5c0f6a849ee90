#include "levy/msd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/statistics/linear_regression.hpp>

#include "levy/agents.hpp"
#include "levy/rng.hpp"

namespace levy {

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_spaced: bad range");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

MsdEstimate msd_exponent(const WalkLog& log) {
    MsdEstimate est;
    const std::size_t nt = log.times.size();
    const std::size_t nw = log.positions.size();
    est.msd.assign(nt, 0.0);
    if (nw < 2 || nt < 3) return est;
    for (std::size_t i = 0; i < nt; ++i) {
        double mean = 0.0;
        for (const auto& w : log.positions) mean += w.at(i);
        mean /= static_cast<double>(nw);
        double ss = 0.0;
        for (const auto& w : log.positions) ss += (w[i] - mean) * (w[i] - mean);
        est.msd[i] = ss / static_cast<double>(nw - 1);
    }
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < nt; ++i)
        if (log.times[i] > 0.0 && est.msd[i] > 0.0) {
            if (first == 0.0) first = log.times[i];
            last = log.times[i];
        }
    if (first == 0.0 || last <= first) return est;
    const double centre = std::sqrt(first * last);
    est.fit_from = centre / std::sqrt(10.0);
    est.fit_to = centre * std::sqrt(10.0);

    std::vector<double> x, y;
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = log.times[i];
        if (t >= est.fit_from && t <= est.fit_to && est.msd[i] > 0.0) {
            x.push_back(std::log(t));
            y.push_back(std::log(est.msd[i]));
        }
    }
    est.n_points = static_cast<int>(x.size());
    if (x.size() < 3) return est;
    auto [intercept, slope] = boost::math::statistics::simple_ordinary_least_squares(x, y);
    double xm = 0.0;
    for (double v : x) xm += v;
    xm /= static_cast<double>(x.size());
    double sxx = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        const double r = y[i] - (intercept + slope * x[i]);
        ssr += r * r;
    }
    est.alpha = slope;
    est.std_error = std::sqrt(ssr / static_cast<double>(x.size() - 2) / sxx);
    est.flagged = false;
    return est;
}

WalkLog levy_walk_ensemble(int walkers, double gamma, double speed, const std::vector<double>& times,
                           std::uint64_t seed) {
    if (walkers < 1) throw std::invalid_argument("levy_walk_ensemble: walkers must be >= 1");
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("levy_walk_ensemble: times must be sorted");
    const FlightTimeDist fd{gamma};
    WalkLog log;
    log.times = times;
    log.positions.assign(static_cast<std::size_t>(walkers), std::vector<double>(times.size()));
    for (int w = 0; w < walkers; ++w) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(w)}));
        double t0 = 0.0, x0 = 0.0;
        double dir = rng.bernoulli(0.5) ? speed : -speed;
        double t1 = sample_flight_time(fd, rng.uniform());
        auto& row = log.positions[static_cast<std::size_t>(w)];
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            while (t1 < t) {
                x0 += dir * (t1 - t0);
                t0 = t1;
                dir = rng.bernoulli(0.5) ? speed : -speed;
                t1 = t0 + sample_flight_time(fd, rng.uniform());
            }
            row[i] = x0 + dir * (t - t0);
        }
    }
    return log;
}

WalkLog quote_walk_log(const TrialResult& trial, const std::vector<double>& times) {
    WalkLog log;
    log.times = times;
    for (std::size_t i = 0; i < trial.traders.size(); ++i) {
        const TraderState& s = trial.traders[i];
        if (std::isnan(trial.exit_times[i]) && s.phase == Phase::Idle) continue;  // never arrived
        const double end = std::isnan(trial.exit_times[i]) ? trial.end_time : trial.exit_times[i];
        const double span = std::max(0.0, std::min(end, s.deadline) - s.entry_time);
        std::vector<double> row(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) row[k] = s.velocity * std::min(times[k], span);
        log.positions.push_back(std::move(row));
    }
    return log;
}

MsdEstimate msd_of_quotes(const TrialResult& trial, int points) {
    double longest = 0.0;
    for (std::size_t i = 0; i < trial.traders.size(); ++i)
        longest = std::max(longest, std::min(trial.traders[i].flight_time, trial.end_time));
    if (!(longest > 2e-3)) return MsdEstimate{};
    return msd_exponent(quote_walk_log(trial, log_spaced(1e-3, longest, points)));
}

void write_walk_log_csv(std::ostream& out, const WalkLog& log) {
    out << "walker,time,position\n";
    char t[40], x[40];
    for (std::size_t w = 0; w < log.positions.size(); ++w)
        for (std::size_t i = 0; i < log.times.size(); ++i) {
            std::snprintf(t, sizeof t, "%.9g", log.times[i]);
            std::snprintf(x, sizeof x, "%.9g", log.positions[w][i]);
            out << w << ',' << t << ',' << x << '\n';
        }
}

WalkLog read_walk_log_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "walker,time,position")
        throw std::runtime_error("walk log: missing or unexpected header");
    std::map<long long, std::vector<std::pair<double, double>>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw std::runtime_error("walk log: bad row '" + line + "'");
        rows[std::stoll(a)].emplace_back(std::stod(b), std::stod(c));
    }
    WalkLog log;
    if (rows.empty()) return log;
    for (auto& [w, pts] : rows) {
        std::sort(pts.begin(), pts.end());
        std::vector<double> ts, xs;
        for (auto& [t, x] : pts) {
            ts.push_back(t);
            xs.push_back(x);
        }
        if (log.times.empty())
            log.times = ts;
        else if (ts != log.times)
            throw std::runtime_error("walk log: walkers sampled at different times");
        log.positions.push_back(std::move(xs));
    }
    return log;
}

}  // namespace levy
