#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/agents.hpp"
#include "levy/book.hpp"

namespace levy {

enum class Bias { None, Quantity };

const char* to_string(Bias b);
Bias parse_bias(const std::string& text);

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::invalid_argument(key.empty() ? message : key + ": " + message), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct SimConfig {
    std::int64_t n_traders = 1000;
    double event_rate = 10.0;
    double gamma = 1.5;
    double u0 = 100.0;
    double max_velocity = 0.0;  // 0: no truncation
    Bias bias = Bias::None;
    std::optional<double> noise_fraction;  // unset: uniform draw per trial
    double initial_price = 100.0;
    double limit_probability = 0.5;
    double budget_multiple = 10.0;
    double activation_tolerance = 0.01;
    std::int64_t max_events = 1'000'000;
    double max_time = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    bool record_events = true;

    void validate() const;
};

// Keys accepted in key=value config files, in canonical order.
const std::vector<std::string>& sim_config_keys();
// Applies one key=value setting; unknown keys and bad values throw ConfigError.
void apply_setting(SimConfig& config, const std::string& key, const std::string& value);
std::map<std::string, std::string> config_snapshot(const SimConfig& config);

enum class EventKind { Arrival, Continuation, Activation, Idle };

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::Idle;
    TraderId trader_id = -1;
    OrderId order_id = -1;
    std::int32_t trades = 0;
};

struct EfficiencyReport {
    std::int64_t n_trades = 0;
    std::int64_t n_events = 0;
    std::vector<double> trade_durations;
    double efficiency = 0.0;
    double trades_per_event = 0.0;
    double efficiency_per_rate = 0.0;
    double noise_fraction_realized = 0.0;
    bool insufficient_trades = true;
};

inline constexpr double kMinDuration = 1e-6;

// Mean of 1 / max(duration, 1 us) over successive trade timestamps.
EfficiencyReport efficiency(const TradeTape& tape, std::int64_t n_events = 0, double event_rate = 0.0);

struct TrialResult {
    SimConfig config;
    double noise_fraction = 0.0;  // the fraction used to assign trader kinds
    TradeTape tape;
    EfficiencyReport report;
    std::vector<EventRecord> events;
    std::vector<TraderState> traders;
    std::vector<double> exit_times;  // per trader; NaN if never arrived
    std::int64_t n_events = 0;
    double end_time = 0.0;
};

TrialResult run_trial(const SimConfig& config);

}  // namespace levy
