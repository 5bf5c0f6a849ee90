#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>

#include "levy/book.hpp"

namespace levy {

// Lorentzian velocity law h(v) = u0 / (pi (u0^2 + v^2)).
struct VelocityDist {
    double u0 = 1.0;

    double pdf(double v) const;
    double cdf(double v) const;
};

// Flight time law f(tau) = gamma / (1 + tau)^(1 + gamma).
struct FlightTimeDist {
    double gamma = 1.5;

    double pdf(double tau) const;
    double cdf(double tau) const;
    double survival(double tau) const;
};

double sample_velocity(const VelocityDist& dist, double u);
// Inverse CDF of the Cauchy law conditioned on |v| <= max_velocity.
double sample_velocity_truncated(const VelocityDist& dist, double u, double max_velocity);
double sample_flight_time(const FlightTimeDist& dist, double u);

enum class TraderKind { Noise, Strategic };
enum class Phase { Idle, AwaitingMarketFill, AwaitingLimitFill, Done };
enum class ExitReason { None, Filled, FlightExpired, BudgetDefault };

struct TraderState {
    TraderId trader_id = 0;
    TraderKind kind = TraderKind::Strategic;
    int side_sign = 1;
    double velocity = 0.0;
    double flight_time = 0.0;
    double budget = 0.0;
    Phase phase = Phase::Idle;
    Price reference_price;  // first transaction price of the trial
    std::int64_t quantity = 1;
    double entry_time = 0.0;
    double deadline = std::numeric_limits<double>::infinity();
    ExitReason exit = ExitReason::None;
};

// Coupled quote: last + velocity * flight_time, floored at one tick. `use_limit` is the caller's coin.
Order strategic_quote(TraderState& trader, Price last_trade_price, double now, bool use_limit,
                      OrderId id);

// A completed fill of the trader's working order.
struct Fill {
    OrderKind kind = OrderKind::Market;
    Side side = Side::Buy;
    Price price;
};

struct NoiseExit {
    ExitReason reason = ExitReason::FlightExpired;
};
using NoiseAction = std::variant<Order, NoiseExit>;

inline constexpr Price kNoiseOffset = Price::from_ticks(10);

// Idle or after a limit fill: market order at the last price. After a market fill at p:
// limit on the other side at p +/- 0.10. Exits on budget default or at the flight deadline.
NoiseAction noise_step(TraderState& trader, const std::optional<Fill>& fill, Price last_trade_price,
                       double now, OrderId id);

}  // namespace levy
