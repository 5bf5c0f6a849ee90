#include "levy/agents.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levy {

namespace {

void check_unit(double u, const char* what) {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument(std::string(what) + ": u must lie in (0,1)");
}

}  // namespace

double VelocityDist::pdf(double v) const { return u0 / (std::numbers::pi * (u0 * u0 + v * v)); }

double VelocityDist::cdf(double v) const { return 0.5 + std::atan(v / u0) / std::numbers::pi; }

double FlightTimeDist::pdf(double tau) const {
    if (tau < 0.0) return 0.0;
    return gamma * std::pow(1.0 + tau, -1.0 - gamma);
}

double FlightTimeDist::cdf(double tau) const { return 1.0 - survival(tau); }

double FlightTimeDist::survival(double tau) const {
    if (tau <= 0.0) return 1.0;
    return std::pow(1.0 + tau, -gamma);
}

double sample_velocity(const VelocityDist& dist, double u) {
    check_unit(u, "sample_velocity");
    if (!(dist.u0 > 0.0)) throw std::invalid_argument("sample_velocity: u0 must be > 0");
    // evaluate on the upper half only so that v(u) = -v(1-u) holds bit for bit
    if (u > 0.5) return dist.u0 * std::tan(std::numbers::pi * (u - 0.5));
    if (u < 0.5) return -dist.u0 * std::tan(std::numbers::pi * (0.5 - u));
    return 0.0;
}

double sample_velocity_truncated(const VelocityDist& dist, double u, double max_velocity) {
    check_unit(u, "sample_velocity_truncated");
    if (!(dist.u0 > 0.0)) throw std::invalid_argument("sample_velocity: u0 must be > 0");
    if (!(max_velocity > 0.0)) throw std::invalid_argument("max_velocity must be > 0");
    if (std::isinf(max_velocity)) return sample_velocity(dist, u);
    const double edge = std::atan(max_velocity / dist.u0);
    if (u > 0.5) return dist.u0 * std::tan(2.0 * edge * (u - 0.5));
    if (u < 0.5) return -dist.u0 * std::tan(2.0 * edge * (0.5 - u));
    return 0.0;
}

double sample_flight_time(const FlightTimeDist& dist, double u) {
    check_unit(u, "sample_flight_time");
    if (!(dist.gamma > 0.0)) throw std::invalid_argument("sample_flight_time: gamma must be > 0");
    return std::pow(1.0 - u, -1.0 / dist.gamma) - 1.0;
}

Order strategic_quote(TraderState& trader, Price last_trade_price, double now, bool use_limit,
                      OrderId id) {
    if (trader.kind != TraderKind::Strategic) throw std::logic_error("strategic_quote: noise trader");
    if (trader.phase != Phase::Idle) throw std::logic_error("strategic_quote: trader not idle");
    Price quote = last_trade_price + Price::from_double(trader.velocity * trader.flight_time);
    if (quote.ticks() < 1) quote = Price::from_ticks(1);

    Order o;
    o.id = id;
    o.side = trader.velocity > 0.0 ? Side::Buy : Side::Sell;
    o.kind = use_limit ? OrderKind::Limit : OrderKind::Market;
    o.price = quote;
    o.quantity = trader.quantity;
    o.trader_id = trader.trader_id;
    o.entry_time = now;
    o.flight_deadline = now + trader.flight_time;
    trader.entry_time = now;
    trader.deadline = o.flight_deadline;
    trader.phase = use_limit ? Phase::AwaitingLimitFill : Phase::AwaitingMarketFill;
    return o;
}

NoiseAction noise_step(TraderState& trader, const std::optional<Fill>& fill, Price last_trade_price,
                       double now, OrderId id) {
    if (trader.kind != TraderKind::Noise) throw std::logic_error("noise_step: strategic trader");
    if (trader.phase == Phase::Done) throw std::logic_error("noise_step: trader already done");
    auto leave = [&](ExitReason why) -> NoiseAction {
        trader.phase = Phase::Done;
        trader.exit = why;
        return NoiseExit{why};
    };
    if (now >= trader.deadline) return leave(ExitReason::FlightExpired);

    Order o;
    o.id = id;
    o.quantity = trader.quantity;
    o.trader_id = trader.trader_id;
    o.entry_time = now;
    o.flight_deadline = trader.deadline;

    const bool after_market_fill = fill && fill->kind == OrderKind::Market;
    if (trader.phase != Phase::Idle && !fill)
        throw std::logic_error("noise_step: awaiting a fill but none supplied");

    if (after_market_fill) {
        o.kind = OrderKind::Limit;
        o.side = opposite(fill->side);
        Price p = o.side == Side::Sell ? fill->price + kNoiseOffset : fill->price - kNoiseOffset;
        if (p.ticks() < 1) p = Price::from_ticks(1);
        o.price = p;
        if (o.side == Side::Buy && trader.budget < p.to_double() * static_cast<double>(o.quantity))
            return leave(ExitReason::BudgetDefault);
        trader.phase = Phase::AwaitingLimitFill;
        return o;
    }

    // Idle, or the limit leg filled: market order at the last transaction price.
    o.kind = OrderKind::Market;
    o.side = trader.side_sign > 0 ? Side::Buy : Side::Sell;
    o.price = last_trade_price;
    if (o.side == Side::Buy &&
        trader.budget < last_trade_price.to_double() * static_cast<double>(o.quantity))
        return leave(ExitReason::BudgetDefault);
    trader.phase = Phase::AwaitingMarketFill;
    return o;
}

}  // namespace levy
