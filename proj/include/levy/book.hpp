#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace levy {

// Price on a 0.01 lattice, stored as integer ticks.
class Price {
public:
    static constexpr double tick = 0.01;
    static constexpr std::int64_t ticks_per_unit = 100;

    constexpr Price() = default;
    static constexpr Price from_ticks(std::int64_t t) { return Price(t); }
    // Rounds half away from zero.
    static Price from_double(double value);

    constexpr std::int64_t ticks() const { return ticks_; }
    double to_double() const { return static_cast<double>(ticks_) / ticks_per_unit; }

    constexpr auto operator<=>(const Price&) const = default;
    constexpr Price operator+(Price o) const { return Price(ticks_ + o.ticks_); }
    constexpr Price operator-(Price o) const { return Price(ticks_ - o.ticks_); }

private:
    constexpr explicit Price(std::int64_t t) : ticks_(t) {}
    std::int64_t ticks_ = 0;
};

// Exact two-decimal rendering of a price.
std::string format_price(Price p);

enum class Side { Buy, Sell };
enum class OrderKind { Limit, Market };

using OrderId = std::int64_t;
using TraderId = std::int64_t;

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
const char* to_string(Side s);

struct Order {
    OrderId id = 0;
    Side side = Side::Buy;
    OrderKind kind = OrderKind::Limit;
    std::optional<Price> price;  // limit price, or trigger price for a latent market order
    std::int64_t quantity = 1;
    TraderId trader_id = 0;
    double entry_time = 0.0;
    double flight_deadline = 0.0;
};

struct Trade {
    std::int64_t trade_id = 0;
    double time = 0.0;
    Price price;
    std::int64_t quantity = 0;
    TraderId buyer_id = 0;
    TraderId seller_id = 0;
    OrderId buy_order_id = 0;
    OrderId sell_order_id = 0;
    Side aggressor = Side::Buy;

    bool operator==(const Trade&) const = default;
};

using TradeTape = std::vector<Trade>;

struct TimeTrigger {
    double at = 0.0;
};
struct PriceTrigger {
    Price at;
};
using Trigger = std::variant<TimeTrigger, PriceTrigger>;

struct MatchOutcome {
    std::vector<Trade> trades;
    bool rested = false;  // remainder left in the visible book or resting markets
};

class BookError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Visible limit book, per-side resting market orders and latent orders.
class TotalOrderBook {
public:
    explicit TotalOrderBook(std::optional<Price> last_trade_price = std::nullopt,
                            Price activation_tolerance = Price::from_ticks(1));

    MatchOutcome insert_order(Order order, double now);
    std::optional<Order> cancel_order(OrderId id);

    void add_latent(Order order, Trigger trigger);
    // Latent ids whose trigger holds, in entry_time order.
    std::vector<OrderId> ready_latent(double now, std::optional<Price> last_trade_price) const;
    // Activates one latent order: entry_time becomes now, deadline is kept.
    MatchOutcome activate(OrderId latent_id, double now);
    // Activates every ready latent order in entry_time order. Trades are appended to `trades`.
    std::vector<Order> activate_latent(double now, std::optional<Price> last_trade_price,
                                       std::vector<Trade>* trades = nullptr);

    // Cancels every order with flight_deadline <= now, returned in (deadline, id) order.
    std::vector<OrderId> expire_flights(double now);

    std::optional<Price> best_bid() const;
    std::optional<Price> best_offer() const;
    std::optional<Price> last_trade_price() const { return last_trade_price_; }
    Price activation_tolerance() const { return activation_tolerance_; }

    bool contains(OrderId id) const { return where_.count(id) != 0; }
    bool is_latent(OrderId id) const { return latent_.count(id) != 0; }
    const Order* find(OrderId id) const;
    std::int64_t remaining(OrderId id) const;

    std::size_t bid_levels() const { return bids_.size(); }
    std::size_t ask_levels() const { return asks_.size(); }
    std::size_t resting_market_count(Side s) const;
    std::size_t latent_count() const { return latent_.size(); }
    std::size_t order_count() const { return where_.size(); }
    std::int64_t depth(Side s, Price p) const;

    // Visible limit orders on one side in priority order.
    std::vector<Order> visible_orders(Side s) const;
    std::vector<Order> resting_markets(Side s) const;
    std::optional<double> next_time_trigger() const;

private:
    using Level = std::list<Order>;
    enum class Where { Bid, Ask, RestingMarket, Latent };
    struct Location {
        Where where;
        Side side;
        Price price;
        Level::iterator it;
    };
    struct Latent {
        Order order;
        Trigger trigger;
    };

    void rest(Order order);
    void erase_located(OrderId id);
    Trade fill(Order& taker, Order& maker, Price price, std::int64_t qty, double now);
    void take_from_levels(Order& taker, double now, std::vector<Trade>& out,
                          std::optional<Price> limit);
    void take_from_markets(Order& taker, double now, std::vector<Trade>& out, Price price);
    static void insert_fifo(Level& level, Order order, Level::iterator* pos);

    std::map<Price, Level, std::greater<>> bids_;
    std::map<Price, Level> asks_;
    Level resting_buy_markets_;
    Level resting_sell_markets_;
    std::map<OrderId, Latent> latent_;
    std::multimap<Price, OrderId> price_triggers_;
    std::multimap<double, OrderId> time_triggers_;
    std::set<std::pair<double, OrderId>> deadlines_;
    std::unordered_map<OrderId, Location> where_;
    std::unordered_set<OrderId> seen_ids_;
    std::optional<Price> last_trade_price_;
    Price activation_tolerance_;
    std::int64_t next_trade_id_ = 1;
};

}  // namespace levy
