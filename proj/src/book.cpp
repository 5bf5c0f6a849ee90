#include "levy/book.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace levy {

Price Price::from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("price must be finite");
    return Price(std::llround(value * static_cast<double>(ticks_per_unit)));
}

std::string format_price(Price p) {
    const std::int64_t t = p.ticks();
    const std::int64_t mag = t < 0 ? -t : t;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", t < 0 ? "-" : "",
                  static_cast<long long>(mag / Price::ticks_per_unit),
                  static_cast<long long>(mag % Price::ticks_per_unit));
    return buf;
}

const char* to_string(Side s) { return s == Side::Buy ? "buy" : "sell"; }

TotalOrderBook::TotalOrderBook(std::optional<Price> last_trade_price, Price activation_tolerance)
    : last_trade_price_(last_trade_price), activation_tolerance_(activation_tolerance) {
    if (activation_tolerance.ticks() < 0) throw BookError("activation tolerance must be >= 0");
}

void TotalOrderBook::insert_fifo(Level& level, Order order, Level::iterator* pos) {
    // FIFO key is (entry_time, id); orders usually arrive in key order, so scan from the back.
    auto it = level.end();
    while (it != level.begin()) {
        auto prev = std::prev(it);
        if (prev->entry_time < order.entry_time ||
            (prev->entry_time == order.entry_time && prev->id < order.id))
            break;
        it = prev;
    }
    *pos = level.insert(it, std::move(order));
}

void TotalOrderBook::rest(Order order) {
    const OrderId id = order.id;
    const double deadline = order.flight_deadline;
    Location loc{};
    loc.side = order.side;
    if (order.kind == OrderKind::Market) {
        loc.where = Where::RestingMarket;
        Level& q = order.side == Side::Buy ? resting_buy_markets_ : resting_sell_markets_;
        insert_fifo(q, std::move(order), &loc.it);
    } else {
        loc.price = *order.price;
        if (order.side == Side::Buy) {
            loc.where = Where::Bid;
            insert_fifo(bids_[loc.price], std::move(order), &loc.it);
        } else {
            loc.where = Where::Ask;
            insert_fifo(asks_[loc.price], std::move(order), &loc.it);
        }
    }
    where_[id] = loc;
    deadlines_.insert({deadline, id});
}

Trade TotalOrderBook::fill(Order& taker, Order& maker, Price price, std::int64_t qty, double now) {
    Trade t;
    t.trade_id = next_trade_id_++;
    t.time = now;
    t.price = price;
    t.quantity = qty;
    t.aggressor = taker.side;
    const Order& buy = taker.side == Side::Buy ? taker : maker;
    const Order& sell = taker.side == Side::Buy ? maker : taker;
    t.buyer_id = buy.trader_id;
    t.seller_id = sell.trader_id;
    t.buy_order_id = buy.id;
    t.sell_order_id = sell.id;
    taker.quantity -= qty;
    maker.quantity -= qty;
    last_trade_price_ = price;
    return t;
}

void TotalOrderBook::take_from_markets(Order& taker, double now, std::vector<Trade>& out,
                                       Price price) {
    Level& q = taker.side == Side::Buy ? resting_sell_markets_ : resting_buy_markets_;
    while (taker.quantity > 0 && !q.empty()) {
        Order& maker = q.front();
        const std::int64_t qty = std::min(taker.quantity, maker.quantity);
        out.push_back(fill(taker, maker, price, qty, now));
        if (maker.quantity == 0) erase_located(maker.id);
    }
}

void TotalOrderBook::take_from_levels(Order& taker, double now, std::vector<Trade>& out,
                                      std::optional<Price> limit) {
    auto walk = [&](auto& levels, auto crosses) {
        while (taker.quantity > 0 && !levels.empty()) {
            auto lvl = levels.begin();
            if (limit && !crosses(lvl->first, *limit)) break;
            Order& maker = lvl->second.front();
            const std::int64_t qty = std::min(taker.quantity, maker.quantity);
            out.push_back(fill(taker, maker, lvl->first, qty, now));
            if (maker.quantity == 0) erase_located(maker.id);
        }
    };
    if (taker.side == Side::Buy)
        walk(asks_, [](Price ask, Price lim) { return ask <= lim; });
    else
        walk(bids_, [](Price bid, Price lim) { return bid >= lim; });
}

MatchOutcome TotalOrderBook::insert_order(Order order, double now) {
    if (order.quantity < 1) throw BookError("order quantity must be >= 1");
    if (seen_ids_.count(order.id)) throw BookError("duplicate order id " + std::to_string(order.id));
    if (order.kind == OrderKind::Limit) {
        if (!order.price) throw BookError("limit order without price");
        if (order.price->ticks() < 1) throw BookError("limit price must be at least one tick");
    }
    seen_ids_.insert(order.id);

    MatchOutcome out;
    if (order.kind == OrderKind::Limit) {
        // resting market orders take any price: they fill first, at the incoming limit price
        take_from_markets(order, now, out.trades, *order.price);
        take_from_levels(order, now, out.trades, order.price);
    } else {
        order.price.reset();
        take_from_levels(order, now, out.trades, std::nullopt);
        if (order.quantity > 0 && last_trade_price_)
            take_from_markets(order, now, out.trades, *last_trade_price_);
    }
    if (order.quantity > 0) {
        rest(std::move(order));
        out.rested = true;
    }
    return out;
}

void TotalOrderBook::erase_located(OrderId id) {
    auto found = where_.find(id);
    if (found == where_.end()) return;
    const Location loc = found->second;
    where_.erase(found);
    switch (loc.where) {
        case Where::Bid: {
            auto lvl = bids_.find(loc.price);
            deadlines_.erase({loc.it->flight_deadline, id});
            lvl->second.erase(loc.it);
            if (lvl->second.empty()) bids_.erase(lvl);
            break;
        }
        case Where::Ask: {
            auto lvl = asks_.find(loc.price);
            deadlines_.erase({loc.it->flight_deadline, id});
            lvl->second.erase(loc.it);
            if (lvl->second.empty()) asks_.erase(lvl);
            break;
        }
        case Where::RestingMarket: {
            Level& q = loc.side == Side::Buy ? resting_buy_markets_ : resting_sell_markets_;
            deadlines_.erase({loc.it->flight_deadline, id});
            q.erase(loc.it);
            break;
        }
        case Where::Latent: {
            auto l = latent_.find(id);
            deadlines_.erase({l->second.order.flight_deadline, id});
            auto drop = [id](auto& index, auto key) {
                auto [lo, hi] = index.equal_range(key);
                for (auto it = lo; it != hi; ++it)
                    if (it->second == id) {
                        index.erase(it);
                        return;
                    }
            };
            if (auto* pt = std::get_if<PriceTrigger>(&l->second.trigger))
                drop(price_triggers_, pt->at);
            else
                drop(time_triggers_, std::get<TimeTrigger>(l->second.trigger).at);
            latent_.erase(l);
            break;
        }
    }
}

std::optional<Order> TotalOrderBook::cancel_order(OrderId id) {
    const Order* o = find(id);
    if (!o) return std::nullopt;
    Order copy = *o;
    erase_located(id);
    return copy;
}

const Order* TotalOrderBook::find(OrderId id) const {
    auto found = where_.find(id);
    if (found == where_.end()) return nullptr;
    if (found->second.where == Where::Latent) return &latent_.at(id).order;
    return &*found->second.it;
}

std::int64_t TotalOrderBook::remaining(OrderId id) const {
    const Order* o = find(id);
    return o ? o->quantity : 0;
}

void TotalOrderBook::add_latent(Order order, Trigger trigger) {
    if (order.quantity < 1) throw BookError("order quantity must be >= 1");
    if (seen_ids_.count(order.id)) throw BookError("duplicate order id " + std::to_string(order.id));
    if (order.kind == OrderKind::Limit && !order.price)
        throw BookError("limit order without price");
    seen_ids_.insert(order.id);
    const OrderId id = order.id;
    if (auto* pt = std::get_if<PriceTrigger>(&trigger))
        price_triggers_.insert({pt->at, id});
    else
        time_triggers_.insert({std::get<TimeTrigger>(trigger).at, id});
    deadlines_.insert({order.flight_deadline, id});
    Location loc{};
    loc.where = Where::Latent;
    loc.side = order.side;
    where_[id] = loc;
    latent_.emplace(id, Latent{std::move(order), trigger});
}

std::vector<OrderId> TotalOrderBook::ready_latent(double now,
                                                  std::optional<Price> last_trade_price) const {
    std::vector<OrderId> ids;
    for (auto it = time_triggers_.begin(); it != time_triggers_.end() && it->first <= now; ++it)
        ids.push_back(it->second);
    if (last_trade_price) {
        auto lo = price_triggers_.lower_bound(*last_trade_price - activation_tolerance_);
        auto hi = price_triggers_.upper_bound(*last_trade_price + activation_tolerance_);
        for (auto it = lo; it != hi; ++it) ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end(), [this](OrderId a, OrderId b) {
        const double ta = latent_.at(a).order.entry_time, tb = latent_.at(b).order.entry_time;
        return ta != tb ? ta < tb : a < b;
    });
    return ids;
}

MatchOutcome TotalOrderBook::activate(OrderId latent_id, double now) {
    auto l = latent_.find(latent_id);
    if (l == latent_.end()) throw BookError("no latent order " + std::to_string(latent_id));
    Order order = l->second.order;
    erase_located(latent_id);
    seen_ids_.erase(latent_id);
    order.entry_time = now;
    return insert_order(std::move(order), now);
}

std::vector<Order> TotalOrderBook::activate_latent(double now, std::optional<Price> last_trade_price,
                                                   std::vector<Trade>* trades) {
    std::vector<Order> moved;
    for (OrderId id : ready_latent(now, last_trade_price)) {
        moved.push_back(latent_.at(id).order);
        moved.back().entry_time = now;
        auto out = activate(id, now);
        if (trades) trades->insert(trades->end(), out.trades.begin(), out.trades.end());
    }
    return moved;
}

std::vector<OrderId> TotalOrderBook::expire_flights(double now) {
    std::vector<OrderId> ids;
    while (!deadlines_.empty() && deadlines_.begin()->first <= now) {
        const OrderId id = deadlines_.begin()->second;
        ids.push_back(id);
        erase_located(id);
    }
    return ids;
}

std::optional<Price> TotalOrderBook::best_bid() const {
    if (bids_.empty()) return std::nullopt;
    return bids_.begin()->first;
}

std::optional<Price> TotalOrderBook::best_offer() const {
    if (asks_.empty()) return std::nullopt;
    return asks_.begin()->first;
}

std::size_t TotalOrderBook::resting_market_count(Side s) const {
    return s == Side::Buy ? resting_buy_markets_.size() : resting_sell_markets_.size();
}

std::int64_t TotalOrderBook::depth(Side s, Price p) const {
    std::int64_t total = 0;
    auto sum = [&](const auto& levels) {
        auto it = levels.find(p);
        if (it != levels.end())
            for (const Order& o : it->second) total += o.quantity;
    };
    if (s == Side::Buy)
        sum(bids_);
    else
        sum(asks_);
    return total;
}

std::vector<Order> TotalOrderBook::visible_orders(Side s) const {
    std::vector<Order> out;
    auto collect = [&](const auto& levels) {
        for (const auto& [price, level] : levels) out.insert(out.end(), level.begin(), level.end());
    };
    if (s == Side::Buy)
        collect(bids_);
    else
        collect(asks_);
    return out;
}

std::vector<Order> TotalOrderBook::resting_markets(Side s) const {
    const Level& q = s == Side::Buy ? resting_buy_markets_ : resting_sell_markets_;
    return {q.begin(), q.end()};
}

std::optional<double> TotalOrderBook::next_time_trigger() const {
    if (time_triggers_.empty()) return std::nullopt;
    return time_triggers_.begin()->first;
}

}  // namespace levy
