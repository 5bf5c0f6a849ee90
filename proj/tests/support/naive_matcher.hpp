#pragma once

// Brute-force order book: flat lists scanned in full on every match. Slow on purpose.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <variant>
#include <vector>

#include "levy/book.hpp"
#include "levy/rng.hpp"

namespace oracle {

using namespace levy;

struct BookEvent {
    enum Kind { Insert, Cancel, AddLatent, Activate, Expire };
    Kind kind = Insert;
    double now = 0.0;
    Order order;
    Trigger trigger = TimeTrigger{0.0};
    OrderId id = 0;
};

class NaiveBook {
public:
    NaiveBook(std::optional<Price> last, Price tol) : last_(last), tol_(tol) {}

    std::vector<Trade> insert(Order o, double now) {
        std::vector<Trade> out;
        if (o.kind == OrderKind::Limit) {
            take_markets(o, now, out, *o.price);
            take_limits(o, now, out, o.price);
        } else {
            o.price.reset();
            take_limits(o, now, out, std::nullopt);
            if (o.quantity > 0 && last_) take_markets(o, now, out, *last_);
        }
        if (o.quantity > 0) resting_.push_back(o);
        return out;
    }

    bool cancel(OrderId id) {
        for (auto* list : {&resting_}) {
            auto it = std::find_if(list->begin(), list->end(), [&](const Order& o) { return o.id == id; });
            if (it != list->end()) {
                list->erase(it);
                return true;
            }
        }
        auto it = std::find_if(latent_.begin(), latent_.end(), [&](const auto& l) { return l.first.id == id; });
        if (it != latent_.end()) {
            latent_.erase(it);
            return true;
        }
        return false;
    }

    void add_latent(const Order& o, Trigger t) { latent_.emplace_back(o, t); }

    std::vector<Trade> activate(double now) {
        std::vector<std::pair<Order, Trigger>> ready;
        for (const auto& l : latent_) {
            bool fire = false;
            if (auto* tt = std::get_if<TimeTrigger>(&l.second)) fire = tt->at <= now;
            else if (last_) {
                const Price p = std::get<PriceTrigger>(l.second).at;
                const Price gap = p > *last_ ? p - *last_ : *last_ - p;
                fire = gap <= tol_;
            }
            if (fire) ready.push_back(l);
        }
        std::sort(ready.begin(), ready.end(), [](const auto& a, const auto& b) {
            return std::tie(a.first.entry_time, a.first.id) < std::tie(b.first.entry_time, b.first.id);
        });
        std::vector<Trade> out;
        for (auto& [o, t] : ready) {
            cancel(o.id);
            Order moved = o;
            moved.entry_time = now;
            auto trades = insert(moved, now);
            out.insert(out.end(), trades.begin(), trades.end());
        }
        return out;
    }

    std::vector<OrderId> expire(double now) {
        std::vector<std::pair<double, OrderId>> hit;
        for (const auto& o : resting_)
            if (o.flight_deadline <= now) hit.emplace_back(o.flight_deadline, o.id);
        for (const auto& l : latent_)
            if (l.first.flight_deadline <= now) hit.emplace_back(l.first.flight_deadline, l.first.id);
        std::sort(hit.begin(), hit.end());
        std::vector<OrderId> ids;
        for (auto& h : hit) {
            cancel(h.second);
            ids.push_back(h.second);
        }
        return ids;
    }

    std::optional<Price> last() const { return last_; }
    const std::vector<Order>& resting() const { return resting_; }
    std::size_t latent_count() const { return latent_.size(); }

private:
    static bool before(const Order& a, const Order& b) {
        return std::tie(a.entry_time, a.id) < std::tie(b.entry_time, b.id);
    }

    Trade fill(Order& taker, Order& maker, Price price, double now) {
        const std::int64_t q = std::min(taker.quantity, maker.quantity);
        Trade t;
        t.trade_id = next_trade_++;
        t.time = now;
        t.price = price;
        t.quantity = q;
        t.aggressor = taker.side;
        const Order& b = taker.side == Side::Buy ? taker : maker;
        const Order& s = taker.side == Side::Buy ? maker : taker;
        t.buyer_id = b.trader_id;
        t.seller_id = s.trader_id;
        t.buy_order_id = b.id;
        t.sell_order_id = s.id;
        taker.quantity -= q;
        maker.quantity -= q;
        last_ = price;
        return t;
    }

    void take_markets(Order& taker, double now, std::vector<Trade>& out, Price price) {
        while (taker.quantity > 0) {
            Order* best = nullptr;
            for (auto& o : resting_)
                if (o.kind == OrderKind::Market && o.side != taker.side && (!best || before(o, *best))) best = &o;
            if (!best) return;
            out.push_back(fill(taker, *best, price, now));
            sweep_empty();
        }
    }

    void take_limits(Order& taker, double now, std::vector<Trade>& out, std::optional<Price> limit) {
        while (taker.quantity > 0) {
            Order* best = nullptr;
            for (auto& o : resting_) {
                if (o.kind != OrderKind::Limit || o.side == taker.side) continue;
                if (limit && (taker.side == Side::Buy ? *o.price > *limit : *o.price < *limit)) continue;
                if (!best) {
                    best = &o;
                    continue;
                }
                const bool better_price = taker.side == Side::Buy ? *o.price < *best->price : *o.price > *best->price;
                if (better_price || (*o.price == *best->price && before(o, *best))) best = &o;
            }
            if (!best) return;
            out.push_back(fill(taker, *best, *best->price, now));
            sweep_empty();
        }
    }

    void sweep_empty() {
        resting_.erase(std::remove_if(resting_.begin(), resting_.end(), [](const Order& o) { return o.quantity == 0; }),
                       resting_.end());
    }

    std::optional<Price> last_;
    Price tol_;
    std::vector<Order> resting_;
    std::vector<std::pair<Order, Trigger>> latent_;
    std::int64_t next_trade_ = 1;
};

// Random event script: at most `max_orders` orders, prices clustered around 100 so that
// crossing, partial fills, resting markets and latent activation all occur.
inline std::vector<BookEvent> random_script(std::uint64_t seed, int max_orders = 50) {
    Rng rng(seed);
    std::vector<BookEvent> ev;
    double now = 0.0;
    OrderId next = 1;
    const int n_orders = static_cast<int>(rng.uniform_int(1, max_orders));
    int made = 0;
    while (made < n_orders) {
        now += rng.exponential(4.0);
        const double u = rng.uniform();
        BookEvent e;
        e.now = now;
        if (u < 0.77) {
            Order o;
            o.id = next++;
            o.side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
            o.kind = rng.bernoulli(0.7) ? OrderKind::Limit : OrderKind::Market;
            o.quantity = rng.uniform_int(1, 4);
            o.trader_id = rng.uniform_int(0, 9);
            o.entry_time = now;
            o.flight_deadline = now + 0.1 + 2.0 * rng.uniform();
            const Price px = Price::from_ticks(10000 + rng.uniform_int(-6, 6));
            if (o.kind == OrderKind::Limit) o.price = px;
            ++made;
            if (u < 0.65) {
                e.kind = BookEvent::Insert;
            } else {
                e.kind = BookEvent::AddLatent;
                if (rng.bernoulli(0.5)) {
                    e.trigger = TimeTrigger{now + rng.uniform()};
                } else {
                    e.trigger = PriceTrigger{px};
                    if (o.kind == OrderKind::Market) o.price = px;
                }
            }
            e.order = o;
        } else if (u < 0.85) {
            e.kind = BookEvent::Cancel;
            e.id = rng.uniform_int(1, next);  // may be unknown
        } else if (u < 0.93) {
            e.kind = BookEvent::Activate;
        } else {
            e.kind = BookEvent::Expire;
        }
        ev.push_back(e);
    }
    ev.push_back(BookEvent{BookEvent::Activate, now + 1.0});
    ev.push_back(BookEvent{BookEvent::Expire, now + 1.5});
    return ev;
}

struct ScriptOutcome {
    std::vector<Trade> trades;
    std::vector<OrderId> expired;
    std::vector<int> cancelled;  // 1 found, 0 not found, per cancel event
};

inline ScriptOutcome run_naive(const std::vector<BookEvent>& ev, std::optional<Price> last, Price tol) {
    NaiveBook b(last, tol);
    ScriptOutcome r;
    for (const auto& e : ev) {
        std::vector<Trade> t;
        switch (e.kind) {
            case BookEvent::Insert: t = b.insert(e.order, e.now); break;
            case BookEvent::Cancel: r.cancelled.push_back(b.cancel(e.id) ? 1 : 0); break;
            case BookEvent::AddLatent: b.add_latent(e.order, e.trigger); break;
            case BookEvent::Activate: t = b.activate(e.now); break;
            case BookEvent::Expire: {
                auto ids = b.expire(e.now);
                r.expired.insert(r.expired.end(), ids.begin(), ids.end());
                break;
            }
        }
        r.trades.insert(r.trades.end(), t.begin(), t.end());
    }
    return r;
}

inline ScriptOutcome run_book(const std::vector<BookEvent>& ev, std::optional<Price> last, Price tol) {
    TotalOrderBook b(last, tol);
    ScriptOutcome r;
    for (const auto& e : ev) {
        switch (e.kind) {
            case BookEvent::Insert: {
                auto out = b.insert_order(e.order, e.now);
                r.trades.insert(r.trades.end(), out.trades.begin(), out.trades.end());
                break;
            }
            case BookEvent::Cancel: r.cancelled.push_back(b.cancel_order(e.id) ? 1 : 0); break;
            case BookEvent::AddLatent: b.add_latent(e.order, e.trigger); break;
            case BookEvent::Activate: b.activate_latent(e.now, b.last_trade_price(), &r.trades); break;
            case BookEvent::Expire: {
                auto ids = b.expire_flights(e.now);
                r.expired.insert(r.expired.end(), ids.begin(), ids.end());
                break;
            }
        }
    }
    return r;
}

inline bool same_trade(const Trade& a, const Trade& b) {
    return a.trade_id == b.trade_id && a.time == b.time && a.price == b.price && a.quantity == b.quantity &&
           a.buyer_id == b.buyer_id && a.seller_id == b.seller_id && a.buy_order_id == b.buy_order_id &&
           a.sell_order_id == b.sell_order_id && a.aggressor == b.aggressor;
}

inline bool same_outcome(const ScriptOutcome& a, const ScriptOutcome& b) {
    if (a.trades.size() != b.trades.size() || a.expired != b.expired || a.cancelled != b.cancelled) return false;
    for (std::size_t i = 0; i < a.trades.size(); ++i)
        if (!same_trade(a.trades[i], b.trades[i])) return false;
    return true;
}

}  // namespace oracle
