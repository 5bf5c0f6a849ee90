#include "levy/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "levy/rng.hpp"

namespace levy {

const char* to_string(Bias b) { return b == Bias::None ? "none" : "quantity"; }

Bias parse_bias(const std::string& text) {
    if (text == "none" || text == "no-bias" || text == "nobias") return Bias::None;
    if (text == "quantity" || text == "bias") return Bias::Quantity;
    throw ConfigError("bias", "expected 'none' or 'quantity', got '" + text + "'");
}

void SimConfig::validate() const {
    if (n_traders < 1) throw ConfigError("n_traders", "must be >= 1");
    if (!(event_rate > 0.0) || !std::isfinite(event_rate)) throw ConfigError("event_rate", "must be > 0");
    if (!(gamma > 0.0)) throw ConfigError("gamma", "must be > 0");
    if (!(u0 > 0.0)) throw ConfigError("u0", "must be > 0");
    if (max_velocity < 0.0) throw ConfigError("max_velocity", "must be >= 0");
    if (noise_fraction && !(*noise_fraction >= 0.0 && *noise_fraction <= 1.0))
        throw ConfigError("noise_fraction", "must lie in [0,1]");
    if (!(initial_price >= Price::tick)) throw ConfigError("initial_price", "must be at least one tick");
    if (!(limit_probability >= 0.0 && limit_probability <= 1.0))
        throw ConfigError("limit_probability", "must lie in [0,1]");
    if (!(budget_multiple >= 0.0)) throw ConfigError("budget_multiple", "must be >= 0");
    if (!(activation_tolerance >= 0.0)) throw ConfigError("activation_tolerance", "must be >= 0");
    if (max_events < 1) throw ConfigError("max_events", "must be >= 1");
    if (!(max_time > 0.0)) throw ConfigError("max_time", "must be > 0");
}

const std::vector<std::string>& sim_config_keys() {
    static const std::vector<std::string> keys{
        "n_traders",        "event_rate",      "gamma",
        "u0",               "max_velocity",    "bias",
        "noise_fraction",   "initial_price",   "limit_probability",
        "budget_multiple",  "activation_tolerance", "max_events",
        "max_time",         "seed",            "record_events"};
    return keys;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    std::int64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        // accept integral values written in floating notation, e.g. 1e6
        double d = parse_double(key, v);
        if (d != std::floor(d) || std::abs(d) > 9e18)
            throw ConfigError(key, "expected an integer, got '" + v + "'");
        return static_cast<std::int64_t>(d);
    }
    return x;
}

std::uint64_t parse_seed(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return x;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void apply_setting(SimConfig& c, const std::string& key, const std::string& value) {
    if (key == "n_traders") c.n_traders = parse_int(key, value);
    else if (key == "event_rate") c.event_rate = parse_double(key, value);
    else if (key == "gamma") c.gamma = parse_double(key, value);
    else if (key == "u0") c.u0 = parse_double(key, value);
    else if (key == "max_velocity") c.max_velocity = parse_double(key, value);
    else if (key == "bias") c.bias = parse_bias(value);
    else if (key == "noise_fraction") {
        if (value == "random-uniform" || value == "random")
            c.noise_fraction.reset();
        else
            c.noise_fraction = parse_double(key, value);
    } else if (key == "initial_price") c.initial_price = parse_double(key, value);
    else if (key == "limit_probability") c.limit_probability = parse_double(key, value);
    else if (key == "budget_multiple") c.budget_multiple = parse_double(key, value);
    else if (key == "activation_tolerance") c.activation_tolerance = parse_double(key, value);
    else if (key == "max_events") c.max_events = parse_int(key, value);
    else if (key == "max_time") c.max_time = parse_double(key, value);
    else if (key == "seed") c.seed = parse_seed(key, value);
    else if (key == "record_events") {
        if (value == "true" || value == "1") c.record_events = true;
        else if (value == "false" || value == "0") c.record_events = false;
        else throw ConfigError(key, "expected true/false, got '" + value + "'");
    } else
        throw ConfigError(key, "unknown config key");
}

std::map<std::string, std::string> config_snapshot(const SimConfig& c) {
    return {
        {"n_traders", std::to_string(c.n_traders)},
        {"event_rate", fmt(c.event_rate)},
        {"gamma", fmt(c.gamma)},
        {"u0", fmt(c.u0)},
        {"max_velocity", fmt(c.max_velocity)},
        {"bias", to_string(c.bias)},
        {"noise_fraction", c.noise_fraction ? fmt(*c.noise_fraction) : "random-uniform"},
        {"initial_price", fmt(c.initial_price)},
        {"limit_probability", fmt(c.limit_probability)},
        {"budget_multiple", fmt(c.budget_multiple)},
        {"activation_tolerance", fmt(c.activation_tolerance)},
        {"max_events", std::to_string(c.max_events)},
        {"max_time", fmt(c.max_time)},
        {"seed", std::to_string(c.seed)},
        {"record_events", c.record_events ? "true" : "false"},
    };
}

EfficiencyReport efficiency(const TradeTape& tape, std::int64_t n_events, double event_rate) {
    EfficiencyReport rep;
    rep.n_trades = static_cast<std::int64_t>(tape.size());
    rep.n_events = n_events;
    for (std::size_t i = 1; i < tape.size(); ++i) {
        const double d = tape[i].time - tape[i - 1].time;
        if (d < 0.0) throw std::invalid_argument("efficiency: tape timestamps decrease");
        rep.trade_durations.push_back(d);
    }
    rep.insufficient_trades = tape.size() < 2;
    if (!rep.insufficient_trades) {
        double sum = 0.0;
        for (double d : rep.trade_durations) sum += 1.0 / std::max(d, kMinDuration);
        rep.efficiency = sum / static_cast<double>(rep.trade_durations.size());
    }
    if (n_events > 0) rep.trades_per_event = static_cast<double>(rep.n_trades) / n_events;
    if (event_rate > 0.0) rep.efficiency_per_rate = rep.efficiency / event_rate;
    return rep;
}

namespace {

struct OrderInfo {
    TraderId owner;
    OrderKind kind;
    Side side;
};

class Trial {
public:
    explicit Trial(const SimConfig& c)
        : cfg_(c),
          setup_(derive_seed(c.seed, {1})),
          dyn_(derive_seed(c.seed, {2})),
          book_(Price::from_double(c.initial_price), Price::from_double(c.activation_tolerance)) {}

    TrialResult run();

private:
    void populate();
    void finish(TraderId id, ExitReason why);
    void push_pending(TraderId id);
    void drop_pending(TraderId id);
    void absorb(const MatchOutcome& out, std::int32_t* trades);
    OrderId place(TraderId id, const Order& o, std::int32_t* trades);
    void arrive(TraderId id, std::int32_t* trades, OrderId* oid);
    void continue_noise(TraderId id, std::int32_t* trades, OrderId* oid);
    Price last() const { return *book_.last_trade_price(); }

    const SimConfig& cfg_;
    Rng setup_;
    Rng dyn_;
    TotalOrderBook book_;
    TrialResult res_;
    std::vector<TraderState>& traders() { return res_.traders; }

    std::vector<TraderId> not_arrived_;
    std::vector<TraderId> pending_;
    std::vector<std::int64_t> pending_pos_;
    std::vector<std::optional<Fill>> pending_fill_;
    std::vector<OrderId> working_;
    std::unordered_map<OrderId, OrderInfo> orders_;
    std::priority_queue<std::pair<double, TraderId>, std::vector<std::pair<double, TraderId>>,
                        std::greater<>>
        deadlines_;
    std::int64_t done_ = 0;
    OrderId next_id_ = 1;
    double now_ = 0.0;
};

void Trial::populate() {
    const auto n = static_cast<std::size_t>(cfg_.n_traders);
    res_.noise_fraction = cfg_.noise_fraction ? *cfg_.noise_fraction : setup_.uniform();
    const VelocityDist vd{cfg_.u0};
    const FlightTimeDist fd{cfg_.gamma};
    const Price p0 = Price::from_double(cfg_.initial_price);
    std::int64_t noise = 0;
    traders().resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        TraderState& s = traders()[i];
        s.trader_id = static_cast<TraderId>(i);
        s.kind = setup_.uniform() < res_.noise_fraction ? TraderKind::Noise : TraderKind::Strategic;
        const double u = setup_.uniform();
        s.velocity = cfg_.max_velocity > 0.0 ? sample_velocity_truncated(vd, u, cfg_.max_velocity)
                                             : sample_velocity(vd, u);
        s.side_sign = s.velocity > 0.0 ? 1 : -1;
        s.flight_time = sample_flight_time(fd, setup_.uniform());
        s.quantity = cfg_.bias == Bias::Quantity ? setup_.uniform_int(1, 5) : 1;
        s.reference_price = p0;
        if (s.kind == TraderKind::Noise) {
            s.budget = cfg_.budget_multiple * cfg_.initial_price;
            ++noise;
        }
    }
    res_.report.noise_fraction_realized = static_cast<double>(noise) / static_cast<double>(n);
    res_.exit_times.assign(n, std::nan(""));
    not_arrived_.resize(n);
    std::iota(not_arrived_.begin(), not_arrived_.end(), TraderId{0});
    pending_pos_.assign(n, -1);
    pending_fill_.assign(n, std::nullopt);
    working_.assign(n, -1);
}

void Trial::finish(TraderId id, ExitReason why) {
    TraderState& s = traders()[id];
    if (!std::isnan(res_.exit_times[id])) return;
    drop_pending(id);
    if (working_[id] >= 0) {
        book_.cancel_order(working_[id]);
        working_[id] = -1;
    }
    s.phase = Phase::Done;
    s.exit = why;
    res_.exit_times[id] = now_;
    ++done_;
}

void Trial::push_pending(TraderId id) {
    pending_pos_[id] = static_cast<std::int64_t>(pending_.size());
    pending_.push_back(id);
}

void Trial::drop_pending(TraderId id) {
    const std::int64_t pos = pending_pos_[id];
    if (pos < 0) return;
    const TraderId moved = pending_.back();
    pending_[pos] = moved;
    pending_pos_[moved] = pos;
    pending_.pop_back();
    pending_pos_[id] = -1;
}

void Trial::absorb(const MatchOutcome& out, std::int32_t* trades) {
    std::vector<OrderId> touched;
    for (const Trade& t : out.trades) {
        res_.tape.push_back(t);
        ++*trades;
        const double notional = t.price.to_double() * static_cast<double>(t.quantity);
        TraderState& buyer = traders()[t.buyer_id];
        TraderState& seller = traders()[t.seller_id];
        if (buyer.kind == TraderKind::Noise) buyer.budget -= notional;
        if (seller.kind == TraderKind::Noise) seller.budget += notional;
        touched.push_back(t.buy_order_id);
        touched.push_back(t.sell_order_id);
    }
    std::unordered_map<OrderId, Price> fill_price;
    for (const Trade& t : out.trades) {
        fill_price[t.buy_order_id] = t.price;
        fill_price[t.sell_order_id] = t.price;
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (OrderId oid : touched) {
        if (book_.contains(oid)) continue;  // partial fill, still working
        const OrderInfo info = orders_.at(oid);
        const TraderId id = info.owner;
        if (working_[id] != oid) continue;
        working_[id] = -1;
        TraderState& s = traders()[id];
        if (s.kind == TraderKind::Strategic) {
            finish(id, ExitReason::Filled);
        } else {
            pending_fill_[id] = Fill{info.kind, info.side, fill_price.at(oid)};
            push_pending(id);
        }
    }
}

OrderId Trial::place(TraderId id, const Order& o, std::int32_t* trades) {
    orders_[o.id] = OrderInfo{id, o.kind, o.side};
    working_[id] = o.id;
    absorb(book_.insert_order(o, now_), trades);
    return o.id;
}

void Trial::arrive(TraderId id, std::int32_t* trades, OrderId* oid) {
    TraderState& s = traders()[id];
    if (s.kind == TraderKind::Strategic) {
        const bool use_limit = dyn_.bernoulli(cfg_.limit_probability);
        Order o = strategic_quote(s, last(), now_, use_limit, next_id_++);
        deadlines_.push({s.deadline, id});
        *oid = o.id;
        if (o.kind == OrderKind::Limit) {
            place(id, o, trades);
            return;
        }
        // strategic market orders stay latent until the trade price reaches the quote
        const Price gap = *o.price > last() ? *o.price - last() : last() - *o.price;
        if (gap <= book_.activation_tolerance()) {
            place(id, o, trades);
        } else {
            orders_[o.id] = OrderInfo{id, o.kind, o.side};
            working_[id] = o.id;
            book_.add_latent(o, PriceTrigger{*o.price});
        }
        return;
    }
    s.entry_time = now_;
    s.deadline = now_ + s.flight_time;
    deadlines_.push({s.deadline, id});
    continue_noise(id, trades, oid);
}

void Trial::continue_noise(TraderId id, std::int32_t* trades, OrderId* oid) {
    TraderState& s = traders()[id];
    const std::optional<Fill> fill = pending_fill_[id];
    pending_fill_[id].reset();
    NoiseAction act = noise_step(s, fill, last(), now_, next_id_);
    if (auto* exit = std::get_if<NoiseExit>(&act)) {
        finish(id, exit->reason);
        return;
    }
    ++next_id_;
    const Order& o = std::get<Order>(act);
    *oid = o.id;
    place(id, o, trades);
}

TrialResult Trial::run() {
    res_.config = cfg_;
    populate();
    const auto n = static_cast<std::int64_t>(traders().size());
    while (res_.n_events < cfg_.max_events && done_ < n) {
        const bool idle_pool = not_arrived_.empty() && pending_.empty() &&
                               book_.ready_latent(now_, book_.last_trade_price()).empty();
        if (idle_pool && !book_.next_time_trigger()) break;  // nothing can ever act again

        const double t = now_ + dyn_.exponential(cfg_.event_rate);
        if (t > cfg_.max_time) break;
        now_ = t;
        ++res_.n_events;

        for (OrderId oid : book_.expire_flights(now_)) {
            const TraderId id = orders_.at(oid).owner;
            if (working_[id] == oid) working_[id] = -1;
            finish(id, ExitReason::FlightExpired);
        }
        while (!deadlines_.empty() && deadlines_.top().first <= now_) {
            const TraderId id = deadlines_.top().second;
            deadlines_.pop();
            finish(id, ExitReason::FlightExpired);
        }

        const auto ready = book_.ready_latent(now_, book_.last_trade_price());
        const auto a = static_cast<std::int64_t>(not_arrived_.size());
        const auto p = static_cast<std::int64_t>(pending_.size());
        const auto l = static_cast<std::int64_t>(ready.size());
        EventRecord rec;
        rec.time = now_;
        if (a + p + l > 0) {
            const std::int64_t k = dyn_.uniform_int(0, a + p + l - 1);
            if (k < a) {
                const TraderId id = not_arrived_[k];
                not_arrived_[k] = not_arrived_.back();
                not_arrived_.pop_back();
                rec.kind = EventKind::Arrival;
                rec.trader_id = id;
                arrive(id, &rec.trades, &rec.order_id);
            } else if (k < a + p) {
                const TraderId id = pending_[k - a];
                drop_pending(id);
                rec.kind = EventKind::Continuation;
                rec.trader_id = id;
                continue_noise(id, &rec.trades, &rec.order_id);
            } else {
                const OrderId oid = ready[k - a - p];
                rec.kind = EventKind::Activation;
                rec.trader_id = orders_.at(oid).owner;
                rec.order_id = oid;
                absorb(book_.activate(oid, now_), &rec.trades);
            }
        }
        if (cfg_.record_events) res_.events.push_back(rec);
    }
    res_.end_time = now_;
    const double realized = res_.report.noise_fraction_realized;
    res_.report = efficiency(res_.tape, res_.n_events, cfg_.event_rate);
    res_.report.noise_fraction_realized = realized;
    return std::move(res_);
}

}  // namespace

TrialResult run_trial(const SimConfig& config) {
    config.validate();
    Trial trial(config);
    return trial.run();
}

}  // namespace levy
