#include <catch_amalgamated.hpp>

#include <sstream>

#include "levy/book.hpp"
#include "levy/tape_io.hpp"
#include "naive_matcher.hpp"

using namespace levy;

namespace {

Price px(double v) { return Price::from_double(v); }

Order limit(OrderId id, Side side, double price, std::int64_t qty, double t, double deadline = 1e9) {
    Order o;
    o.id = id;
    o.side = side;
    o.kind = OrderKind::Limit;
    o.price = px(price);
    o.quantity = qty;
    o.trader_id = id;
    o.entry_time = t;
    o.flight_deadline = deadline;
    return o;
}

Order market(OrderId id, Side side, std::int64_t qty, double t, double deadline = 1e9) {
    Order o = limit(id, side, 1.0, qty, t, deadline);
    o.kind = OrderKind::Market;
    o.price.reset();
    return o;
}

}  // namespace

TEST_CASE("price lattice quantizes half away from zero", "[book]") {
    CHECK(Price::from_double(100.005).ticks() == 10001);
    CHECK(Price::from_double(100.004).ticks() == 10000);
    CHECK(Price::from_double(-0.005).ticks() == -1);
    CHECK(format_price(px(100.1)) == "100.10");
    CHECK(format_price(Price::from_ticks(1)) == "0.01");
    CHECK_THROWS(Price::from_double(std::nan("")));
}

TEST_CASE("market order on an empty book rests", "[book]") {
    TotalOrderBook b;
    auto out = b.insert_order(market(1, Side::Buy, 1, 0.0), 0.0);
    CHECK(out.trades.empty());
    CHECK(out.rested);
    CHECK(b.resting_market_count(Side::Buy) == 1);
}

TEST_CASE("market buy fills the earliest ask at the best price", "[book]") {
    TotalOrderBook b;
    b.insert_order(limit(1, Side::Sell, 100.1, 1, 1.0), 1.0);
    b.insert_order(limit(2, Side::Sell, 100.1, 1, 2.0), 2.0);
    auto out = b.insert_order(market(3, Side::Buy, 1, 3.0), 3.0);
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].price == px(100.1));
    CHECK(out.trades[0].quantity == 1);
    CHECK(out.trades[0].sell_order_id == 1);
    CHECK(b.contains(2));
    CHECK(*b.last_trade_price() == px(100.1));
}

TEST_CASE("crossing limit fills then rests its remainder", "[book]") {
    TotalOrderBook b;
    b.insert_order(limit(1, Side::Sell, 100.1, 2, 0.0), 0.0);
    auto out = b.insert_order(limit(2, Side::Buy, 100.2, 3, 1.0), 1.0);
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].price == px(100.1));
    CHECK(out.trades[0].quantity == 2);
    CHECK(*b.best_bid() == px(100.2));
    CHECK(b.remaining(2) == 1);
    CHECK_FALSE(b.best_offer());
}

TEST_CASE("resting market orders fill first at the incoming limit price", "[book]") {
    TotalOrderBook b(px(100.0));
    b.insert_order(market(1, Side::Sell, 1, 0.0), 0.0);
    b.insert_order(limit(2, Side::Sell, 99.0, 1, 0.5), 0.5);
    auto out = b.insert_order(limit(3, Side::Buy, 99.5, 2, 1.0), 1.0);
    REQUIRE(out.trades.size() == 2);
    CHECK(out.trades[0].sell_order_id == 1);
    CHECK(out.trades[0].price == px(99.5));
    CHECK(out.trades[1].sell_order_id == 2);
    CHECK(out.trades[1].price == px(99.0));
}

TEST_CASE("market meets resting market at the last trade price", "[book]") {
    TotalOrderBook b(px(100.0));
    b.insert_order(market(1, Side::Buy, 1, 0.0), 0.0);
    auto out = b.insert_order(market(2, Side::Sell, 1, 1.0), 1.0);
    REQUIRE(out.trades.size() == 1);
    CHECK(out.trades[0].price == px(100.0));

    TotalOrderBook fresh;  // no last price: nothing to trade at
    fresh.insert_order(market(1, Side::Buy, 1, 0.0), 0.0);
    CHECK(fresh.insert_order(market(2, Side::Sell, 1, 1.0), 1.0).trades.empty());
}

TEST_CASE("cancel", "[book]") {
    TotalOrderBook b;
    b.insert_order(limit(1, Side::Sell, 101.0, 1, 0.0), 0.0);
    CHECK(b.cancel_order(1));
    CHECK_FALSE(b.best_offer());
    CHECK_FALSE(b.cancel_order(42));

    TotalOrderBook c;
    c.insert_order(limit(1, Side::Sell, 101.0, 1, 0.0), 0.0);
    c.insert_order(limit(2, Side::Sell, 101.0, 1, 1.0), 1.0);
    c.insert_order(limit(3, Side::Sell, 101.0, 1, 2.0), 2.0);
    c.cancel_order(2);
    auto out = c.insert_order(market(4, Side::Buy, 2, 3.0), 3.0);
    REQUIRE(out.trades.size() == 2);
    CHECK(out.trades[0].sell_order_id == 1);
    CHECK(out.trades[1].sell_order_id == 3);
}

TEST_CASE("insert rejects bad orders", "[book]") {
    TotalOrderBook b;
    CHECK_THROWS_AS(b.insert_order(limit(1, Side::Buy, 100.0, 0, 0.0), 0.0), BookError);
    b.insert_order(limit(1, Side::Buy, 100.0, 1, 0.0), 0.0);
    CHECK_THROWS_AS(b.insert_order(limit(1, Side::Buy, 100.0, 1, 0.0), 0.0), BookError);
    Order no_price = limit(2, Side::Buy, 100.0, 1, 0.0);
    no_price.price.reset();
    CHECK_THROWS_AS(b.insert_order(no_price, 0.0), BookError);
}

TEST_CASE("latent activation", "[book]") {
    SECTION("exact price trigger hit") {
        TotalOrderBook b(px(100.1), px(0.05));
        Order o = market(1, Side::Buy, 1, 0.0);
        o.price = px(100.1);
        b.add_latent(o, PriceTrigger{px(100.1)});
        auto moved = b.activate_latent(1.0, b.last_trade_price());
        REQUIRE(moved.size() == 1);
        CHECK(moved[0].entry_time == 1.0);
        CHECK(b.resting_market_count(Side::Buy) == 1);
    }
    SECTION("time trigger not yet due") {
        TotalOrderBook b;
        b.add_latent(limit(1, Side::Buy, 99.0, 1, 0.0), TimeTrigger{5.0});
        CHECK(b.activate_latent(4.9, std::nullopt).empty());
        CHECK(b.is_latent(1));
        CHECK(b.activate_latent(5.0, std::nullopt).size() == 1);
        CHECK(*b.best_bid() == px(99.0));
    }
    SECTION("simultaneous triggers go in entry-time order") {
        TotalOrderBook b;
        b.insert_order(limit(1, Side::Sell, 100.0, 1, 0.0), 0.0);
        b.add_latent(limit(3, Side::Buy, 100.0, 1, 0.7), TimeTrigger{1.0});
        b.add_latent(limit(2, Side::Buy, 100.0, 1, 0.5), TimeTrigger{1.0});
        std::vector<Trade> trades;
        auto moved = b.activate_latent(2.0, std::nullopt, &trades);
        REQUIRE(moved.size() == 2);
        CHECK(moved[0].id == 2);
        REQUIRE(trades.size() == 1);
        CHECK(trades[0].buy_order_id == 2);
        CHECK(*b.best_bid() == px(100.0));
    }
}

TEST_CASE("flight expiry is inclusive", "[book]") {
    TotalOrderBook b;
    b.insert_order(limit(1, Side::Buy, 99.0, 1, 0.0, 10.0), 0.0);
    CHECK(b.expire_flights(9.99).empty());
    CHECK(b.expire_flights(10.0) == std::vector<OrderId>{1});

    TotalOrderBook c;
    const double deadlines[] = {3.0, 8.0, 1.0, 9.0, 2.0};
    for (int i = 0; i < 5; ++i) c.insert_order(limit(i + 1, Side::Buy, 90.0 + i, 1, 0.0, deadlines[i]), 0.0);
    CHECK(c.expire_flights(5.0) == std::vector<OrderId>{3, 5, 1});
    CHECK(c.order_count() == 2);
}

TEST_CASE("random scripts match the brute-force matcher", "[book][oracle]") {
    int trades = 0;
    for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
        const auto script = oracle::random_script(seed);
        const std::optional<Price> last = seed % 3 == 0 ? std::nullopt : std::optional<Price>(px(100.0));
        const auto want = oracle::run_naive(script, last, Price::from_ticks(1));
        const auto got = oracle::run_book(script, last, Price::from_ticks(1));
        INFO("seed " << seed);
        REQUIRE(oracle::same_outcome(want, got));
        trades += static_cast<int>(got.trades.size());
    }
    CHECK(trades > 10000);  // the scripts actually exercise matching
}

TEST_CASE("book never rests crossed and conserves quantity", "[book][property]") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        TotalOrderBook b(px(100.0));
        std::map<OrderId, std::int64_t> original, filled;
        for (const auto& e : oracle::random_script(seed)) {
            if (e.kind != oracle::BookEvent::Insert) continue;
            original[e.order.id] = e.order.quantity;
            for (const auto& t : b.insert_order(e.order, e.now).trades) {
                CHECK(t.quantity >= 1);
                filled[t.buy_order_id] += t.quantity;
                filled[t.sell_order_id] += t.quantity;
            }
            if (b.best_bid() && b.best_offer()) CHECK(*b.best_bid() < *b.best_offer());
        }
        for (const auto& [id, q] : filled) CHECK(q <= original[id]);
    }
}

TEST_CASE("tape CSV round-trips", "[book][io]") {
    const auto got = oracle::run_book(oracle::random_script(7), px(100.0), Price::from_ticks(1));
    REQUIRE_FALSE(got.trades.empty());
    std::stringstream ss;
    write_tape_csv(ss, got.trades);
    const std::string first = ss.str();
    CHECK(first.rfind("trade_id,time,price,qty,buyer_id,seller_id,aggressor\n", 0) == 0);
    const TradeTape back = read_tape_csv(ss);
    REQUIRE(back.size() == got.trades.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].price == got.trades[i].price);
        CHECK(back[i].quantity == got.trades[i].quantity);
        CHECK(back[i].buyer_id == got.trades[i].buyer_id);
        CHECK(back[i].aggressor == got.trades[i].aggressor);
        CHECK(std::abs(back[i].time - got.trades[i].time) <= 5e-10);
    }
    std::stringstream again;
    write_tape_csv(again, back);
    CHECK(again.str() == first);
}
