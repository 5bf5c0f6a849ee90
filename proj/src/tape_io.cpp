#include "levy/tape_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levy {

namespace {

constexpr const char* kHeader = "trade_id,time,price,qty,buyer_id,seller_id,aggressor";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

void write_tape_csv(std::ostream& out, const TradeTape& tape) {
    out << kHeader << '\n';
    char buf[64];
    for (const Trade& t : tape) {
        std::snprintf(buf, sizeof buf, "%.9f", t.time);
        out << t.trade_id << ',' << buf << ',' << format_price(t.price) << ',' << t.quantity << ','
            << t.buyer_id << ',' << t.seller_id << ',' << to_string(t.aggressor) << '\n';
    }
}

TradeTape read_tape_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw std::runtime_error("trade tape: missing or unexpected header");
    TradeTape tape;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c = split(line);
        if (c.size() != 7) throw std::runtime_error("trade tape: bad row '" + line + "'");
        Trade t;
        t.trade_id = std::stoll(c[0]);
        t.time = std::stod(c[1]);
        t.price = Price::from_double(std::stod(c[2]));
        t.quantity = std::stoll(c[3]);
        t.buyer_id = std::stoll(c[4]);
        t.seller_id = std::stoll(c[5]);
        if (c[6] == "buy")
            t.aggressor = Side::Buy;
        else if (c[6] == "sell")
            t.aggressor = Side::Sell;
        else
            throw std::runtime_error("trade tape: bad aggressor '" + c[6] + "'");
        tape.push_back(t);
    }
    return tape;
}

}  // namespace levy
