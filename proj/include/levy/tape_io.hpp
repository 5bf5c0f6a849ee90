#pragma once

#include <iosfwd>

#include "levy/book.hpp"

namespace levy {

// CSV header: trade_id,time,price,qty,buyer_id,seller_id,aggressor
void write_tape_csv(std::ostream& out, const TradeTape& tape);
// Order ids are not part of the CSV; they read back as 0.
TradeTape read_tape_csv(std::istream& in);

}  // namespace levy
