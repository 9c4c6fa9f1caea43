#pragma once

#include <optional>
#include <vector>

#include "auctionlab/core/types.hpp"
#include "auctionlab/engine/order_book.hpp"

namespace auctionlab::ref {

// Serial reference matcher: a flat vector of live orders, scanned in full
// for every decision. No shared code with engine::OrderBook; slow on
// purpose, kept for testing and as the benchmark baseline.
class NaiveMatcher {
 public:
  struct Result {
    std::vector<Trade> trades;
    bool rejected{};
    Quantity rejected_quantity{};
  };

  Result apply(const engine::EngineEvent& e);

  BookSnapshot snapshot(TimestampNs t, int levels) const;
  Quantity resting_quantity(Side s) const;

 private:
  struct Live {
    Order order;
    Quantity remaining{};
    std::uint64_t seq{};
  };
  Result submit(Order o);
  std::optional<std::size_t> best_opposite(Side incoming_side, const std::optional<Price>& limit) const;

  std::vector<Live> live_;
  std::uint64_t next_seq_{0};
};

}  // namespace auctionlab::ref
