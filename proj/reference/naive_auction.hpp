#pragma once

#include <optional>
#include <span>

#include "auctionlab/auction/auction.hpp"

namespace auctionlab::ref {

// Brute-force clearing oracle: walks every grid price between the extreme
// order limits (with margin, plus the reference and midpoint), recomputing
// demand and supply by a full pass over the orders, and applies the venue
// tie-break chain literally. Slow and obviously correct.
std::optional<auction::ClearingOutcome> naive_clearing(
    std::span<const auction::AuctionOrderView> orders, Micros reference, Micros midpoint,
    Micros tick, auction::Venue venue);

}  // namespace auctionlab::ref
