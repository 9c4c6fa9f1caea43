#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "auctionlab/core/types.hpp"

namespace auctionlab {

enum class CapBucket : std::uint8_t { small, mid, large };
enum class TickGroup : std::uint8_t { ts_up, ts_down, ts_flat };

const char* to_string(CapBucket b) noexcept;
const char* to_string(TickGroup g) noexcept;

struct StockYearProfile {
  StockId stock{};
  int year{};
  double avg_tick_eur{};   // simple mean of the tick in force at each close
  double market_cap_eur{};
  CapBucket cap_bucket{CapBucket::small};
};

// ts_up when the later-year average tick is at least `factor` times the
// earlier one, ts_down for the reverse, ts_flat otherwise.
TickGroup classify_group(const StockYearProfile& before, const StockYearProfile& after,
                         double factor);

// Tercile partition by market cap, ascending; rank boundaries at n/3 and
// 2n/3. Returns buckets aligned with the input order.
std::vector<CapBucket> assign_cap_buckets(std::span<const double> market_caps);

}  // namespace auctionlab
