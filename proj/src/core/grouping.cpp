#include "auctionlab/core/grouping.hpp"

#include <algorithm>
#include <numeric>

#include "auctionlab/core/errors.hpp"

namespace auctionlab {

const char* to_string(CapBucket b) noexcept {
  switch (b) {
    case CapBucket::small: return "small";
    case CapBucket::mid: return "mid";
    case CapBucket::large: return "large";
  }
  return "?";
}

const char* to_string(TickGroup g) noexcept {
  switch (g) {
    case TickGroup::ts_up: return "ts_up";
    case TickGroup::ts_down: return "ts_down";
    case TickGroup::ts_flat: return "ts_flat";
  }
  return "?";
}

TickGroup classify_group(const StockYearProfile& before, const StockYearProfile& after,
                         double factor) {
  if (before.stock != after.stock) {
    throw ConfigError("classify_group: profiles belong to different stocks");
  }
  if (before.avg_tick_eur <= 0.0 || after.avg_tick_eur <= 0.0) {
    throw ConfigError("classify_group: average ticks must be positive");
  }
  if (after.avg_tick_eur >= factor * before.avg_tick_eur) return TickGroup::ts_up;
  if (before.avg_tick_eur >= factor * after.avg_tick_eur) return TickGroup::ts_down;
  return TickGroup::ts_flat;
}

std::vector<CapBucket> assign_cap_buckets(std::span<const double> market_caps) {
  const std::size_t n = market_caps.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return market_caps[a] < market_caps[b];
  });
  std::vector<CapBucket> out(n, CapBucket::small);
  for (std::size_t rank = 0; rank < n; ++rank) {
    CapBucket b = CapBucket::small;
    if (rank >= 2 * n / 3) {
      b = CapBucket::large;
    } else if (rank >= n / 3) {
      b = CapBucket::mid;
    }
    out[order[rank]] = b;
  }
  return out;
}

}  // namespace auctionlab
