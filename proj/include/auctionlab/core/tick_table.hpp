#pragma once

#include <cstdint>
#include <vector>

#include "auctionlab/core/price.hpp"

namespace auctionlab {

using BandId = std::int32_t;

struct TickBand {
  BandId band_id{};
  Micros price_lower_bound{};
  Micros tick{};
};

// Price-band x liquidity-band -> tick size map. Band boundaries are
// inclusive on the lower bound; the band with the greatest lower bound not
// above the price wins.
class TickTable {
 public:
  TickTable() = default;

  // Validates and sorts: ticks positive, no duplicate (band, lower_bound),
  // every band must start at or below zero so lookup is total.
  static TickTable from_bands(std::vector<TickBand> bands);

  Micros lookup(Micros price, BandId band) const;
  bool has_band(BandId band) const noexcept;
  const std::vector<TickBand>& bands() const noexcept { return bands_; }
  bool empty() const noexcept { return bands_.empty(); }

 private:
  std::vector<TickBand> bands_;  // sorted by (band_id, price_lower_bound)
};

/// Tick in force for `price` within liquidity band `band`.
Micros lookup_tick(const TickTable& table, Micros price, BandId band);

}  // namespace auctionlab
