#include "auctionlab/core/tick_table.hpp"

#include <algorithm>
#include <string>

namespace auctionlab {

TickTable TickTable::from_bands(std::vector<TickBand> bands) {
  if (bands.empty()) {
    throw ConfigError("tick table has no bands");
  }
  std::sort(bands.begin(), bands.end(), [](const TickBand& a, const TickBand& b) {
    return std::tie(a.band_id, a.price_lower_bound) < std::tie(b.band_id, b.price_lower_bound);
  });
  BandId current = bands.front().band_id - 1;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const TickBand& b = bands[i];
    if (b.tick <= 0) {
      throw ConfigError("tick must be positive in band " + std::to_string(b.band_id));
    }
    if (b.band_id != current) {
      current = b.band_id;
      if (b.price_lower_bound > 0) {
        throw ConfigError("band " + std::to_string(b.band_id) +
                          " does not cover prices from zero");
      }
    } else if (b.price_lower_bound == bands[i - 1].price_lower_bound) {
      throw ConfigError("duplicate price bound in band " + std::to_string(b.band_id));
    }
  }
  TickTable t;
  t.bands_ = std::move(bands);
  return t;
}

bool TickTable::has_band(BandId band) const noexcept {
  return std::any_of(bands_.begin(), bands_.end(),
                     [band](const TickBand& b) { return b.band_id == band; });
}

Micros TickTable::lookup(Micros price, BandId band) const {
  if (price <= 0) {
    throw ConfigError("tick lookup needs a positive price");
  }
  // Entries of one band are contiguous in the sorted vector; take the last
  // one whose lower bound does not exceed the price.
  const auto lo = std::lower_bound(
      bands_.begin(), bands_.end(), band,
      [](const TickBand& b, BandId id) { return b.band_id < id; });
  if (lo == bands_.end() || lo->band_id != band) {
    throw ConfigError("unknown liquidity band " + std::to_string(band));
  }
  const auto hi = std::upper_bound(
      lo, bands_.end(), std::make_pair(band, price),
      [](const std::pair<BandId, Micros>& key, const TickBand& b) {
        return std::tie(key.first, key.second) < std::tie(b.band_id, b.price_lower_bound);
      });
  return std::prev(hi)->tick;
}

Micros lookup_tick(const TickTable& table, Micros price, BandId band) {
  return table.lookup(price, band);
}

}  // namespace auctionlab
