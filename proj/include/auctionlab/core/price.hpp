#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "auctionlab/core/errors.hpp"

namespace auctionlab {

// All price and volume arithmetic runs on integer micro-euros (1e-6 EUR).
// Doubles appear only at the I/O boundary, so book arithmetic is exact and
// replays are bitwise reproducible.
using Micros = std::int64_t;
inline constexpr Micros kMicrosPerEuro = 1'000'000;

Micros micros_from_eur(double eur);
double eur_from_micros(Micros m) noexcept;

/// A price on the tick grid, stored in micro-euros.
class Price {
 public:
  constexpr Price() = default;

  static constexpr Price from_micros(Micros m) noexcept { return Price(m); }
  static Price from_eur(double eur) { return Price(micros_from_eur(eur)); }

  constexpr Micros micros() const noexcept { return micros_; }
  double eur() const noexcept { return eur_from_micros(micros_); }

  // Number of grid units under `tick`; the price must be an exact multiple.
  std::int64_t grid_units(Micros tick) const;

  friend constexpr auto operator<=>(Price, Price) noexcept = default;

 private:
  explicit constexpr Price(Micros m) noexcept : micros_(m) {}
  Micros micros_{0};
};

enum class SnapPolicy : std::uint8_t { reject, round_nearest };

/// True when `price` is an exact multiple of `tick` (both in micros).
bool on_grid(Micros price, Micros tick) noexcept;

// Pins a currency value to the grid defined by `tick`. Under `reject` an
// off-grid input throws OffGridError; under `round_nearest` the nearest
// multiple wins and exact halves round away from zero.
Price snap_to_grid(double eur, Micros tick, SnapPolicy policy);

std::string format_eur(Micros m);

}  // namespace auctionlab
