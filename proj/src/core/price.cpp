#include "auctionlab/core/price.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace auctionlab {

Micros micros_from_eur(double eur) {
  if (!std::isfinite(eur)) {
    throw ConfigError("non-finite currency value");
  }
  const double scaled = eur * static_cast<double>(kMicrosPerEuro);
  if (std::abs(scaled) >= 9.0e18) {
    throw ConfigError("currency value out of range: " + std::to_string(eur));
  }
  return static_cast<Micros>(std::llround(scaled));
}

double eur_from_micros(Micros m) noexcept {
  return static_cast<double>(m) / static_cast<double>(kMicrosPerEuro);
}

std::int64_t Price::grid_units(Micros tick) const {
  if (tick <= 0 || micros_ % tick != 0) {
    throw OffGridError("price " + format_eur(micros_) + " is not a multiple of tick " +
                       format_eur(tick));
  }
  return micros_ / tick;
}

bool on_grid(Micros price, Micros tick) noexcept {
  return tick > 0 && price % tick == 0;
}

Price snap_to_grid(double eur, Micros tick, SnapPolicy policy) {
  if (tick <= 0) {
    throw ConfigError("tick must be positive");
  }
  const Micros raw = micros_from_eur(eur);
  if (policy == SnapPolicy::reject) {
    if (!on_grid(raw, tick)) {
      throw OffGridError("off-grid price " + format_eur(raw) + " under tick " + format_eur(tick));
    }
    return Price::from_micros(raw);
  }
  // round_nearest, ties away from zero
  const Micros quot = raw / tick;
  const Micros rem = raw % tick;
  Micros units = quot;
  if (2 * std::abs(rem) >= tick) {
    units += (raw >= 0) ? 1 : -1;
  }
  return Price::from_micros(units * tick);
}

std::string format_eur(Micros m) {
  char buf[40];
  const bool neg = m < 0;
  const Micros a = neg ? -m : m;
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", neg ? "-" : "",
                static_cast<long long>(a / kMicrosPerEuro),
                static_cast<long long>(a % kMicrosPerEuro));
  // trim trailing zeros but keep at least two decimals
  std::string s(buf);
  auto dot = s.find('.');
  auto last = s.find_last_not_of('0');
  if (last > dot + 2) {
    s.erase(last + 1);
  } else {
    s.erase(dot + 3);
  }
  return s;
}

}  // namespace auctionlab
