#pragma once

#include <stdexcept>
#include <string>

namespace auctionlab {

// Bad or inconsistent configuration: unknown tick band, malformed table,
// missing file, invalid parameter set. Fatal for the run that hit it.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A currency value that does not sit on the active price grid, under the
// reject snapping policy.
struct OffGridError : std::runtime_error {
  explicit OffGridError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace auctionlab
