#include "auctionlab/study/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "auctionlab/core/errors.hpp"

namespace auctionlab::study {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + " has no '='");
    }
    cfg.values_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key " + key + " is not a number");
  }
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  try {
    return std::stoll(get(key));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key " + key + " is not an integer");
  }
}

std::int64_t KeyValueConfig::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

TimestampNs parse_time_of_day(const std::string& s) {
  int h = 0, m = 0, sec = 0;
  const int n = std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec);
  if (n < 2 || h < 0 || h > 23 || m < 0 || m > 59 || sec < 0 || sec > 59) {
    throw ConfigError("bad time of day: '" + s + "'");
  }
  return ((h * 3600LL + m * 60LL + sec) * 1'000'000'000LL);
}

SessionConfig SessionConfig::from_kv(const KeyValueConfig& kv) {
  SessionConfig c;
  const std::string venue = kv.get_or("venue", "euronext");
  if (venue == "euronext") {
    c.venue = auction::Venue::euronext;
  } else if (venue == "us_close") {
    c.venue = auction::Venue::us_close;
  } else {
    throw ConfigError("unknown venue: " + venue);
  }
  if (kv.has("continuous_open")) c.continuous_open = parse_time_of_day(kv.get("continuous_open"));
  if (kv.has("continuous_close")) {
    c.continuous_close = parse_time_of_day(kv.get("continuous_close"));
  }
  if (kv.has("clear_window_begin")) {
    c.clear_window_begin = parse_time_of_day(kv.get("clear_window_begin"));
  }
  if (kv.has("clear_window_end")) c.clear_window_end = parse_time_of_day(kv.get("clear_window_end"));
  if (kv.has("imbalance_start")) c.imbalance_start = parse_time_of_day(kv.get("imbalance_start"));
  if (kv.has("io_start")) c.io_start = parse_time_of_day(kv.get("io_start"));
  if (kv.has("close_time")) c.close_time = parse_time_of_day(kv.get("close_time"));
  c.auction_seed = static_cast<std::uint64_t>(kv.get_int_or("rng_seed", 1));
  if (kv.has("inside_midpoint")) {
    c.inside_midpoint = Price::from_eur(kv.get_double("inside_midpoint"));
  }
  c.band = static_cast<BandId>(kv.get_int_or("band", 1));
  c.snapshot_depth = static_cast<int>(kv.get_int_or("snapshot_depth", 5));
  // previous_close.<symbol> = price
  for (const auto& [key, value] : kv.values()) {
    constexpr std::string_view prefix = "previous_close.";
    if (key.rfind(prefix, 0) == 0) {
      c.previous_close[key.substr(prefix.size())] = Price::from_eur(std::stod(value));
    }
  }
  return c;
}

}  // namespace auctionlab::study
