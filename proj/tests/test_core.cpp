#include <doctest.h>

#include <chrono>
#include <random>

#include "auctionlab/core/date.hpp"
#include "auctionlab/core/errors.hpp"
#include "auctionlab/core/grouping.hpp"
#include "auctionlab/core/price.hpp"
#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/core/types.hpp"

using namespace auctionlab;

namespace {

// linear-scan oracle for tick lookup
Micros scan_lookup(const std::vector<TickBand>& bands, Micros price, BandId band) {
  const TickBand* best = nullptr;
  for (const auto& b : bands) {
    if (b.band_id != band || b.price_lower_bound > price) continue;
    if (!best || b.price_lower_bound > best->price_lower_bound) best = &b;
  }
  REQUIRE(best != nullptr);
  return best->tick;
}

}  // namespace

TEST_CASE("tick lookup: band boundary is inclusive") {
  const auto table = TickTable::from_bands(
      {TickBand{1, 0, micros_from_eur(0.01)},
       TickBand{1, micros_from_eur(10.0), micros_from_eur(0.05)}});
  CHECK(lookup_tick(table, micros_from_eur(9.99), 1) == micros_from_eur(0.01));
  CHECK(lookup_tick(table, micros_from_eur(10.00), 1) == micros_from_eur(0.05));
  CHECK(lookup_tick(table, micros_from_eur(250.0), 1) == micros_from_eur(0.05));
  CHECK_THROWS_AS(lookup_tick(table, micros_from_eur(5.0), 9), ConfigError);
}

TEST_CASE("tick lookup agrees with a linear scan on random tables") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<TickBand> bands;
    const int n_bands = 1 + static_cast<int>(rng() % 4);
    for (BandId b = 1; b <= n_bands; ++b) {
      Micros bound = 0;
      const int n_steps = 1 + static_cast<int>(rng() % 5);
      for (int s = 0; s < n_steps; ++s) {
        bands.push_back(TickBand{b, bound, static_cast<Micros>(100 * (1 + rng() % 500))});
        bound += static_cast<Micros>(1'000'000 * (1 + rng() % 20));
      }
    }
    const auto table = TickTable::from_bands(bands);
    for (int q = 0; q < 50; ++q) {
      const auto band = static_cast<BandId>(1 + rng() % n_bands);
      const auto price = static_cast<Micros>(1 + rng() % 25'000'000);
      CHECK(table.lookup(price, band) == scan_lookup(bands, price, band));
    }
  }
}

TEST_CASE("snap_to_grid") {
  SUBCASE("on-grid input under reject") {
    const Price p = snap_to_grid(10.02, micros_from_eur(0.01), SnapPolicy::reject);
    CHECK(p.grid_units(micros_from_eur(0.01)) == 1002);
  }
  SUBCASE("off-grid input under reject throws") {
    CHECK_THROWS_AS(snap_to_grid(10.024, micros_from_eur(0.05), SnapPolicy::reject), OffGridError);
  }
  SUBCASE("round_nearest picks the nearest multiple") {
    CHECK(snap_to_grid(10.024, micros_from_eur(0.05), SnapPolicy::round_nearest).eur() ==
          doctest::Approx(10.00));
  }
  SUBCASE("exact half rounds away from zero") {
    CHECK(snap_to_grid(10.025, micros_from_eur(0.05), SnapPolicy::round_nearest).eur() ==
          doctest::Approx(10.05));
    CHECK(snap_to_grid(-10.025, micros_from_eur(0.05), SnapPolicy::round_nearest).eur() ==
          doctest::Approx(-10.05));
  }
  SUBCASE("reject after round_nearest is the identity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
      const double eur = static_cast<double>(rng() % 10'000'000) / 997.0;
      const Micros tick = 100 * (1 + static_cast<Micros>(rng() % 5000));
      const Price rounded = snap_to_grid(eur, tick, SnapPolicy::round_nearest);
      const Price again = snap_to_grid(rounded.eur(), tick, SnapPolicy::reject);
      CHECK(again == rounded);
    }
  }
}

TEST_CASE("classify_group thresholds") {
  auto profile = [](double tick) {
    return StockYearProfile{1, 2017, tick, 1e9, CapBucket::small};
  };
  CHECK(classify_group(profile(0.002), profile(0.005), 1.5) == TickGroup::ts_up);
  CHECK(classify_group(profile(0.010), profile(0.004), 1.5) == TickGroup::ts_down);
  CHECK(classify_group(profile(0.010), profile(0.009), 1.5) == TickGroup::ts_flat);
  CHECK(classify_group(profile(0.010), profile(0.015), 1.5) == TickGroup::ts_up);  // boundary

  SUBCASE("antisymmetric and scale invariant") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
      const double a = 1e-4 * static_cast<double>(1 + rng() % 1000);
      const double b = 1e-4 * static_cast<double>(1 + rng() % 1000);
      const double scale = std::exp2(static_cast<double>(rng() % 21) - 10.0);
      const TickGroup fwd = classify_group(profile(a), profile(b), 1.5);
      const TickGroup rev = classify_group(profile(b), profile(a), 1.5);
      if (fwd == TickGroup::ts_up) CHECK(rev == TickGroup::ts_down);
      if (fwd == TickGroup::ts_down) CHECK(rev == TickGroup::ts_up);
      if (fwd == TickGroup::ts_flat) CHECK(rev == TickGroup::ts_flat);
      CHECK(classify_group(profile(a * scale), profile(b * scale), 1.5) == fwd);
    }
  }
}

TEST_CASE("snapshot midpoint lies strictly between the touch") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    BookSnapshot s;
    const Micros bb = 1'000'000 + static_cast<Micros>(rng() % 50'000'000);
    const Micros ba = bb + 10'000 * (1 + static_cast<Micros>(rng() % 100));
    s.bids.push_back(BookLevel{Price::from_micros(bb), 100});
    s.asks.push_back(BookLevel{Price::from_micros(ba), 100});
    const double mid = *s.mid_eur();
    CHECK(mid > eur_from_micros(bb));
    CHECK(mid < eur_from_micros(ba));
  }
}

TEST_CASE("cap buckets split into terciles") {
  const std::vector<double> caps{5, 1, 9, 3, 7, 2, 8, 4, 6};
  const auto buckets = assign_cap_buckets(caps);
  int small = 0, mid = 0, large = 0;
  for (auto b : buckets) {
    if (b == CapBucket::small) ++small;
    if (b == CapBucket::mid) ++mid;
    if (b == CapBucket::large) ++large;
  }
  CHECK(small == 3);
  CHECK(mid == 3);
  CHECK(large == 3);
  CHECK(buckets[1] == CapBucket::small);  // cap 1
  CHECK(buckets[2] == CapBucket::large);  // cap 9
}

TEST_CASE("civil date arithmetic matches std::chrono") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const auto z = static_cast<std::int64_t>(rng() % 40000) - 2000;
    const Date d = civil_from_days(z);
    CHECK(days_from_civil(d) == z);
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{z}}};
    CHECK(d.year == static_cast<int>(ymd.year()));
    CHECK(d.month == static_cast<unsigned>(ymd.month()));
    CHECK(d.day == static_cast<unsigned>(ymd.day()));
    const std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{z}}};
    CHECK(weekday(d) == static_cast<int>(wd.iso_encoding()) - 1);
  }
  CHECK(to_string(Date{2018, 3, 16}) == "2018-03-16");
  CHECK(parse_date("2018-03-16") == Date{2018, 3, 16});
  CHECK(is_third_friday(Date{2018, 3, 16}));
  CHECK(!is_third_friday(Date{2018, 3, 9}));
  CHECK(!is_third_friday(Date{2018, 3, 23}));
}

TEST_CASE("order shape invariants") {
  Order o;
  o.id = 1;
  o.kind = OrderKind::limit;
  o.quantity = 10;
  CHECK(!order_shape_ok(o));  // limit without price
  o.limit = Price::from_eur(10.0);
  CHECK(order_shape_ok(o));
  o.kind = OrderKind::market;
  CHECK(!order_shape_ok(o));  // market with price
  o.limit.reset();
  CHECK(order_shape_ok(o));
  o.quantity = 0;
  CHECK(!order_shape_ok(o));
}
