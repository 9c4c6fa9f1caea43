#include "auctionlab/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace auctionlab::metrics {

namespace {

constexpr double kBps = 1e4;

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::optional<double> quoted_spread_bps(const BookSnapshot& s) {
  const auto sum = s.quote_sum_micros();
  if (!sum) return std::nullopt;
  const Micros bb = s.bids.front().price.micros();
  const Micros ba = s.asks.front().price.micros();
  // (BA-BB)/MP == 2(BA-BB)/(BA+BB); the 2x keeps the x=0 impact identity
  // exact in binary arithmetic
  return 2.0 * kBps * static_cast<double>(ba - bb) / static_cast<double>(*sum);
}

double effective_spread_bps(const Trade& t, Micros quote_sum) {
  const double sign = t.buyer_initiated ? 1.0 : -1.0;
  const Micros twice_dev = 2 * t.price.micros() - quote_sum;  // 2(P - MP)
  return sign * 2.0 * kBps * static_cast<double>(twice_dev) / static_cast<double>(quote_sum);
}

DepthVolumes depth_volumes(const BookSnapshot& s) {
  Micros v1 = 0, v3 = 0, v5 = 0;
  auto add_side = [&](const std::vector<BookLevel>& levels) {
    for (std::size_t i = 0; i < levels.size() && i < 5; ++i) {
      const Micros v = levels[i].price.micros() * levels[i].quantity;
      if (i < 1) v1 += v;
      if (i < 3) v3 += v;
      v5 += v;
    }
  };
  add_side(s.bids);
  add_side(s.asks);
  return DepthVolumes{eur_from_micros(v1), eur_from_micros(v3), eur_from_micros(v5)};
}

std::optional<double> price_impact_bps(const BookSnapshot& s, Micros notional_micros) {
  const auto sum = s.quote_sum_micros();
  if (!sum) return std::nullopt;
  auto walk = [&](const std::vector<BookLevel>& levels) -> std::optional<Micros> {
    Micros cum = 0;
    for (const BookLevel& l : levels) {
      cum += l.price.micros() * l.quantity;
      if (cum >= notional_micros) return l.price.micros();
    }
    return std::nullopt;  // book too shallow for this notional
  };
  // x = 0 resolves to the best level on both sides
  const auto ax = notional_micros <= 0 ? std::optional<Micros>(s.asks.front().price.micros())
                                       : walk(s.asks);
  const auto bx = notional_micros <= 0 ? std::optional<Micros>(s.bids.front().price.micros())
                                       : walk(s.bids);
  if (!ax || !bx) return std::nullopt;
  // ((A_x - MP) + (MP - B_x)) / (2 MP) == (A_x - B_x) / (BA + BB)
  return kBps * static_cast<double>(*ax - *bx) / static_cast<double>(*sum);
}

std::optional<double> volatility(std::span<const double> mids) {
  if (mids.size() < 2) return std::nullopt;
  double acc = 0;
  for (std::size_t i = 1; i < mids.size(); ++i) {
    const double r = std::log(mids[i]) - std::log(mids[i - 1]);
    acc += r * r;
  }
  return acc;
}

double auction_return_bps(double close_eur, double vwap_last5_eur) {
  return kBps * (std::log(close_eur) - std::log(vwap_last5_eur));
}

double overnight_return_bps(double close_eur, double vwap_last5_next_eur) {
  return kBps * (std::log(vwap_last5_next_eur) - std::log(close_eur));
}

std::optional<double> illiquidity_ratio(double abs_return_bps, double auction_volume_meur) {
  if (auction_volume_meur <= 0.0) return std::nullopt;
  return abs_return_bps / auction_volume_meur;
}

DailyStockMetrics aggregate_day(const DayInputs& in, const MetricsConfig& cfg) {
  DailyStockMetrics out;
  out.symbol = in.symbol;
  out.date = in.date;
  out.n_quote_updates = in.n_quote_updates;
  out.n_quote_updates_any = in.n_quote_updates_any;
  out.third_friday = in.third_friday;
  out.month_end = in.month_end;

  // minute-sampled quantities
  std::vector<double> spreads, vol1s, vol3s, vol5s, mids;
  std::vector<std::vector<double>> impacts(cfg.impact_notionals_eur.size());
  out.price_impact.resize(cfg.impact_notionals_eur.size());
  for (std::size_t k = 0; k < cfg.impact_notionals_eur.size(); ++k) {
    out.price_impact[k].notional_eur = cfg.impact_notionals_eur[k];
  }
  for (const BookSnapshot& s : in.minute_snapshots) {
    if (s.one_sided()) {
      ++out.one_sided_minutes;
      continue;
    }
    spreads.push_back(*quoted_spread_bps(s));
    const DepthVolumes d = depth_volumes(s);
    vol1s.push_back(d.vol1_eur);
    vol3s.push_back(d.vol3_eur);
    vol5s.push_back(d.vol5_eur);
    mids.push_back(*s.mid_eur());
    for (std::size_t k = 0; k < cfg.impact_notionals_eur.size(); ++k) {
      const auto pi = price_impact_bps(s, micros_from_eur(cfg.impact_notionals_eur[k]));
      if (pi) {
        impacts[k].push_back(*pi);
      } else {
        ++out.price_impact[k].undefined_minutes;
      }
    }
  }
  out.quoted_spread_bps = mean_of(spreads);
  out.bidask_vol1_eur = mean_of(vol1s);
  out.bidask_vol3_eur = mean_of(vol3s);
  out.bidask_vol5_eur = mean_of(vol5s);
  for (std::size_t k = 0; k < impacts.size(); ++k) {
    out.price_impact[k].mean_bps = mean_of(impacts[k]);
  }
  out.volatility = volatility(mids);

  // trade-tape quantities
  double eff_weighted = 0;
  double eff_weight = 0;
  Micros traded_value = 0;
  Micros vwap_value = 0;
  Quantity vwap_shares = 0;
  const TimestampNs vwap_from = in.continuous_end - cfg.vwap_window_ns;
  for (const TradeObs& obs : in.trades) {
    ++out.n_trades;
    traded_value += obs.trade.value_micros();
    if (obs.quote_sum) {
      const double w = static_cast<double>(obs.trade.quantity);
      eff_weighted += w * effective_spread_bps(obs.trade, *obs.quote_sum);
      eff_weight += w;
    } else {
      ++out.n_trades_excluded;
    }
    if (obs.trade.timestamp >= vwap_from && obs.trade.timestamp < in.continuous_end) {
      vwap_value += obs.trade.value_micros();
      vwap_shares += obs.trade.quantity;
    }
  }
  out.transacted_volume_eur = eur_from_micros(traded_value);
  if (eff_weight > 0) out.effective_spread_bps = eff_weighted / eff_weight;
  if (out.n_trades > 0) {
    out.avg_trade_size_eur =
        eur_from_micros(traded_value) / static_cast<double>(out.n_trades);
  }

  if (vwap_shares > 0) {
    out.vwap_last5_eur = static_cast<double>(vwap_value) /
                         (static_cast<double>(vwap_shares) * kMicrosPerEuro);
  } else if (!mids.empty()) {
    // empty window: fall back to the last mid before the auction
    out.vwap_last5_eur = mids.back();
    out.vwap_fallback = true;
  }

  // auction block
  if (in.auction && in.auction->cleared) {
    const auction::AuctionResult& a = *in.auction;
    out.auction.present = true;
    const double close = a.clearing_price.eur();
    out.auction.close_price_eur = close;
    const double volume_eur = eur_from_micros(a.clearing_price.micros() * a.executed_volume);
    out.auction.auction_volume_eur = volume_eur;
    out.auction.n_indicative_updates = static_cast<std::int64_t>(a.indicative_updates);
    out.auction.executed_market_value_eur = eur_from_micros(a.executed_market_value);
    out.auction.executed_limit_value_eur = eur_from_micros(a.executed_limit_value);
    if (out.vwap_last5_eur && *out.vwap_last5_eur > 0) {
      const double ret = auction_return_bps(close, *out.vwap_last5_eur);
      out.auction.auction_return_bps = ret;
      out.auction.abs_auction_return_bps = std::abs(ret);
      out.auction.illiquidity = illiquidity_ratio(std::abs(ret), volume_eur / 1e6);
    }
    if (a.residual_book.two_sided()) {
      out.auction.post_auction_spread_bps = quoted_spread_bps(a.residual_book);
    }
    const DepthVolumes pd = depth_volumes(a.residual_book);
    out.auction.post_vol1_eur = pd.vol1_eur;
    out.auction.post_vol3_eur = pd.vol3_eur;
    out.auction.post_vol5_eur = pd.vol5_eur;
  } else if (in.auction) {
    out.auction.n_indicative_updates = static_cast<std::int64_t>(in.auction->indicative_updates);
  }

  return out;
}

}  // namespace auctionlab::metrics
