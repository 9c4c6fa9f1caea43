#include "auctionlab/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "auctionlab/core/errors.hpp"

namespace auctionlab::io {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

TickTable load_tick_table(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 3 || rows[0][0] != "band_id") {
    throw ConfigError("tick table " + path + " needs header band_id,price_lower_bound,tick");
  }
  std::vector<TickBand> bands;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) {
      throw ConfigError("tick table " + path + " row " + std::to_string(i + 1) + " malformed");
    }
    TickBand b;
    b.band_id = static_cast<BandId>(std::stol(rows[i][0]));
    b.price_lower_bound = micros_from_eur(std::stod(rows[i][1]));
    b.tick = micros_from_eur(std::stod(rows[i][2]));
    bands.push_back(b);
  }
  return TickTable::from_bands(std::move(bands));
}

namespace {

OrderKind parse_kind(const std::string& s) {
  if (s == "limit") return OrderKind::limit;
  if (s == "market") return OrderKind::market;
  if (s == "moc") return OrderKind::market_on_close;
  if (s == "loc") return OrderKind::limit_on_close;
  if (s == "io") return OrderKind::imbalance_only;
  if (s == "tal") return OrderKind::trading_at_last;
  throw ConfigError("unknown order_type: '" + s + "'");
}

const char* kind_name(OrderKind k) {
  switch (k) {
    case OrderKind::limit: return "limit";
    case OrderKind::market: return "market";
    case OrderKind::market_on_close: return "moc";
    case OrderKind::limit_on_close: return "loc";
    case OrderKind::imbalance_only: return "io";
    case OrderKind::trading_at_last: return "tal";
  }
  return "?";
}

}  // namespace

std::vector<EventRow> load_event_log(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "timestamp_ns") {
    throw ConfigError("event log " + path + " missing header");
  }
  std::vector<EventRow> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 8) {
      throw ConfigError("event log row " + std::to_string(i + 1) + " needs 8 fields");
    }
    EventRow row;
    row.symbol = r[1];
    engine::EngineEvent& e = row.event;
    e.order.timestamp = std::stoll(r[0]);
    const std::string& kind = r[2];
    if (kind == "submit") {
      e.kind = engine::EventKind::submit;
    } else if (kind == "cancel") {
      e.kind = engine::EventKind::cancel;
    } else if (kind == "modify") {
      e.kind = engine::EventKind::modify;
    } else {
      throw ConfigError("unknown event kind: '" + kind + "'");
    }
    e.order.id = std::stoull(r[3]);
    if (e.kind != engine::EventKind::cancel) {
      if (r[4] == "buy") {
        e.order.side = Side::buy;
      } else if (r[4] == "sell") {
        e.order.side = Side::sell;
      } else {
        throw ConfigError("unknown side: '" + r[4] + "'");
      }
      e.order.kind = parse_kind(r[5]);
      if (!r[6].empty()) e.order.limit = Price::from_eur(std::stod(r[6]));
      e.order.quantity = std::stoll(r[7]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_event_log(const std::string& path, const std::vector<EventRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "timestamp_ns,stock_id,kind,order_id,side,order_type,price,quantity\n";
  for (const EventRow& row : rows) {
    const auto& e = row.event;
    const char* kind = e.kind == engine::EventKind::submit
                           ? "submit"
                           : (e.kind == engine::EventKind::cancel ? "cancel" : "modify");
    out << e.order.timestamp << ',' << row.symbol << ',' << kind << ',' << e.order.id << ',';
    if (e.kind == engine::EventKind::cancel) {
      out << ",,,\n";
      continue;
    }
    out << (e.order.side == Side::buy ? "buy" : "sell") << ',' << kind_name(e.order.kind) << ',';
    if (e.order.limit) out << format_double(e.order.limit->eur());
    out << ',' << e.order.quantity << '\n';
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void note_undefined(std::string& list, const std::optional<double>& v, const char* name) {
  if (!v) {
    if (!list.empty()) list += ';';
    list += name;
  }
}

}  // namespace

void write_metrics_csv(const std::string& path,
                       const std::vector<metrics::DailyStockMetrics>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  // impact columns follow the configured grid of the first row
  std::vector<double> grid;
  if (!rows.empty()) {
    for (const auto& cell : rows.front().price_impact) grid.push_back(cell.notional_eur);
  }
  out << "stock_id,date,quoted_spread_bps,effective_spread_bps,bidask_vol1_eur,bidask_vol3_eur,"
         "bidask_vol5_eur";
  for (double x : grid) out << ",price_impact_" << format_double(x / 1000.0) << "k_bps";
  for (double x : grid) out << ",price_impact_" << format_double(x / 1000.0) << "k_undef_minutes";
  out << ",volatility,n_quote_updates,n_quote_updates_any,n_trades,n_trades_excluded,"
         "avg_trade_size_eur,"
         "transacted_volume_eur,close_price,auction_return_bps,abs_auction_return_bps,"
         "auction_volume_eur,post_auction_spread_bps,post_vol1_eur,post_vol3_eur,post_vol5_eur,"
         "illiquidity,n_indicative_updates,vwap_last5,vwap_fallback,third_friday,month_end,"
         "one_sided_minutes,undefined_fields\n";
  for (const auto& m : rows) {
    std::string undef;
    out << m.symbol << ',' << to_string(m.date) << ',' << opt_cell(m.quoted_spread_bps) << ','
        << opt_cell(m.effective_spread_bps) << ',' << opt_cell(m.bidask_vol1_eur) << ','
        << opt_cell(m.bidask_vol3_eur) << ',' << opt_cell(m.bidask_vol5_eur);
    note_undefined(undef, m.quoted_spread_bps, "quoted_spread_bps");
    note_undefined(undef, m.effective_spread_bps, "effective_spread_bps");
    note_undefined(undef, m.bidask_vol1_eur, "bidask_vol1_eur");
    for (const auto& cell : m.price_impact) {
      out << ',' << opt_cell(cell.mean_bps);
      if (!cell.mean_bps) {
        if (!undef.empty()) undef += ';';
        undef += "price_impact_" + format_double(cell.notional_eur / 1000.0) + "k";
      }
    }
    for (const auto& cell : m.price_impact) out << ',' << cell.undefined_minutes;
    out << ',' << opt_cell(m.volatility) << ',' << m.n_quote_updates << ','
        << m.n_quote_updates_any << ',' << m.n_trades << ',' << m.n_trades_excluded << ','
        << opt_cell(m.avg_trade_size_eur)
        << ',' << format_double(m.transacted_volume_eur) << ','
        << opt_cell(m.auction.close_price_eur) << ',' << opt_cell(m.auction.auction_return_bps)
        << ',' << opt_cell(m.auction.abs_auction_return_bps) << ','
        << opt_cell(m.auction.auction_volume_eur) << ','
        << opt_cell(m.auction.post_auction_spread_bps) << ',' << opt_cell(m.auction.post_vol1_eur)
        << ',' << opt_cell(m.auction.post_vol3_eur) << ',' << opt_cell(m.auction.post_vol5_eur)
        << ',' << opt_cell(m.auction.illiquidity) << ',' << m.auction.n_indicative_updates << ','
        << opt_cell(m.vwap_last5_eur) << ',' << (m.vwap_fallback ? 1 : 0) << ','
        << (m.third_friday ? 1 : 0) << ',' << (m.month_end ? 1 : 0) << ',' << m.one_sided_minutes;
    note_undefined(undef, m.volatility, "volatility");
    note_undefined(undef, m.auction.close_price_eur, "close_price");
    note_undefined(undef, m.auction.auction_return_bps, "auction_return_bps");
    note_undefined(undef, m.auction.illiquidity, "illiquidity");
    note_undefined(undef, m.vwap_last5_eur, "vwap_last5");
    out << ',' << undef << '\n';
  }
}

void write_auction_results_csv(const std::string& path,
                               const std::vector<AuctionResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "stock_id,date,venue,clearing_price,executed_volume,imbalance,indicative_updates\n";
  for (const auto& r : rows) {
    out << r.symbol << ',' << to_string(r.date) << ',' << auction::to_string(r.venue) << ',';
    if (r.result.cleared) out << format_double(r.result.clearing_price.eur());
    out << ',' << r.result.executed_volume << ',' << r.result.imbalance_at_clear << ','
        << r.result.indicative_updates << '\n';
  }
}

std::vector<Date> load_calendar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open calendar: " + path);
  std::vector<Date> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("date", 0) == 0) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (!line.empty()) out.push_back(parse_date(line));
  }
  return out;
}

void write_calendar(const std::string& path, const std::vector<Date>& days) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write: " + path);
  out << "date\n";
  for (const Date& d : days) out << to_string(d) << '\n';
}

}  // namespace auctionlab::io
