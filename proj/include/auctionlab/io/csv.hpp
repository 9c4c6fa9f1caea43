#pragma once

#include <string>
#include <vector>

#include "auctionlab/auction/auction.hpp"
#include "auctionlab/core/date.hpp"
#include "auctionlab/core/tick_table.hpp"
#include "auctionlab/engine/order_book.hpp"
#include "auctionlab/metrics/metrics.hpp"

namespace auctionlab::io {

// Plain comma-split CSV (the toolkit's formats never quote fields).
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::vector<std::string> split_csv_line(const std::string& line);

/// `band_id,price_lower_bound,tick` with a header row.
TickTable load_tick_table(const std::string& path);

struct EventRow {
  std::string symbol;
  engine::EngineEvent event;
};

// `timestamp_ns,stock_id,kind,order_id,side,order_type,price,quantity`;
// price is empty for market-like kinds. Rows come back in file order.
std::vector<EventRow> load_event_log(const std::string& path);
void write_event_log(const std::string& path, const std::vector<EventRow>& rows);

/// Deterministic double formatting shared by every writer (%.10g).
std::string format_double(double v);

// DailyStockMetrics table; undefined cells are empty and named in the
// trailing `undefined_fields` column.
void write_metrics_csv(const std::string& path,
                       const std::vector<metrics::DailyStockMetrics>& rows);

struct AuctionResultRow {
  std::string symbol;
  Date date{};
  auction::Venue venue{};
  auction::AuctionResult result;
};
/// `stock_id,date,venue,clearing_price,executed_volume,imbalance,indicative_updates`
void write_auction_results_csv(const std::string& path,
                               const std::vector<AuctionResultRow>& rows);

std::vector<Date> load_calendar(const std::string& path);
void write_calendar(const std::string& path, const std::vector<Date>& days);

}  // namespace auctionlab::io
