#include "auctionlab/study/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "auctionlab/core/errors.hpp"
#include "auctionlab/core/grouping.hpp"
#include "auctionlab/econ/regression.hpp"
#include "auctionlab/econ/stat_tests.hpp"
#include "auctionlab/io/csv.hpp"
#include "auctionlab/study/calendar.hpp"
#include "auctionlab/study/day_runner.hpp"

namespace auctionlab::study {

namespace fs = std::filesystem;
using io::format_double;
using metrics::DailyStockMetrics;

namespace {

// ---------------------------------------------------------------------------
// variable table: how each measured quantity enters the tables

struct Variable {
  std::string name;
  bool log_in_panel{};            // regression uses log(value)
  double descriptive_scale{1.0};  // descriptive tables (e.g. euros -> M euros)
  std::function<std::optional<double>(const DailyStockMetrics&)> get;
};

std::optional<double> impact_cell(const DailyStockMetrics& m, std::size_t k) {
  if (k >= m.price_impact.size()) return std::nullopt;
  return m.price_impact[k].mean_bps;
}

std::vector<Variable> variable_table() {
  std::vector<Variable> v;
  auto add = [&](std::string name, bool log_panel, double scale, auto getter) {
    v.push_back(Variable{std::move(name), log_panel, scale, getter});
  };
  add("bidask_spread", false, 1.0,
      [](const DailyStockMetrics& m) { return m.quoted_spread_bps; });
  add("effective_spread", false, 1.0,
      [](const DailyStockMetrics& m) { return m.effective_spread_bps; });
  add("bidask_vol1", true, 1e-6, [](const DailyStockMetrics& m) { return m.bidask_vol1_eur; });
  add("bidask_vol3", true, 1e-6, [](const DailyStockMetrics& m) { return m.bidask_vol3_eur; });
  add("bidask_vol5", true, 1e-6, [](const DailyStockMetrics& m) { return m.bidask_vol5_eur; });
  add("price_impact_10k", false, 1.0,
      [](const DailyStockMetrics& m) { return impact_cell(m, 0); });
  add("price_impact_20k", false, 1.0,
      [](const DailyStockMetrics& m) { return impact_cell(m, 1); });
  add("price_impact_50k", false, 1.0,
      [](const DailyStockMetrics& m) { return impact_cell(m, 2); });
  add("price_impact_100k", false, 1.0,
      [](const DailyStockMetrics& m) { return impact_cell(m, 3); });
  add("transacted_volume", true, 1e-6, [](const DailyStockMetrics& m) {
    return m.transacted_volume_eur > 0 ? std::optional<double>(m.transacted_volume_eur)
                                       : std::nullopt;
  });
  add("volatility", false, 1.0, [](const DailyStockMetrics& m) { return m.volatility; });
  add("n_bidask_updates", false, 1.0, [](const DailyStockMetrics& m) {
    return std::optional<double>(static_cast<double>(m.n_quote_updates));
  });
  add("n_trades", false, 1.0, [](const DailyStockMetrics& m) {
    return std::optional<double>(static_cast<double>(m.n_trades));
  });
  add("trade_size", false, 1.0,
      [](const DailyStockMetrics& m) { return m.avg_trade_size_eur; });
  add("post_auction_spread", false, 1.0,
      [](const DailyStockMetrics& m) { return m.auction.post_auction_spread_bps; });
  add("auction_vol1", true, 1e-6,
      [](const DailyStockMetrics& m) { return m.auction.post_vol1_eur; });
  add("auction_vol3", true, 1e-6,
      [](const DailyStockMetrics& m) { return m.auction.post_vol3_eur; });
  add("auction_vol5", true, 1e-6,
      [](const DailyStockMetrics& m) { return m.auction.post_vol5_eur; });
  add("illiquidity", true, 1.0,
      [](const DailyStockMetrics& m) { return m.auction.illiquidity; });
  add("auction_volume", true, 1e-6,
      [](const DailyStockMetrics& m) { return m.auction.auction_volume_eur; });
  add("abs_auction_return", false, 1.0,
      [](const DailyStockMetrics& m) { return m.auction.abs_auction_return_bps; });
  add("n_indicative_updates", false, 1.0, [](const DailyStockMetrics& m) {
    return m.auction.present
               ? std::optional<double>(static_cast<double>(m.auction.n_indicative_updates))
               : std::nullopt;
  });
  return v;
}

// ---------------------------------------------------------------------------

struct StockInfo {
  std::string symbol;
  double market_cap_eur{};
  CapBucket bucket{CapBucket::small};
  TickGroup group{TickGroup::ts_flat};
  double avg_tick_before{}, avg_tick_after{};
  double first_close{};  // share-count anchor for the time-varying cap control
  std::optional<Date> suspended_from;
};

struct DayKey {
  std::string symbol;
  Date date;
  bool operator<(const DayKey& o) const {
    return std::tie(symbol, date) < std::tie(o.symbol, o.date);
  }
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 step over the combined value
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string stars(double p) {
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// built-in regime pair for simulate mode: band 1 tick rises, band 2 falls,
// band 3 unchanged
TickTable default_table_before() {
  return TickTable::from_bands({TickBand{1, 0, micros_from_eur(0.002)},
                                TickBand{2, 0, micros_from_eur(0.01)},
                                TickBand{3, 0, micros_from_eur(0.005)}});
}
TickTable default_table_after() {
  return TickTable::from_bands({TickBand{1, 0, micros_from_eur(0.005)},
                                TickBand{2, 0, micros_from_eur(0.004)},
                                TickBand{3, 0, micros_from_eur(0.005)}});
}

struct AnalysisContext {
  std::map<DayKey, const DailyStockMetrics*> days;
  const std::map<std::string, double>* market_caps{};
  const std::map<std::string, BandId>* symbol_bands{};
  const TradingCalendar* calendar{};
  const TickTable* table_before{};
  const TickTable* table_after{};
  std::vector<std::pair<std::string, std::string>> exclusions;
};

void analyze(AnalysisContext& ctx, const StudyConfig& cfg, StudyReport& report,
             const std::function<std::string(const std::string&)>& outfile) {
  auto table_for_year = [&](int year) -> const TickTable& {
    return year == cfg.year_before ? *ctx.table_before : *ctx.table_after;
  };

  // ------------------------------------------------- stock classification
  std::map<std::string, std::map<int, std::pair<double, int>>> tick_acc;  // sum, n
  std::map<std::string, double> first_close;
  for (const auto& [key, m] : ctx.days) {
    const auto close = m->auction.close_price_eur;
    if (!close) continue;
    if (!first_close.contains(key.symbol)) first_close[key.symbol] = *close;
    const int year = key.date.year;
    if (year != cfg.year_before && year != cfg.year_after) continue;
    const BandId band =
        ctx.symbol_bands->contains(key.symbol) ? ctx.symbol_bands->at(key.symbol) : 1;
    const Micros tick = table_for_year(year).lookup(micros_from_eur(*close), band);
    auto& acc = tick_acc[key.symbol][year];
    acc.first += eur_from_micros(tick);
    acc.second += 1;
  }
  std::vector<StockInfo> stocks;
  for (const auto& [sym, by_year] : tick_acc) {
    if (!by_year.contains(cfg.year_before) || !by_year.contains(cfg.year_after)) {
      ctx.exclusions.emplace_back(sym, "missing_year_coverage");
      continue;
    }
    StockInfo info;
    info.symbol = sym;
    info.avg_tick_before =
        by_year.at(cfg.year_before).first / by_year.at(cfg.year_before).second;
    info.avg_tick_after = by_year.at(cfg.year_after).first / by_year.at(cfg.year_after).second;
    info.market_cap_eur =
        ctx.market_caps->contains(sym) ? ctx.market_caps->at(sym) : 0.0;
    info.first_close = first_close[sym];
    StockYearProfile before{0, cfg.year_before, info.avg_tick_before, info.market_cap_eur,
                            CapBucket::small};
    StockYearProfile after{0, cfg.year_after, info.avg_tick_after, info.market_cap_eur,
                           CapBucket::small};
    info.group = classify_group(before, after, cfg.group_factor);
    stocks.push_back(info);
  }
  {
    std::vector<double> caps;
    caps.reserve(stocks.size());
    for (const auto& s : stocks) caps.push_back(s.market_cap_eur);
    const auto buckets = assign_cap_buckets(caps);
    for (std::size_t i = 0; i < stocks.size(); ++i) stocks[i].bucket = buckets[i];
  }
  if (!cfg.suspensions_path.empty()) {
    for (const auto& row : io::read_csv(cfg.suspensions_path)) {
      if (row.size() < 2 || row[0] == "symbol") continue;
      for (auto& s : stocks) {
        if (s.symbol == row[0]) s.suspended_from = parse_date(row[1]);
      }
    }
  }
  {
    std::ofstream g(outfile("groups.csv"));
    g << "symbol,market_cap_eur,cap_bucket,avg_tick_" << cfg.year_before << ",avg_tick_"
      << cfg.year_after << ",group,suspended_from\n";
    for (const auto& s : stocks) {
      g << s.symbol << ',' << format_double(s.market_cap_eur) << ',' << to_string(s.bucket)
        << ',' << format_double(s.avg_tick_before) << ',' << format_double(s.avg_tick_after)
        << ',' << to_string(s.group) << ','
        << (s.suspended_from ? to_string(*s.suspended_from) : "") << '\n';
    }
  }

  // ------------------------------------------- analysis-day calendar filter
  const auto filter = calendar_filter(ctx.calendar->days());
  const std::set<Date> analysis_days(filter.retained.begin(), filter.retained.end());
  {
    std::ofstream x(outfile("exclusions.csv"));
    x << "entity,reason\n";
    for (const auto& [d, reason] : filter.excluded) x << to_string(d) << ',' << reason << '\n';
    for (const auto& [what, reason] : ctx.exclusions) x << what << ',' << reason << '\n';
  }

  auto analysis_metric = [&](const std::string& sym, int year) {
    std::vector<const DailyStockMetrics*> out;
    const auto lo = ctx.days.lower_bound(DayKey{sym, Date{year, 1, 1}});
    const auto hi = ctx.days.upper_bound(DayKey{sym, Date{year, 12, 31}});
    for (auto it = lo; it != hi; ++it) {
      if (analysis_days.contains(it->first.date)) out.push_back(it->second);
    }
    return out;
  };

  const auto vars = variable_table();
  auto want = [&](const std::string& m) {
    return std::find(cfg.models.begin(), cfg.models.end(), m) != cfg.models.end();
  };

  // ------------------------------------------------------------ descriptive
  if (want("descriptive")) {
    std::ofstream t(outfile("descriptive.csv"));
    t << "cap_bucket,group,variable,mean_" << cfg.year_before << ",mean_" << cfg.year_after
      << ",avg_increase_pct,n_stocks,t_p,wilcoxon_p,sig_t,sig_w\n";
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const auto& var : vars) {
        struct GroupAcc {
          std::vector<double> incs;
          double sum_before{}, sum_after{};
          int n_before{}, n_after{};
        };
        std::map<TickGroup, GroupAcc> groups;
        for (const auto& s : stocks) {
          if (s.bucket != bucket) continue;
          auto year_mean = [&](int year) -> std::optional<double> {
            double acc = 0;
            int n = 0;
            for (const auto* m : analysis_metric(s.symbol, year)) {
              const auto v = var.get(*m);
              if (v) {
                acc += *v * var.descriptive_scale;
                ++n;
              }
            }
            if (n == 0) return std::nullopt;
            return acc / n;
          };
          const auto before = year_mean(cfg.year_before);
          const auto after = year_mean(cfg.year_after);
          if (!before || !after) continue;
          GroupAcc& g = groups[s.group];
          g.sum_before += *before;
          ++g.n_before;
          g.sum_after += *after;
          ++g.n_after;
          if (*before > 0) g.incs.push_back(100.0 * (*after - *before) / *before);
        }
        const auto* control =
            groups.count(TickGroup::ts_flat) ? &groups[TickGroup::ts_flat] : nullptr;
        for (const TickGroup grp : {TickGroup::ts_flat, TickGroup::ts_up, TickGroup::ts_down}) {
          if (!groups.count(grp)) continue;
          const GroupAcc& g = groups[grp];
          if (g.n_before == 0 || g.n_after == 0) continue;
          double mean_inc = 0;
          for (double x : g.incs) mean_inc += x;
          if (!g.incs.empty()) mean_inc /= static_cast<double>(g.incs.size());
          std::string t_p, w_p, sig_t, sig_w;
          if (grp != TickGroup::ts_flat && control && g.incs.size() >= 2 &&
              control->incs.size() >= 2) {
            const auto tests = econ::two_sample_tests(g.incs, control->incs);
            t_p = format_double(tests.t_p);
            w_p = format_double(tests.wilcoxon_p);
            sig_t = tests.t_p < 0.05 ? "*" : "";
            sig_w = tests.wilcoxon_p < 0.05 ? "+" : "";
          }
          t << to_string(bucket) << ',' << to_string(grp) << ',' << var.name << ','
            << format_double(g.sum_before / g.n_before) << ','
            << format_double(g.sum_after / g.n_after) << ',' << format_double(mean_inc) << ','
            << g.incs.size() << ',' << t_p << ',' << w_p << ',' << sig_t << ',' << sig_w
            << '\n';
        }
      }
    }
  }

  // -------------------------------------------------------------------- panel
  auto build_panel = [&](const Variable& var, CapBucket bucket,
                         bool with_suspension) -> std::vector<econ::PanelObservation> {
    std::vector<econ::PanelObservation> obs;
    StockId sid = 0;
    for (const auto& s : stocks) {
      ++sid;
      if (s.bucket != bucket) continue;
      for (const int year : {cfg.year_before, cfg.year_after}) {
        for (const auto* m : analysis_metric(s.symbol, year)) {
          const auto raw = var.get(*m);
          if (!raw) continue;
          double dep = *raw;
          if (var.log_in_panel) {
            if (dep <= 0) continue;
            dep = std::log(dep);
          }
          if (!m->auction.close_price_eur || m->transacted_volume_eur <= 0) continue;
          econ::PanelObservation o;
          o.stock = sid;
          o.date_key = static_cast<std::int32_t>(days_from_civil(m->date));
          o.dep_var = dep;
          o.ts_up = s.group == TickGroup::ts_up;
          o.ts_down = s.group == TickGroup::ts_down;
          o.post_mifid = year == cfg.year_after;
          // cap input scaled by the close so the control varies through time
          o.log_market_cap =
              s.market_cap_eur > 0 && s.first_close > 0
                  ? std::log(s.market_cap_eur * *m->auction.close_price_eur / s.first_close)
                  : 0.0;
          o.log_volume = std::log(m->transacted_volume_eur);
          o.close_price = *m->auction.close_price_eur;
          o.volatility = m->volatility.value_or(0.0);
          o.suspended = with_suspension && s.suspended_from && m->date >= *s.suspended_from;
          obs.push_back(o);
        }
      }
    }
    return obs;
  };

  auto write_panel_rows = [&](std::ofstream& t, const std::string& bucket,
                              const std::string& var, const econ::RegressionResult& r) {
    for (const auto& c : r.coefficients) {
      t << bucket << ',' << var << ',' << c.name << ',';
      if (c.identified) {
        t << format_double(c.estimate) << ',' << format_double(c.se) << ','
          << format_double(c.p_value) << ','
          << (c.se_cluster ? format_double(*c.se_cluster) : "") << ','
          << (c.p_cluster ? format_double(*c.p_cluster) : "") << ','
          << stars(c.p_cluster.value_or(c.p_value));
      } else {
        t << ",,,,,";
      }
      t << ',' << (c.identified ? 1 : 0) << ',' << c.note << ',' << r.n_obs << '\n';
    }
  };

  if (want("panel")) {
    std::ofstream t(outfile("panel.csv"));
    t << "cap_bucket,variable,coef,estimate,se,p,se_cluster,p_cluster,stars,identified,note,"
         "n_obs\n";
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const auto& var : vars) {
        const auto obs = build_panel(var, bucket, false);
        if (obs.size() < 20) continue;
        try {
          const auto r = econ::fit_fe_panel(obs, econ::PanelSpec{});
          write_panel_rows(t, to_string(bucket), var.name, r);
        } catch (const econ::SingularDesignError& e) {
          t << to_string(bucket) << ',' << var.name << ",error,,,,,,,0," << e.what() << ','
            << obs.size() << '\n';
        } catch (const econ::EstimationError&) {
        }
      }
    }
  }

  // ---------------------------------------------------- suspension analyses
  if (want("suspension") && !cfg.suspensions_path.empty()) {
    std::ofstream t(outfile("suspension_panel.csv"));
    t << "cap_bucket,variable,coef,estimate,se,p,se_cluster,p_cluster,stars,identified,note,"
         "n_obs\n";
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const auto& var : vars) {
        if (var.name != "transacted_volume" && var.name != "auction_volume") continue;
        const auto obs = build_panel(var, bucket, true);
        if (obs.size() < 20) continue;
        try {
          econ::PanelSpec spec;
          spec.include_suspension = true;
          const auto r = econ::fit_fe_panel(obs, spec);
          write_panel_rows(t, to_string(bucket), var.name, r);
        } catch (const std::runtime_error&) {
        }
      }
    }
    std::ofstream d(outfile("suspension_descriptive.csv"));
    d << "cap_bucket,group,variable,avg_increase_pct,n_stocks,t_p\n";
    Date pivot{cfg.year_after, 3, 3};
    for (const auto& s : stocks) {
      if (s.suspended_from) {
        pivot = *s.suspended_from;
        break;
      }
    }
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const bool auction_var : {false, true}) {
        std::vector<double> inc_susp, inc_not;
        for (const auto& s : stocks) {
          if (s.bucket != bucket) continue;
          double pre = 0, post = 0;
          int n_pre = 0, n_post = 0;
          const auto lo = ctx.days.lower_bound(DayKey{s.symbol, Date{0, 1, 1}});
          const auto hi = ctx.days.upper_bound(DayKey{s.symbol, Date{9999, 1, 1}});
          for (auto it = lo; it != hi; ++it) {
            if (!analysis_days.contains(it->first.date)) continue;
            const auto v = auction_var
                               ? it->second->auction.auction_volume_eur
                               : std::optional<double>(it->second->transacted_volume_eur);
            if (!v) continue;
            if (it->first.date < pivot) {
              pre += *v;
              ++n_pre;
            } else {
              post += *v;
              ++n_post;
            }
          }
          if (n_pre == 0 || n_post == 0 || pre <= 0) continue;
          const double inc = 100.0 * (post / n_post - pre / n_pre) / (pre / n_pre);
          (s.suspended_from ? inc_susp : inc_not).push_back(inc);
        }
        const char* vname = auction_var ? "auction_volume" : "transacted_volume";
        auto emit = [&](const char* grp, const std::vector<double>& incs,
                        const std::vector<double>& other) {
          if (incs.empty()) return;
          double mean = 0;
          for (double x : incs) mean += x;
          mean /= static_cast<double>(incs.size());
          std::string p;
          if (incs.size() >= 2 && other.size() >= 2) {
            p = format_double(econ::welch_t_test(incs, other).p_value);
          }
          d << to_string(bucket) << ',' << grp << ',' << vname << ',' << format_double(mean)
            << ',' << incs.size() << ',' << p << '\n';
        };
        emit("suspended", inc_susp, inc_not);
        emit("not_suspended", inc_not, inc_susp);
      }
    }
  }

  // ------------------------------------------ mean reversion and interaction
  struct ReturnPair {
    std::string symbol;
    int year{};
    double r_ca{}, r_on{};
    double auction_volume{};
  };
  std::vector<ReturnPair> pairs;
  {
    std::map<std::string, std::vector<const DailyStockMetrics*>> per_symbol;
    for (const auto& [key, m] : ctx.days) per_symbol[key.symbol].push_back(m);
    const auto& cal_days = ctx.calendar->days();
    auto next_trading_day = [&](const Date& d) -> std::optional<Date> {
      auto it = std::upper_bound(cal_days.begin(), cal_days.end(), d);
      if (it == cal_days.end()) return std::nullopt;
      return *it;
    };
    for (const auto& [sym, ms] : per_symbol) {
      for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        const auto& today = *ms[i];
        const auto& next = *ms[i + 1];
        if (!analysis_days.contains(today.date)) continue;
        const auto expected_next = next_trading_day(today.date);
        if (!expected_next || next.date != *expected_next) continue;  // gap: pair dropped
        if (!today.auction.close_price_eur || !today.auction.auction_return_bps) continue;
        if (!next.vwap_last5_eur || *next.vwap_last5_eur <= 0) continue;
        ReturnPair pr;
        pr.symbol = sym;
        pr.year = today.date.year;
        pr.r_ca = *today.auction.auction_return_bps;
        pr.r_on = metrics::overnight_return_bps(*today.auction.close_price_eur,
                                                *next.vwap_last5_eur);
        pr.auction_volume = today.auction.auction_volume_eur.value_or(0.0);
        pairs.push_back(pr);
      }
    }
  }
  auto info_of_symbol = [&](const std::string& sym) -> const StockInfo* {
    for (const auto& s : stocks) {
      if (s.symbol == sym) return &s;
    }
    return nullptr;
  };

  if (want("reversion")) {
    std::ofstream t(outfile("reversion.csv"));
    t << "cap_bucket,group,year,n,b,se,p,significant_01\n";
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const std::string grp : {"all", "ts_flat", "ts_up", "ts_down"}) {
        for (const int year : {cfg.year_before, cfg.year_after}) {
          std::vector<econ::ReversionDay> cell;
          for (const auto& pr : pairs) {
            if (pr.year != year) continue;
            const auto* s = info_of_symbol(pr.symbol);
            if (!s || s->bucket != bucket) continue;
            if (grp != "all" && std::string(to_string(s->group)) != grp) continue;
            cell.push_back(econ::ReversionDay{pr.r_ca, pr.r_on});
          }
          try {
            const auto r = econ::fit_mean_reversion(cell, cfg.reversion_threshold_bps);
            const auto* b = r.find("b");
            t << to_string(bucket) << ',' << grp << ',' << year << ',' << r.n_obs << ','
              << format_double(b->estimate) << ',' << format_double(b->se) << ','
              << format_double(b->p_value) << ',' << (b->p_value < 0.01 ? 1 : 0) << '\n';
          } catch (const std::runtime_error&) {
          }
        }
      }
    }
  }

  if (want("volume_interaction")) {
    std::ofstream t(outfile("volume_interaction.csv"));
    t << "cap_bucket,year,term,estimate,se,p,stars\n";
    for (const CapBucket bucket : {CapBucket::large, CapBucket::mid, CapBucket::small}) {
      for (const int year : {cfg.year_before, cfg.year_after}) {
        std::vector<econ::VolumeInteractionDay> cell;
        std::map<std::string, std::vector<std::size_t>> by_sym;
        std::vector<double> volumes;
        for (const auto& pr : pairs) {
          if (pr.year != year) continue;
          const auto* s = info_of_symbol(pr.symbol);
          if (!s || s->bucket != bucket) continue;
          if (std::abs(pr.r_ca) <= cfg.reversion_threshold_bps) continue;
          by_sym[pr.symbol].push_back(cell.size());
          cell.push_back(econ::VolumeInteractionDay{pr.r_ca, pr.r_on, false, false});
          volumes.push_back(pr.auction_volume);
        }
        for (const auto& [sym, idx] : by_sym) {
          std::vector<double> v;
          v.reserve(idx.size());
          for (std::size_t i : idx) v.push_back(volumes[i]);
          std::vector<std::uint8_t> q1, q4;
          econ::volume_quartile_flags(v, q1, q4);
          for (std::size_t k = 0; k < idx.size(); ++k) {
            cell[idx[k]].q1 = q1[k] != 0;
            cell[idx[k]].q4 = q4[k] != 0;
          }
        }
        try {
          const auto r = econ::fit_volume_interaction(cell);
          for (const char* term : {"slope_q4", "slope_q23", "slope_q1"}) {
            const auto* c = r.find(term);
            t << to_string(bucket) << ',' << year << ',' << term << ','
              << format_double(c->estimate) << ',' << format_double(c->se) << ','
              << format_double(c->p_value) << ',' << stars(c->p_value) << '\n';
          }
        } catch (const std::runtime_error&) {
          // cell too thin to estimate (few days or a degenerate quartile)
        }
      }
    }
  }

  // ---------------------------------------------------------- figure analogues
  {
    std::map<Date, std::array<double, 2>> daily;  // share sum, count
    std::map<Date, std::array<double, 3>> comp;   // auction, market, limit value
    for (const auto& [key, m] : ctx.days) {
      const double auc = m->auction.auction_volume_eur.value_or(0.0);
      const double intraday = m->transacted_volume_eur;
      if (auc + intraday > 0) {
        auto& a = daily[key.date];
        a[0] += auc / (auc + intraday);
        a[1] += 1;
      }
      auto& c = comp[key.date];
      c[0] += auc;
      c[1] += m->auction.executed_market_value_eur;
      c[2] += m->auction.executed_limit_value_eur;
    }
    auto rolling = [&](const std::vector<double>& xs, int w) {
      std::vector<double> out(xs.size());
      double acc = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += xs[i];
        if (i >= static_cast<std::size_t>(w)) acc -= xs[i - static_cast<std::size_t>(w)];
        out[i] = acc / std::min<double>(static_cast<double>(w), static_cast<double>(i + 1));
      }
      return out;
    };
    std::vector<Date> ds;
    std::vector<double> share;
    for (const auto& [d, a] : daily) {
      ds.push_back(d);
      share.push_back(a[1] > 0 ? a[0] / a[1] : 0.0);
    }
    const auto share_ma = rolling(share, cfg.ma_window);
    std::ofstream f1(outfile("fig_auction_share.csv"));
    f1 << "date,auction_share,auction_share_ma\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      f1 << to_string(ds[i]) << ',' << format_double(share[i]) << ','
         << format_double(share_ma[i]) << '\n';
    }
    std::vector<Date> ds2;
    std::vector<double> auc, mkt, lim;
    for (const auto& [d, c] : comp) {
      ds2.push_back(d);
      auc.push_back(c[0]);
      mkt.push_back(c[1]);
      lim.push_back(c[2]);
    }
    const auto auc_ma = rolling(auc, cfg.ma_window);
    const auto mkt_ma = rolling(mkt, cfg.ma_window);
    const auto lim_ma = rolling(lim, cfg.ma_window);
    std::ofstream f2(outfile("fig_market_vs_limit.csv"));
    f2 << "date,auction_volume_ma,market_value_ma,limit_value_ma\n";
    for (std::size_t i = 0; i < ds2.size(); ++i) {
      f2 << to_string(ds2[i]) << ',' << format_double(auc_ma[i]) << ','
         << format_double(mkt_ma[i]) << ',' << format_double(lim_ma[i]) << '\n';
    }
  }
  (void)report;
}

struct DayRecord {
  DailyStockMetrics m;
  std::optional<io::AuctionResultRow> auction_row;
  DayStats stats;
};

TradingCalendar make_calendar(const StudyConfig& cfg) {
  return cfg.calendar_path.empty()
             ? TradingCalendar::weekdays(Date{cfg.year_before, 1, 1},
                                         Date{cfg.year_after, 12, 31})
             : TradingCalendar(io::load_calendar(cfg.calendar_path));
}

}  // namespace

StudyConfig load_study_config(const std::string& path) {
  const KeyValueConfig kv = KeyValueConfig::from_file(path);
  StudyConfig cfg;
  const std::string mode = kv.get_or("mode", "simulate");
  if (mode == "replay") {
    cfg.mode = StudyConfig::Mode::replay;
  } else if (mode == "simulate") {
    cfg.mode = StudyConfig::Mode::simulate;
  } else {
    throw ConfigError("unknown study mode: " + mode);
  }
  cfg.out_dir = kv.get_or("out_dir", "out");
  cfg.events_path = kv.get_or("events", "");
  cfg.session_config_path = kv.get_or("session_config", "");
  cfg.market_caps_path = kv.get_or("market_caps", "");
  cfg.calendar_path = kv.get_or("calendar", "");
  cfg.suspensions_path = kv.get_or("suspensions", "");
  cfg.year_before = static_cast<int>(kv.get_int_or("year_before", 2017));
  cfg.year_after = static_cast<int>(kv.get_int_or("year_after", 2018));
  if (cfg.year_before == cfg.year_after) throw ConfigError("study years must differ");
  for (const int year : {cfg.year_before, cfg.year_after}) {
    const std::string key = "tick_table." + std::to_string(year);
    if (kv.has(key)) cfg.tick_tables[year] = kv.get(key);
  }
  cfg.group_factor = kv.get_double_or("group_factor", 1.5);
  cfg.reversion_threshold_bps = kv.get_double_or("reversion_threshold_bps", 10.0);
  if (kv.has("models")) {
    cfg.models.clear();
    const std::string s = kv.get("models");
    std::size_t pos = 0;
    while (pos != std::string::npos && pos < s.size()) {
      const auto next = s.find(',', pos);
      const std::string item =
          s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (!item.empty() && item != "none") cfg.models.push_back(item);
      pos = next == std::string::npos ? next : next + 1;
    }
  }
  cfg.ma_window = std::max(1, static_cast<int>(kv.get_int_or("ma_window", 10)));
  cfg.sim_stocks = static_cast<int>(kv.get_int_or("sim_stocks", 9));
  cfg.sim_days_per_year = static_cast<int>(kv.get_int_or("sim_days_per_year", 24));
  cfg.sim_seed = static_cast<std::uint64_t>(kv.get_int_or("sim_seed", 20180103));
  cfg.sim_flow.session_minutes = static_cast<int>(kv.get_int_or("sim_session_minutes", 30));
  cfg.sim_flow.events_per_minute = kv.get_double_or("sim_events_per_minute", 120.0);
  cfg.sim_flow.auction_orders = static_cast<int>(kv.get_int_or("sim_auction_orders", 60));
  return cfg;
}

StudyReport run_analysis(const std::vector<metrics::DailyStockMetrics>& rows,
                         const std::map<std::string, double>& market_caps,
                         const std::map<std::string, BandId>& symbol_bands,
                         const StudyConfig& cfg) {
  StudyReport report;
  fs::create_directories(cfg.out_dir);
  auto outfile = [&](const std::string& name) {
    const std::string p = (fs::path(cfg.out_dir) / name).string();
    report.outputs.push_back(p);
    return p;
  };
  const TradingCalendar calendar = make_calendar(cfg);
  const TickTable table_before = cfg.tick_tables.contains(cfg.year_before)
                                     ? io::load_tick_table(cfg.tick_tables.at(cfg.year_before))
                                     : default_table_before();
  const TickTable table_after = cfg.tick_tables.contains(cfg.year_after)
                                    ? io::load_tick_table(cfg.tick_tables.at(cfg.year_after))
                                    : default_table_after();
  AnalysisContext ctx;
  ctx.market_caps = &market_caps;
  ctx.symbol_bands = &symbol_bands;
  ctx.calendar = &calendar;
  ctx.table_before = &table_before;
  ctx.table_after = &table_after;
  for (const auto& m : rows) ctx.days.emplace(DayKey{m.symbol, m.date}, &m);
  io::write_metrics_csv(outfile("metrics_daily.csv"), rows);
  analyze(ctx, cfg, report, outfile);
  return report;
}

StudyReport run_study(const StudyConfig& cfg) {
  StudyReport report;
  fs::create_directories(cfg.out_dir);
  auto outfile = [&](const std::string& name) {
    const std::string p = (fs::path(cfg.out_dir) / name).string();
    report.outputs.push_back(p);
    return p;
  };

  const TradingCalendar calendar = make_calendar(cfg);
  const TickTable table_before = cfg.tick_tables.contains(cfg.year_before)
                                     ? io::load_tick_table(cfg.tick_tables.at(cfg.year_before))
                                     : default_table_before();
  const TickTable table_after = cfg.tick_tables.contains(cfg.year_after)
                                    ? io::load_tick_table(cfg.tick_tables.at(cfg.year_after))
                                    : default_table_after();
  auto table_for_year = [&](int year) -> const TickTable& {
    return year == cfg.year_before ? table_before : table_after;
  };

  std::map<DayKey, DayRecord> days;
  std::map<std::string, double> market_caps;
  std::map<std::string, BandId> symbol_band;
  std::vector<std::pair<std::string, std::string>> exclusions;

  if (cfg.mode == StudyConfig::Mode::simulate) {
    std::vector<Date> year1, year2;
    for (const Date& d : calendar.days()) {
      if (d.year == cfg.year_before && static_cast<int>(year1.size()) < cfg.sim_days_per_year) {
        year1.push_back(d);
      }
      if (d.year == cfg.year_after && static_cast<int>(year2.size()) < cfg.sim_days_per_year) {
        year2.push_back(d);
      }
    }
    std::vector<std::string> symbols;
    for (int i = 0; i < cfg.sim_stocks; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "SIM%02d", i + 1);
      symbols.emplace_back(buf);
      market_caps[buf] = 1e9 * (i + 1);
      symbol_band[buf] = static_cast<BandId>(i % 3 + 1);
    }
    // stocks independent; days within a stock chain the previous close
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(symbols.size()); ++si) {
      const std::string& sym = symbols[static_cast<std::size_t>(si)];
      const BandId band = symbol_band.at(sym);
      double prev_close = 100.0 + 2.0 * static_cast<double>(si);
      for (int yi = 0; yi < 2; ++yi) {
        const int year = yi == 0 ? cfg.year_before : cfg.year_after;
        const auto& dates = yi == 0 ? year1 : year2;
        const TickTable& table = table_for_year(year);
        for (std::size_t di = 0; di < dates.size(); ++di) {
          sim::FlowParams f = cfg.sim_flow;
          f.rng_seed = mix_seed(cfg.sim_seed,
                                static_cast<std::uint64_t>(si * 104729 + yi * 7919 +
                                                           static_cast<std::int64_t>(di)));
          f.fundamental_start_eur = prev_close;
          const auto streams = sim::generate_session(f, table, band, static_cast<StockId>(si));
          SessionConfig scfg;
          scfg.venue = auction::Venue::euronext;
          scfg.continuous_open = 0;
          scfg.continuous_close = streams.continuous_end;
          scfg.clear_window_begin = streams.auction_end - 30LL * 1'000'000'000;
          scfg.clear_window_end = streams.auction_end;
          scfg.auction_seed = f.rng_seed;
          scfg.band = band;
          const Micros tick = table.lookup(micros_from_eur(prev_close), band);
          scfg.previous_close[sym] = snap_to_grid(prev_close, tick, SnapPolicy::round_nearest);
          const auto flags = calendar.flags(dates[di]);
          auto day = run_day(sym, dates[di], streams.continuous, streams.auction, table, scfg,
                             cfg.metrics_cfg, flags.third_friday, flags.month_end);
          if (day.auction && day.auction->cleared) {
            prev_close = day.auction->clearing_price.eur();
          }
          DayRecord rec;
          rec.m = day.metrics;
          rec.stats = day.stats;
          if (day.auction) {
            rec.auction_row = io::AuctionResultRow{sym, dates[di], scfg.venue, *day.auction};
          }
#pragma omp critical
          days.emplace(DayKey{sym, dates[di]}, std::move(rec));
        }
      }
    }
  } else {
    if (cfg.events_path.empty()) throw ConfigError("replay mode needs events=");
    SessionConfig scfg =
        cfg.session_config_path.empty()
            ? SessionConfig{}
            : SessionConfig::from_kv(KeyValueConfig::from_file(cfg.session_config_path));
    if (!cfg.market_caps_path.empty()) {
      for (const auto& row : io::read_csv(cfg.market_caps_path)) {
        if (row.size() >= 2 && row[0] != "symbol") market_caps[row[0]] = std::stod(row[1]);
      }
    }
    const auto rows = io::load_event_log(cfg.events_path);
    std::map<std::string, std::map<Date, std::pair<std::vector<engine::EngineEvent>,
                                                   std::vector<engine::EngineEvent>>>>
        feed;
    for (const auto& row : rows) {
      const Date d = date_from_ns(row.event.order.timestamp);
      const TimestampNs tod = row.event.order.timestamp - ns_at_midnight(d);
      engine::EngineEvent e = row.event;
      e.order.timestamp = tod;
      auto& slot = feed[row.symbol][d];
      if (tod < scfg.continuous_close) {
        slot.first.push_back(e);
      } else {
        slot.second.push_back(e);
      }
    }
    for (auto& [sym, by_date] : feed) {
      SessionConfig day_cfg = scfg;
      std::optional<Price> rolling_close;
      for (auto& [date, streams] : by_date) {
        // feeds are normally time-ordered; tolerate shuffled files
        auto by_ts = [](const engine::EngineEvent& a, const engine::EngineEvent& b) {
          return a.order.timestamp < b.order.timestamp;
        };
        std::stable_sort(streams.first.begin(), streams.first.end(), by_ts);
        std::stable_sort(streams.second.begin(), streams.second.end(), by_ts);
        const int year = date.year;
        if (year != cfg.year_before && year != cfg.year_after) {
          exclusions.emplace_back(sym + "/" + to_string(date), "outside_study_years");
          continue;
        }
        const TickTable& table = table_for_year(year);
        if (rolling_close) day_cfg.previous_close[sym] = *rolling_close;
        const auto flags = calendar.flags(date);
        auto day = run_day(sym, date, streams.first, streams.second, table, day_cfg,
                           cfg.metrics_cfg, flags.third_friday, flags.month_end);
        if (day.skipped_auction_reason) {
          exclusions.emplace_back(sym + "/" + to_string(date), *day.skipped_auction_reason);
        }
        if (day.auction && day.auction->cleared) {
          rolling_close = day.auction->clearing_price;
        }
        DayRecord rec;
        rec.m = day.metrics;
        rec.stats = day.stats;
        if (day.auction) {
          rec.auction_row = io::AuctionResultRow{sym, date, day_cfg.venue, *day.auction};
        }
        days.emplace(DayKey{sym, date}, std::move(rec));
      }
      symbol_band[sym] = scfg.band;
    }
  }

  std::vector<DailyStockMetrics> metric_rows;
  std::vector<io::AuctionResultRow> auction_rows;
  for (const auto& [key, rec] : days) {
    metric_rows.push_back(rec.m);
    if (rec.auction_row) auction_rows.push_back(*rec.auction_row);
    report.invariant_violations += rec.stats.conservation_violations;
    if (rec.stats.residual_crossed) ++report.invariant_violations;
  }
  io::write_metrics_csv(outfile("metrics_daily.csv"), metric_rows);
  io::write_auction_results_csv(outfile("auction_results.csv"), auction_rows);

  AnalysisContext ctx;
  ctx.market_caps = &market_caps;
  ctx.symbol_bands = &symbol_band;
  ctx.calendar = &calendar;
  ctx.table_before = &table_before;
  ctx.table_after = &table_after;
  ctx.exclusions = std::move(exclusions);
  for (const auto& [key, rec] : days) ctx.days.emplace(key, &rec.m);
  analyze(ctx, cfg, report, outfile);
  return report;
}

}  // namespace auctionlab::study
