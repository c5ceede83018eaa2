#include "crisisdyn/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_price(const std::string& text, const std::string& context) {
  const std::string t = strip(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || t.empty()) {
    throw DataError(context + ": cannot parse price '" + text + "'");
  }
  if (!std::isfinite(value) || value <= 0.0) {
    throw DataError(context + ": nonpositive price " + t);
  }
  return value;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

}  // namespace

LoadResult load_panel(const std::filesystem::path& prices_csv,
                      const std::filesystem::path& sectors_csv) {
  // Sector map first: ticker -> sector id.
  std::map<std::string, int> sector_of;
  {
    std::ifstream in = open_or_throw(sectors_csv);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      line = strip(line);
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (row == 1) {
        if (fields.size() != 2 || strip(fields[0]) != "ticker" || strip(fields[1]) != "sector") {
          throw DataError(sectors_csv.string() + " row 1: expected header 'ticker,sector'");
        }
        continue;
      }
      if (fields.size() != 2) {
        throw DataError(sectors_csv.string() + " row " + std::to_string(row) +
                        ": expected 2 fields, got " + std::to_string(fields.size()));
      }
      const std::string ticker = strip(fields[0]);
      const std::string sector = strip(fields[1]);
      auto id = SectorUniverse::index_of(sector);
      if (!id) {
        throw DataError(sectors_csv.string() + " row " + std::to_string(row) +
                        ": unknown sector label '" + sector + "' (expected one of: " +
                        SectorUniverse::names_joined() + ")");
      }
      if (ticker.empty()) {
        throw DataError(sectors_csv.string() + " row " + std::to_string(row) + ": empty ticker");
      }
      sector_of[ticker] = *id;
    }
  }

  // Price rows: per-ticker date -> close.
  std::map<std::string, std::map<Date, double>> series;
  {
    std::ifstream in = open_or_throw(prices_csv);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      line = strip(line);
      if (line.empty()) continue;
      const std::string context = prices_csv.string() + " row " + std::to_string(row);
      auto fields = split_csv_line(line);
      if (row == 1) {
        if (fields.size() != 3 || strip(fields[0]) != "date" || strip(fields[1]) != "ticker" ||
            strip(fields[2]) != "close") {
          throw DataError(prices_csv.string() + " row 1: expected header 'date,ticker,close'");
        }
        continue;
      }
      if (fields.size() != 3) {
        throw DataError(context + ": expected 3 fields, got " + std::to_string(fields.size()));
      }
      auto date = try_parse_date(strip(fields[0]));
      if (!date) throw DataError(context + ": invalid date '" + strip(fields[0]) + "'");
      const std::string ticker = strip(fields[1]);
      if (ticker.empty()) throw DataError(context + ": empty ticker");
      if (sector_of.find(ticker) == sector_of.end()) {
        throw DataError(context + ": ticker '" + ticker + "' has no sector label in " +
                        sectors_csv.string());
      }
      const double price = parse_price(fields[2], context);
      auto [it, inserted] = series[ticker].emplace(*date, price);
      if (!inserted) {
        throw DataError(context + ": duplicate price for ticker '" + ticker + "' on " +
                        to_string(*date));
      }
    }
  }
  if (series.empty()) throw DataError(prices_csv.string() + ": no price rows");

  // Intersection of all tickers' [first, last] date ranges.
  Date range_start = series.begin()->second.begin()->first;
  Date range_end = series.begin()->second.rbegin()->first;
  for (const auto& [ticker, obs] : series) {
    range_start = std::max(range_start, obs.begin()->first);
    range_end = std::min(range_end, obs.rbegin()->first);
  }
  if (range_end < range_start) {
    throw DataError(prices_csv.string() + ": tickers' date ranges have empty intersection");
  }

  // Date axis: every date observed for any ticker within the intersection.
  std::vector<Date> axis;
  {
    std::map<Date, bool> seen;
    for (const auto& [ticker, obs] : series) {
      for (auto it = obs.lower_bound(range_start); it != obs.end() && !(range_end < it->first);
           ++it) {
        seen[it->first] = true;
      }
    }
    axis.reserve(seen.size());
    for (const auto& [d, _] : seen) axis.push_back(d);
  }

  // Keep tickers with complete coverage on the axis; report the rest.
  std::vector<std::string> kept;
  std::vector<DroppedTicker> dropped;
  for (const auto& [ticker, obs] : series) {
    const Date* missing = nullptr;
    for (const Date& d : axis) {
      if (obs.find(d) == obs.end()) {
        missing = &d;
        break;
      }
    }
    if (missing) {
      dropped.push_back({ticker, "missing price on " + to_string(*missing)});
    } else {
      kept.push_back(ticker);
    }
  }
  if (kept.empty()) {
    throw DataError(prices_csv.string() +
                    ": no ticker has complete coverage on the common date axis "
                    "(empty intersection)");
  }

  Eigen::MatrixXd prices(static_cast<Eigen::Index>(axis.size()),
                         static_cast<Eigen::Index>(kept.size()));
  std::vector<int> sector_ids;
  sector_ids.reserve(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const auto& obs = series[kept[j]];
    for (std::size_t t = 0; t < axis.size(); ++t) {
      prices(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = obs.at(axis[t]);
    }
    sector_ids.push_back(sector_of.at(kept[j]));
  }

  return LoadResult{PricePanel(std::move(axis), std::move(kept), std::move(sector_ids),
                               std::move(prices)),
                    std::move(dropped)};
}

std::vector<CrisisWindow> default_crises() {
  return {
      {"Dot-com", {2000, 3, 1}, {2002, 10, 1}},
      {"Dot-com super-bubble", {2000, 3, 1}, {2000, 3, 31}},
      {"GFC", {2007, 1, 3}, {2010, 5, 3}},
      {"COVID-19", {2020, 3, 11}, {2020, 8, 31}},
      {"COVID-19 peak", {2020, 3, 11}, {2020, 5, 29}},
      {"Ukraine", {2022, 1, 3}, {2022, 5, 13}},
  };
}

const CrisisWindow& find_crisis(std::span<const CrisisWindow> crises, std::string_view name) {
  for (const auto& c : crises) {
    if (c.name == name) return c;
  }
  std::string available;
  for (const auto& c : crises) {
    if (!available.empty()) available += ", ";
    available += c.name;
  }
  throw ConfigError("unknown crisis '" + std::string(name) + "' (available: " + available + ")");
}

}  // namespace crisisdyn
