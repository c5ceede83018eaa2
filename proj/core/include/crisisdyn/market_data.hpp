#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crisisdyn/panel.hpp"

namespace crisisdyn {

struct DroppedTicker {
  std::string ticker;
  std::string reason;
};

struct LoadResult {
  PricePanel panel;
  std::vector<DroppedTicker> dropped;
};

/// Loads a long-format price CSV (`date,ticker,close`) and a sector map CSV
/// (`ticker,sector`), aligns them and returns a complete panel.
///
/// The date axis is the set of observed dates clipped to the intersection of
/// all tickers' first/last dates; tickers missing any axis date are dropped
/// (no imputation) and reported. Malformed rows, nonpositive prices, unknown
/// sector labels and an empty result all raise DataError naming the offending
/// row or file.
LoadResult load_panel(const std::filesystem::path& prices_csv,
                      const std::filesystem::path& sectors_csv);

/// The crisis windows shipped as defaults: Dot-com, GFC, COVID-19 and Ukraine
/// plus the Dot-com super-bubble and peak-COVID sub-periods.
std::vector<CrisisWindow> default_crises();

/// Finds a window by name; throws ConfigError listing available names.
const CrisisWindow& find_crisis(std::span<const CrisisWindow> crises, std::string_view name);

}  // namespace crisisdyn
