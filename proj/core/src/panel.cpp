#include "crisisdyn/panel.hpp"

#include <algorithm>
#include <cmath>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

void CrisisWindow::validate() const {
  if (!is_valid_date(start) || !is_valid_date(end)) {
    throw ConfigError("crisis window '" + name + "' has an invalid date");
  }
  if (!(start < end)) {
    throw ConfigError("crisis window '" + name + "': start " + to_string(start) +
                      " must precede end " + to_string(end));
  }
}

PricePanel::PricePanel(std::vector<Date> dates, std::vector<std::string> tickers,
                       std::vector<int> sector_ids, Eigen::MatrixXd prices)
    : dates_(std::move(dates)),
      tickers_(std::move(tickers)),
      sector_ids_(std::move(sector_ids)),
      prices_(std::move(prices)) {
  const auto n_dates = static_cast<Eigen::Index>(dates_.size());
  const auto n_assets = static_cast<Eigen::Index>(tickers_.size());
  if (prices_.rows() != n_dates || prices_.cols() != n_assets) {
    throw DataError("price matrix shape does not match dates x tickers");
  }
  if (n_dates == 0 || n_assets == 0) {
    throw DataError("price panel must contain at least one date and one ticker");
  }
  if (sector_ids_.size() != tickers_.size()) {
    throw DataError("sector assignment missing for some tickers");
  }
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i])) {
      throw DataError("panel dates must be strictly increasing (violation at " +
                      to_string(dates_[i]) + ")");
    }
  }
  for (std::size_t i = 0; i < sector_ids_.size(); ++i) {
    if (sector_ids_[i] < 0 || sector_ids_[i] >= SectorUniverse::kCount) {
      throw DataError("ticker '" + tickers_[i] + "' has an out-of-range sector id");
    }
  }
  for (Eigen::Index j = 0; j < n_assets; ++j) {
    for (Eigen::Index t = 0; t < n_dates; ++t) {
      const double p = prices_(t, j);
      if (!std::isfinite(p) || p <= 0.0) {
        throw DataError("nonpositive or non-finite price for ticker '" +
                        tickers_[static_cast<std::size_t>(j)] + "' on " +
                        to_string(dates_[static_cast<std::size_t>(t)]));
      }
    }
  }
  ticker_index_.reserve(tickers_.size());
  for (std::size_t i = 0; i < tickers_.size(); ++i) {
    if (!ticker_index_.emplace(tickers_[i], static_cast<Eigen::Index>(i)).second) {
      throw DataError("duplicate ticker '" + tickers_[i] + "' in panel");
    }
  }
}

std::optional<Eigen::Index> PricePanel::index_of(std::string_view ticker) const {
  auto it = ticker_index_.find(std::string(ticker));
  if (it == ticker_index_.end()) return std::nullopt;
  return it->second;
}

std::string_view PricePanel::sector_of(std::string_view ticker) const {
  auto idx = index_of(ticker);
  if (!idx) throw DataError("unknown ticker '" + std::string(ticker) + "'");
  return SectorUniverse::names()[static_cast<std::size_t>(
      sector_ids_[static_cast<std::size_t>(*idx)])];
}

std::array<int, SectorUniverse::kCount> PricePanel::sector_counts() const {
  std::array<int, SectorUniverse::kCount> counts{};
  for (int id : sector_ids_) ++counts[static_cast<std::size_t>(id)];
  return counts;
}

std::vector<Eigen::Index> PricePanel::assets_in_sector(int sector_id) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < sector_ids_.size(); ++i) {
    if (sector_ids_[i] == sector_id) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

bool PricePanel::operator==(const PricePanel& other) const {
  return dates_ == other.dates_ && tickers_ == other.tickers_ &&
         sector_ids_ == other.sector_ids_ && prices_ == other.prices_;
}

PricePanel slice_window(const PricePanel& panel, const CrisisWindow& window) {
  window.validate();
  const auto& dates = panel.dates();
  auto lo = std::lower_bound(dates.begin(), dates.end(), window.start);
  auto hi = std::upper_bound(dates.begin(), dates.end(), window.end);
  if (lo >= hi) {
    throw DataError("crisis window '" + window.name + "' (" + to_string(window.start) +
                    " .. " + to_string(window.end) + ") does not intersect panel dates " +
                    to_string(dates.front()) + " .. " + to_string(dates.back()));
  }
  const auto first = static_cast<Eigen::Index>(lo - dates.begin());
  const auto count = static_cast<Eigen::Index>(hi - lo);
  std::vector<Date> sliced_dates(lo, hi);
  Eigen::MatrixXd sliced = panel.prices().middleRows(first, count);
  return PricePanel(std::move(sliced_dates), panel.tickers(), panel.sector_ids(),
                    std::move(sliced));
}

}  // namespace crisisdyn
