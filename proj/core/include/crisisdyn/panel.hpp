#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crisisdyn/dates.hpp"
#include "crisisdyn/sectors.hpp"

namespace crisisdyn {

/// A named analysis window, inclusive on both ends.
struct CrisisWindow {
  std::string name;
  Date start;
  Date end;

  /// Throws ConfigError unless start < end.
  void validate() const;
};

/// Aligned panel of daily closing prices. Immutable after construction; the
/// constructor enforces the invariants (strictly increasing dates, strictly
/// positive finite prices, complete matrix, known sector per ticker), so any
/// PricePanel in circulation is safe to share across threads.
class PricePanel {
 public:
  /// sector_ids are indices into SectorUniverse, one per ticker.
  /// Throws DataError on any invariant violation.
  PricePanel(std::vector<Date> dates, std::vector<std::string> tickers,
             std::vector<int> sector_ids, Eigen::MatrixXd prices);

  const std::vector<Date>& dates() const { return dates_; }
  const std::vector<std::string>& tickers() const { return tickers_; }
  const std::vector<int>& sector_ids() const { return sector_ids_; }

  /// Rows are dates, columns are tickers.
  const Eigen::MatrixXd& prices() const { return prices_; }

  Eigen::Index n_dates() const { return prices_.rows(); }
  Eigen::Index n_assets() const { return prices_.cols(); }

  std::optional<Eigen::Index> index_of(std::string_view ticker) const;

  /// Sector name for a ticker; throws DataError if the ticker is unknown.
  std::string_view sector_of(std::string_view ticker) const;

  /// Ticker counts per sector, in SectorUniverse order.
  std::array<int, SectorUniverse::kCount> sector_counts() const;

  /// Column indices of the tickers in a given sector, ascending.
  std::vector<Eigen::Index> assets_in_sector(int sector_id) const;

  bool operator==(const PricePanel& other) const;

 private:
  std::vector<Date> dates_;
  std::vector<std::string> tickers_;
  std::vector<int> sector_ids_;
  Eigen::MatrixXd prices_;
  std::unordered_map<std::string, Eigen::Index> ticker_index_;
};

/// Rows restricted to dates within [window.start, window.end]; tickers
/// unchanged. Throws DataError if the slice is empty. Idempotent.
PricePanel slice_window(const PricePanel& panel, const CrisisWindow& window);

}  // namespace crisisdyn
