#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crisisdyn/panel.hpp"

namespace crisisdyn {

/// Parameters of the random equal-weight portfolio search.
struct SearchConfig {
  long n_draws = 100000;
  int portfolio_size = 40;     // k; weights fixed at 1/k
  double top_fraction = 0.01;  // retained share of draws, by Sharpe ratio
  double risk_free_rate = 0.0; // daily
  std::uint64_t seed = 0;
  bool exhaustive = false;     // enumerate every k-subset exactly once instead of sampling
  int max_redraws = 100;

  void validate() const;  // ConfigError on violation
};

/// Probability vector over the 11-sector universe.
class SectorAllocation {
 public:
  /// Validates nonnegativity and that the entries sum to 1 within
  /// sum_tolerance (loosen it for externally transcribed percentage data).
  explicit SectorAllocation(std::vector<double> proportions, double sum_tolerance = 1e-12);

  const std::vector<double>& proportions() const { return proportions_; }
  double operator[](std::size_t i) const { return proportions_[i]; }

 private:
  std::vector<double> proportions_;
};

/// Half the L1 distance between two vectors of equal length (the discrete
/// Wasserstein / total-variation distance for probability vectors).
double half_l1_distance(std::span<const double> p, std::span<const double> q);

/// Metric on sector allocations: 0 iff identical, 1 iff disjoint supports.
double allocation_distance(const SectorAllocation& p, const SectorAllocation& q);

/// Sharpe ratio of the equal-weight portfolio of the given tickers over the
/// slice: mean daily portfolio log return minus the risk-free rate, divided
/// by the sample standard deviation (ddof 1). Throws DataError on unknown
/// tickers or a constant portfolio return series.
double portfolio_sharpe(const PricePanel& slice, std::span<const std::string> tickers,
                        double risk_free_rate);

struct RankedPortfolio {
  long draw_index = 0;
  double sharpe = 0.0;
  std::vector<Eigen::Index> assets;  // column indices, ascending
};

struct SearchResult {
  std::vector<RankedPortfolio> top;  // descending Sharpe; ties favor earlier draws
  SectorAllocation allocation;       // pooled constituent slots of the retained portfolios
  long n_draws = 0;
  long retained = 0;
  long rejected_draws = 0;
};

/// Samples n_draws uniform k-subsets (duplicates across draws allowed),
/// ranks them by Sharpe ratio and pools the top fraction's constituents into
/// a sector allocation. Deterministic in (seed, config, panel) and
/// independent of thread count.
SearchResult run_search(const PricePanel& slice, const SearchConfig& config, int threads = 1);

/// Sector shares by ticker count (the "index" column).
SectorAllocation index_allocation(const PricePanel& panel);

struct AllocationMatrix {
  std::vector<std::string> labels;           // crisis names + "Index"
  std::vector<SectorAllocation> allocations; // same order as labels
  Eigen::MatrixXd distances;
};

/// Runs the search per crisis, appends the index allocation and returns the
/// pairwise allocation-distance matrix.
AllocationMatrix crisis_allocation_matrix(const PricePanel& panel,
                                          std::span<const CrisisWindow> crises,
                                          const SearchConfig& config, int threads = 1);

}  // namespace crisisdyn
