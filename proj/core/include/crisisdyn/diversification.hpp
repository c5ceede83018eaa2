#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crisisdyn/panel.hpp"
#include "crisisdyn/rng.hpp"

namespace crisisdyn {

/// Parameters of the (w, a) random-portfolio sampling experiment: for every
/// cell, `draws` portfolios of w equities from each of a sectors are drawn
/// and the median normalized leading eigenvalue of each portfolio's rolling
/// correlation matrix is tracked through time.
struct SamplingConfig {
  int w_min = 2;
  int w_max = 9;
  int a_min = 2;
  int a_max = 9;
  int draws = 1000;        // D portfolios per (w, a)
  int window = 60;         // rolling window S
  std::uint64_t seed = 0;
  int max_redraws = 100;   // budget for resampling degenerate portfolios

  void validate() const;   // ConfigError on violation
};

/// Grid of mu[a][w] = temporal mean of the median collectivity, with rows
/// indexed by the number of sectors a and columns by equities per sector w
/// (matching the published table orientation).
struct DiversificationTable {
  int w_min = 2, w_max = 9, a_min = 2, a_max = 9;
  Eigen::MatrixXd mu;  // (a_max - a_min + 1) x (w_max - w_min + 1)

  double at(int w, int a) const { return mu(a - a_min, w - w_min); }
  double& at(int w, int a) { return mu(a - a_min, w - w_min); }
  int n_w() const { return w_max - w_min + 1; }
  int n_a() const { return a_max - a_min + 1; }
};

struct GreedyStep {
  int w = 0;
  int a = 0;
  double mu = 0.0;
};
using GreedyPath = std::vector<GreedyStep>;

/// Draws a random (w, a)-portfolio: a distinct sectors uniformly among the
/// sectors holding at least w tickers, then w distinct tickers uniformly
/// within each. Returns column indices sorted ascending. Throws ConfigError
/// (listing per-sector counts) when fewer than a sectors are eligible.
std::vector<Eigen::Index> sample_portfolio_indices(Rng& rng, const PricePanel& panel, int w,
                                                   int a);

/// Same draw, as ticker names.
std::vector<std::string> sample_portfolio(Rng& rng, const PricePanel& panel, int w, int a);

struct MedianSeries {
  std::vector<Date> stamps;
  std::vector<double> values;  // median over draws of the normalized leading eigenvalue
  long rejected_draws = 0;
};

/// The median collectivity series for one (w, a) cell over the given panel
/// slice. Portfolios are held fixed across time within a draw; draws hitting
/// a zero-variance window are redrawn (up to max_redraws, then DataError).
MedianSeries median_collectivity(const PricePanel& slice, const SamplingConfig& config, int w,
                                 int a, int threads = 1);

struct DiversificationResult {
  DiversificationTable table;
  std::vector<Date> stamps;
  long rejected_draws = 0;
  /// Per-cell median series in row-major (a, w) order when requested.
  std::optional<std::vector<std::vector<double>>> median_series;
};

/// The full mu grid: deterministic in (seed, config, panel), independent of
/// thread count.
DiversificationResult mu_table(const PricePanel& slice, const SamplingConfig& config,
                               int threads = 1, bool keep_series = false);

/// Greedy staircase from (w_min, a_min): each step moves to whichever of
/// (w+1, a), (w, a+1) has the smaller mu — ties increment w — and stops when
/// no admissible move strictly decreases mu.
GreedyPath greedy_path(const DiversificationTable& table);

struct Marginals {
  std::vector<int> values;      // w or a value per entry (w_min..w_max)
  std::vector<double> mu_by_w;  // mu_{w,.} = E_a mu_{w,a}
  std::vector<double> mu_by_a;  // mu_{.,a} = E_w mu_{w,a}
};

/// Row and column averages of the grid (requires a square w/a range).
Marginals marginal_means(const DiversificationTable& table);

}  // namespace crisisdyn
