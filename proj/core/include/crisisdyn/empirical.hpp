#pragma once

#include <span>
#include <vector>

namespace crisisdyn {

/// Number of midpoint quantiles used for W1 evaluation and operator fitting.
inline constexpr int kQuantileGridSize = 1000;

/// A sorted empirical sample with quantile-function access; the unit of all
/// one-dimensional Wasserstein computations.
class EmpiricalDistribution {
 public:
  /// Sorts the sample. Throws DataError if empty or not all finite.
  explicit EmpiricalDistribution(std::vector<double> sample);

  const std::vector<double>& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }

  double min() const { return sample_.front(); }
  double max() const { return sample_.back(); }
  bool is_point_mass() const { return sample_.front() == sample_.back(); }

  /// Quantile by linear interpolation of order statistics: for u in [0,1],
  /// h = u*(n-1), q = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)]).
  double quantile(double u) const;

  /// Quantiles at the m midpoints u_j = (j - 1/2) / m, j = 1..m.
  std::vector<double> quantile_grid(int m = kQuantileGridSize) const;

  /// Interquartile range; may be 0 for heavily tied samples.
  double iqr() const;

 private:
  std::vector<double> sample_;
};

/// Pools several samples into one distribution.
EmpiricalDistribution pool_samples(std::span<const std::span<const double>> parts);

/// Order-1 Wasserstein distance: the average absolute difference of the two
/// quantile functions over the m-point midpoint grid.
double wasserstein1(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                    int m = kQuantileGridSize);

/// Same metric on precomputed quantile grids of equal length.
double wasserstein1_grids(std::span<const double> qf, std::span<const double> qg);

/// Median with the even-size convention used throughout: mean of the two
/// central order statistics. Input need not be sorted (copied internally).
double median_of(std::vector<double> values);

}  // namespace crisisdyn
