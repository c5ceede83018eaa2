#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "crisisdyn/empirical.hpp"
#include "crisisdyn/panel.hpp"

namespace crisisdyn {

/// Daily log returns aligned to a price panel; one fewer row than the panel.
struct ReturnPanel {
  std::vector<Date> dates;  // date of each return observation (second day of the pair)
  std::vector<std::string> tickers;
  std::vector<int> sector_ids;
  Eigen::MatrixXd returns;  // T x N
};

/// returns[t][i] = ln(p_i(t+1) / p_i(t)). Throws DataError if the panel has
/// fewer than two dates.
ReturnPanel log_returns(const PricePanel& panel);

/// Standardizes the window of rows [t - window + 1, t] (0-based, inclusive)
/// column by column to mean 0 and sample standard deviation 1 (ddof = 1).
/// Throws DataError naming the ticker if a column is constant in the window.
Eigen::MatrixXd standardize_window(const ReturnPanel& returns, Eigen::Index t, int window);

/// Correlation matrix of one rolling window.
struct CorrelationMatrix {
  Date stamp;       // date of the window's last observation
  Eigen::Index t;   // return-row index of the window end
  Eigen::MatrixXd values;

  /// Checks unit diagonal, symmetry, range and positive semidefiniteness
  /// (eigenvalues >= -psd_tol). Throws NumericalError on violation.
  void validate(double diag_tol = 1e-9, double psd_tol = 1e-8) const;
};

/// One correlation matrix per window end t = window-1 .. T-1, computed as
/// (1/(window-1)) * B^T B on the standardized block, which makes diagonals
/// exactly 1. Memory is O((T - window + 1) * N^2); use collectivity_series
/// for large panels.
std::vector<CorrelationMatrix> rolling_correlation(const ReturnPanel& returns, int window);

/// Eigenvalues of a correlation matrix, sorted descending and normalized by
/// their sum. Eigenvalues in (-psd_tol, 0) are clamped to zero; anything
/// below -psd_tol raises NumericalError.
std::vector<double> eigen_spectrum(const CorrelationMatrix& matrix);

/// Normalized leading eigenvalue lambda_1 / trace of a symmetric PSD matrix.
double normalized_leading_eigenvalue(const Eigen::MatrixXd& correlation);

/// Per-timestep normalized spectra of the rolling correlation matrices.
struct CollectivitySeries {
  std::vector<Date> stamps;
  std::vector<std::vector<double>> spectra;  // each sorted descending, sums to 1
};

/// Streaming computation of the full spectra series; parallel over timesteps,
/// output independent of thread count.
CollectivitySeries collectivity_series(const ReturnPanel& returns, int window, int threads = 1);

/// Normalized leading eigenvalue for every rolling window of a (T x k) return
/// block. Uses running window moments and warm-started power iteration, so it
/// is much faster than assembling each matrix and solving; agrees with
/// eigen_spectrum to ~1e-9. The block must have no constant-window column.
std::vector<double> leading_eigen_series(const Eigen::MatrixXd& block, int window);

/// Full-window Pearson correlations of all ticker pairs in the slice: the
/// N(N-1)/2 upper-triangle coefficients as a sorted sample. Requires at least
/// three dates in the window.
EmpiricalDistribution correlation_distribution(const PricePanel& panel,
                                               const CrisisWindow& window);

/// Per-asset flags: true if the asset's returns are constant over any length-
/// `window` rolling window (which would make standardization degenerate).
std::vector<bool> degenerate_window_flags(const Eigen::MatrixXd& returns, int window);

}  // namespace crisisdyn
