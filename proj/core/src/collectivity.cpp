#include "crisisdyn/collectivity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "crisisdyn/errors.hpp"
#include "crisisdyn/parallel.hpp"

namespace crisisdyn {

namespace {

constexpr double kPsdTol = 1e-8;

/// Correlation matrix of the window ending at return row t (inclusive).
Eigen::MatrixXd window_correlation(const ReturnPanel& returns, Eigen::Index t, int window) {
  const Eigen::MatrixXd block = standardize_window(returns, t, window);
  Eigen::MatrixXd corr = (block.transpose() * block) / static_cast<double>(window - 1);
  const Eigen::Index n = corr.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Symmetrize and clamp floating-point spill outside [-1, 1].
      const double v = std::clamp(0.5 * (corr(i, j) + corr(j, i)), -1.0, 1.0);
      corr(i, j) = v;
      corr(j, i) = v;
    }
  }
  return corr;
}

std::vector<double> spectrum_of(const Eigen::MatrixXd& corr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge on a correlation matrix");
  }
  const auto& raw = solver.eigenvalues();  // ascending
  const Eigen::Index n = raw.size();
  std::vector<double> values(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = raw(n - 1 - i);
    if (v < 0.0) {
      if (v < -kPsdTol) {
        throw NumericalError("correlation matrix is not positive semidefinite (eigenvalue " +
                             std::to_string(v) + ")");
      }
      v = 0.0;
    }
    values[static_cast<std::size_t>(i)] = v;
    sum += v;
  }
  if (!(sum > 0.0)) throw NumericalError("correlation matrix has zero eigenvalue sum");
  for (double& v : values) v /= sum;
  return values;
}

}  // namespace

ReturnPanel log_returns(const PricePanel& panel) {
  const Eigen::Index T = panel.n_dates();
  if (T < 2) throw DataError("log returns require at least two dates");
  const Eigen::Index n = panel.n_assets();
  ReturnPanel out;
  out.dates.assign(panel.dates().begin() + 1, panel.dates().end());
  out.tickers = panel.tickers();
  out.sector_ids = panel.sector_ids();
  out.returns.resize(T - 1, n);
  const auto& p = panel.prices();
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.returns(t, j) = std::log(p(t + 1, j) / p(t, j));
    }
  }
  return out;
}

Eigen::MatrixXd standardize_window(const ReturnPanel& returns, Eigen::Index t, int window) {
  if (window < 2) throw ConfigError("window must be >= 2");
  if (t < window - 1 || t >= returns.returns.rows()) {
    throw ConfigError("window end " + std::to_string(t) + " out of range for " +
                      std::to_string(returns.returns.rows()) + " return rows");
  }
  Eigen::MatrixXd block = returns.returns.middleRows(t - window + 1, window);
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    auto col = block.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      throw DataError("zero-variance returns for ticker '" +
                      returns.tickers[static_cast<std::size_t>(j)] + "' in window ending " +
                      to_string(returns.dates[static_cast<std::size_t>(t)]));
    }
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / (window - 1));
    if (!(sd > 0.0)) {
      throw DataError("zero-variance returns for ticker '" +
                      returns.tickers[static_cast<std::size_t>(j)] + "' in window ending " +
                      to_string(returns.dates[static_cast<std::size_t>(t)]));
    }
    col /= sd;
  }
  return block;
}

void CorrelationMatrix::validate(double diag_tol, double psd_tol) const {
  const Eigen::Index n = values.rows();
  if (n != values.cols()) throw NumericalError("correlation matrix is not square");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values(i, i) - 1.0) > diag_tol) {
      throw NumericalError("correlation diagonal deviates from 1 at index " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
        throw NumericalError("correlation entry out of [-1, 1]");
      }
      if (values(i, j) != values(j, i)) throw NumericalError("correlation matrix not symmetric");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(values, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  if (solver.eigenvalues()(0) < -psd_tol) {
    throw NumericalError("correlation matrix is not positive semidefinite");
  }
}

std::vector<CorrelationMatrix> rolling_correlation(const ReturnPanel& returns, int window) {
  const Eigen::Index T = returns.returns.rows();
  if (window < 2) throw ConfigError("window must be >= 2");
  if (T < window) {
    throw DataError("need at least " + std::to_string(window) + " return rows, have " +
                    std::to_string(T));
  }
  std::vector<CorrelationMatrix> out;
  out.reserve(static_cast<std::size_t>(T - window + 1));
  for (Eigen::Index t = window - 1; t < T; ++t) {
    out.push_back({returns.dates[static_cast<std::size_t>(t)], t,
                   window_correlation(returns, t, window)});
  }
  return out;
}

std::vector<double> eigen_spectrum(const CorrelationMatrix& matrix) {
  return spectrum_of(matrix.values);
}

double normalized_leading_eigenvalue(const Eigen::MatrixXd& correlation) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(correlation, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge");
  }
  const double trace = correlation.trace();
  if (!(trace > 0.0)) throw NumericalError("matrix trace must be positive");
  return solver.eigenvalues()(solver.eigenvalues().size() - 1) / trace;
}

CollectivitySeries collectivity_series(const ReturnPanel& returns, int window, int threads) {
  const Eigen::Index T = returns.returns.rows();
  if (window < 2) throw ConfigError("window must be >= 2");
  if (T < window) {
    throw DataError("need at least " + std::to_string(window) + " return rows, have " +
                    std::to_string(T));
  }
  const auto steps = static_cast<std::size_t>(T - window + 1);
  CollectivitySeries series;
  series.stamps.resize(steps);
  series.spectra.resize(steps);
  parallel_for(steps, threads, [&](std::size_t i) {
    const Eigen::Index t = window - 1 + static_cast<Eigen::Index>(i);
    series.stamps[i] = returns.dates[static_cast<std::size_t>(t)];
    series.spectra[i] = spectrum_of(window_correlation(returns, t, window));
  });
  return series;
}

std::vector<double> leading_eigen_series(const Eigen::MatrixXd& block, int window) {
  const Eigen::Index T = block.rows();
  const Eigen::Index k = block.cols();
  if (window < 2) throw ConfigError("window must be >= 2");
  if (T < window) throw DataError("return block shorter than the rolling window");

  const double S = static_cast<double>(window);
  Eigen::VectorXd sums = block.topRows(window).colwise().sum();
  Eigen::MatrixXd cross = block.topRows(window).transpose() * block.topRows(window);

  Eigen::MatrixXd corr(k, k);
  Eigen::VectorXd inv_sd(k);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
  Eigen::VectorXd w(k);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(T - window + 1));
  const double tol = 1e-12 * static_cast<double>(k);

  for (Eigen::Index t = window - 1; t < T; ++t) {
    if (t > window - 1) {
      const auto added = block.row(t);
      const auto removed = block.row(t - window);
      sums += (added - removed).transpose();
      cross += added.transpose() * added - removed.transpose() * removed;
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      const double var = cross(i, i) - sums(i) * sums(i) / S;
      if (!(var > 0.0)) {
        throw NumericalError("degenerate window variance in leading-eigenvalue engine");
      }
      inv_sd(i) = 1.0 / std::sqrt(var);
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      corr(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < k; ++j) {
        const double cov = cross(i, j) - sums(i) * sums(j) / S;
        const double r = std::clamp(cov * inv_sd(i) * inv_sd(j), -1.0, 1.0);
        corr(i, j) = r;
        corr(j, i) = r;
      }
    }

    // Power iteration, warm-started from the previous window's eigenvector.
    double lambda = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
      w.noalias() = corr * v;
      const double next = v.dot(w);
      const double norm = w.norm();
      if (norm <= 0.0) {
        v.setConstant(1.0 / std::sqrt(static_cast<double>(k)));
        continue;
      }
      v = w / norm;
      if (std::abs(next - lambda) <= tol) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    out.push_back(lambda / static_cast<double>(k));
  }
  return out;
}

EmpiricalDistribution correlation_distribution(const PricePanel& panel,
                                               const CrisisWindow& window) {
  const PricePanel slice = slice_window(panel, window);
  if (slice.n_dates() < 3) {
    throw DataError("crisis window '" + window.name +
                    "' must contain at least 3 dates for a correlation distribution");
  }
  const ReturnPanel rp = log_returns(slice);
  const Eigen::Index T = rp.returns.rows();
  const Eigen::Index n = rp.returns.cols();
  if (n < 2) throw DataError("correlation distribution requires at least 2 tickers");

  Eigen::MatrixXd centered = rp.returns;
  Eigen::VectorXd sd(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = centered.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      throw DataError("zero-variance returns for ticker '" +
                      rp.tickers[static_cast<std::size_t>(j)] + "' in crisis window '" +
                      window.name + "'");
    }
    col.array() -= col.mean();
    sd(j) = std::sqrt(col.squaredNorm() / static_cast<double>(T - 1));
  }

  std::vector<double> coefficients;
  coefficients.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r =
          centered.col(i).dot(centered.col(j)) / (static_cast<double>(T - 1) * sd(i) * sd(j));
      coefficients.push_back(std::clamp(r, -1.0, 1.0));
    }
  }
  return EmpiricalDistribution(std::move(coefficients));
}

std::vector<bool> degenerate_window_flags(const Eigen::MatrixXd& returns, int window) {
  const Eigen::Index T = returns.rows();
  const Eigen::Index n = returns.cols();
  std::vector<bool> flags(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    int equal_run = 0;  // consecutive pairs of equal adjacent values
    for (Eigen::Index t = 1; t < T; ++t) {
      equal_run = returns(t, j) == returns(t - 1, j) ? equal_run + 1 : 0;
      if (equal_run >= window - 1) {
        flags[static_cast<std::size_t>(j)] = true;
        break;
      }
    }
    if (T < window) flags[static_cast<std::size_t>(j)] = true;
  }
  return flags;
}

}  // namespace crisisdyn
