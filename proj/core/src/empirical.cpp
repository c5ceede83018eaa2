#include "crisisdyn/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> sample)
    : sample_(std::move(sample)) {
  if (sample_.empty()) throw DataError("empirical distribution requires a nonempty sample");
  for (double v : sample_) {
    if (!std::isfinite(v)) throw DataError("empirical distribution sample must be finite");
  }
  std::sort(sample_.begin(), sample_.end());
}

double EmpiricalDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto n = sample_.size();
  if (n == 1) return sample_[0];
  const double h = u * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sample_[n - 1];
  const double w = h - static_cast<double>(lo);
  return sample_[lo] + w * (sample_[lo + 1] - sample_[lo]);
}

std::vector<double> EmpiricalDistribution::quantile_grid(int m) const {
  std::vector<double> q(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    q[static_cast<std::size_t>(j - 1)] = quantile((j - 0.5) / m);
  }
  return q;
}

double EmpiricalDistribution::iqr() const { return quantile(0.75) - quantile(0.25); }

EmpiricalDistribution pool_samples(std::span<const std::span<const double>> parts) {
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  std::vector<double> pooled;
  pooled.reserve(total);
  for (const auto& part : parts) pooled.insert(pooled.end(), part.begin(), part.end());
  return EmpiricalDistribution(std::move(pooled));
}

double wasserstein1(const EmpiricalDistribution& f, const EmpiricalDistribution& g, int m) {
  const auto qf = f.quantile_grid(m);
  const auto qg = g.quantile_grid(m);
  return wasserstein1_grids(qf, qg);
}

double wasserstein1_grids(std::span<const double> qf, std::span<const double> qg) {
  if (qf.size() != qg.size() || qf.empty()) {
    throw std::invalid_argument("quantile grids must be nonempty and of equal length");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < qf.size(); ++j) sum += std::abs(qf[j] - qg[j]);
  return sum / static_cast<double>(qf.size());
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty range");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace crisisdyn
