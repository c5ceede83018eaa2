#include "crisisdyn/affine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

namespace {

double objective(double a, double b, const std::vector<double>& qf,
                 const std::vector<double>& qg) {
  double sum = 0.0;
  for (std::size_t j = 0; j < qf.size(); ++j) sum += std::abs(a * qf[j] + b - qg[j]);
  return sum / static_cast<double>(qf.size());
}

/// Exact inner optimum: b*(a) = median of {q_g - a q_f}.
double best_shift(double a, const std::vector<double>& qf, const std::vector<double>& qg) {
  std::vector<double> residues(qf.size());
  for (std::size_t j = 0; j < qf.size(); ++j) residues[j] = qg[j] - a * qf[j];
  return median_of(std::move(residues));
}

/// Minimizer over a of sum_j |weight_j| * |a - value_j|: the weighted median.
double weighted_median(std::vector<std::pair<double, double>> value_weight) {
  std::sort(value_weight.begin(), value_weight.end());
  double total = 0.0;
  for (const auto& [value, weight] : value_weight) total += weight;
  double below = 0.0;
  for (std::size_t i = 0; i < value_weight.size(); ++i) {
    const double with = below + value_weight[i].second;
    if (with >= 0.5 * total) {
      if (with == 0.5 * total && i + 1 < value_weight.size()) {
        return 0.5 * (value_weight[i].first + value_weight[i + 1].first);
      }
      return value_weight[i].first;
    }
    below = with;
  }
  return value_weight.back().first;
}

/// Exact optimum over a for fixed b: the |q_f|-weighted median of
/// (q_g - b) / q_f over grid points with q_f != 0.
double best_scale(double b, double fallback, const std::vector<double>& qf,
                  const std::vector<double>& qg) {
  std::vector<std::pair<double, double>> ratios;
  ratios.reserve(qf.size());
  for (std::size_t j = 0; j < qf.size(); ++j) {
    if (qf[j] != 0.0) ratios.emplace_back((qg[j] - b) / qf[j], std::abs(qf[j]));
  }
  if (ratios.empty()) return fallback;
  return std::max(kMinScale, weighted_median(std::move(ratios)));
}

/// Scale proxy for bracketing: IQR, falling back to full range.
double robust_scale(const EmpiricalDistribution& d) {
  const double iqr = d.iqr();
  if (iqr > 0.0) return iqr;
  return d.max() - d.min();
}

}  // namespace

EmpiricalDistribution apply_operator(const AffineOperator& op, const EmpiricalDistribution& f) {
  if (!(op.scale >= kMinScale)) {
    throw ConfigError("affine operator scale must be >= " + std::to_string(kMinScale));
  }
  std::vector<double> mapped(f.sample().size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    mapped[i] = op.scale * f.sample()[i] + op.shift;
  }
  return EmpiricalDistribution(std::move(mapped));
}

OperatorFit fit_operator(const EmpiricalDistribution& f, const EmpiricalDistribution& g, int m) {
  const std::vector<double> qf = f.quantile_grid(m);
  const std::vector<double> qg = g.quantile_grid(m);

  if (f.is_point_mass()) {
    OperatorFit fit;
    fit.scale_identifiable = false;
    fit.op.scale = kMinScale;
    fit.op.shift = best_shift(fit.op.scale, qf, qg);
    fit.residual = objective(fit.op.scale, fit.op.shift, qf, qg);
    return fit;
  }

  double a_lo = kMinScale;
  double a_hi = std::max(1.0, 100.0 * robust_scale(g) / robust_scale(f));

  // Golden-section search on the convex profile phi(a) = min_b phi(a, b).
  constexpr double kGolden = 0.6180339887498949;
  double x1 = a_hi - kGolden * (a_hi - a_lo);
  double x2 = a_lo + kGolden * (a_hi - a_lo);
  double f1 = objective(x1, best_shift(x1, qf, qg), qf, qg);
  double f2 = objective(x2, best_shift(x2, qf, qg), qf, qg);
  while (a_hi - a_lo > 1e-8) {
    if (f1 <= f2) {
      a_hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = a_hi - kGolden * (a_hi - a_lo);
      f1 = objective(x1, best_shift(x1, qf, qg), qf, qg);
    } else {
      a_lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = a_lo + kGolden * (a_hi - a_lo);
      f2 = objective(x2, best_shift(x2, qf, qg), qf, qg);
    }
  }

  double a = 0.5 * (a_lo + a_hi);
  double b = best_shift(a, qf, qg);
  double value = objective(a, b, qf, qg);

  // Exact coordinate polish; each update is an exact 1-D minimizer, so the
  // objective never increases.
  for (int round = 0; round < 3; ++round) {
    const double a_next = best_scale(b, a, qf, qg);
    const double b_next = best_shift(a_next, qf, qg);
    const double next_value = objective(a_next, b_next, qf, qg);
    if (next_value <= value) {
      a = a_next;
      b = b_next;
      value = next_value;
    } else {
      break;
    }
  }

  return OperatorFit{{a, b}, value, true};
}

OperatorFit fit_operator_moments(const EmpiricalDistribution& f, const EmpiricalDistribution& g,
                                 int m) {
  const std::vector<double> qf = f.quantile_grid(m);
  const std::vector<double> qg = g.quantile_grid(m);
  const double n = static_cast<double>(qf.size());
  const double mean_f = std::accumulate(qf.begin(), qf.end(), 0.0) / n;
  const double mean_g = std::accumulate(qg.begin(), qg.end(), 0.0) / n;
  double var_f = 0.0;
  double cov = 0.0;
  for (std::size_t j = 0; j < qf.size(); ++j) {
    var_f += (qf[j] - mean_f) * (qf[j] - mean_f);
    cov += (qf[j] - mean_f) * (qg[j] - mean_g);
  }

  OperatorFit fit;
  if (var_f <= 0.0) {
    fit.scale_identifiable = false;
    fit.op.scale = kMinScale;
  } else {
    fit.op.scale = std::max(kMinScale, cov / var_f);
  }
  fit.op.shift = mean_g - fit.op.scale * mean_f;
  fit.residual = objective(fit.op.scale, fit.op.shift, qf, qg);
  return fit;
}

}  // namespace crisisdyn
