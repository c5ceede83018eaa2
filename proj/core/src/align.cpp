#include "crisisdyn/align.hpp"

#include <algorithm>

#include "crisisdyn/collectivity.hpp"
#include "crisisdyn/errors.hpp"
#include "crisisdyn/market_data.hpp"
#include "crisisdyn/parallel.hpp"

namespace crisisdyn {

namespace {

std::vector<double> flatten(const Eigen::MatrixXd& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index t = 0; t < m.rows(); ++t) out.push_back(m(t, j));
  }
  return out;
}

}  // namespace

AlignResult align_and_cluster(const PricePanel& panel, std::span<const CrisisWindow> crises,
                              std::string_view reference, Linkage linkage, int fit_order,
                              int threads) {
  if (crises.empty()) throw ConfigError("align requires at least one crisis window");
  if (fit_order != 1 && fit_order != 2) throw ConfigError("fit order must be 1 or 2");
  find_crisis(crises, reference);  // validates the reference name

  AlignResult result;

  // Per-crisis return matrices and pooled market distributions.
  std::vector<ReturnPanel> crisis_returns;
  crisis_returns.reserve(crises.size());
  std::vector<EmpiricalDistribution> market_pools;
  market_pools.reserve(crises.size());
  for (const auto& crisis : crises) {
    const PricePanel slice = slice_window(panel, crisis);
    if (slice.n_dates() < 2) {
      throw DataError("crisis window '" + crisis.name + "' has fewer than 2 dates");
    }
    crisis_returns.push_back(log_returns(slice));
    market_pools.emplace_back(flatten(crisis_returns.back().returns));
  }

  std::size_t reference_index = 0;
  for (std::size_t c = 0; c < crises.size(); ++c) {
    if (crises[c].name == reference) reference_index = c;
  }

  // Crisis-level operators onto the reference pool.
  for (std::size_t c = 0; c < crises.size(); ++c) {
    CrisisOperator op;
    op.crisis = crises[c].name;
    if (c == reference_index) {
      op.op = AffineOperator{1.0, 0.0};
      op.residual = 0.0;
      op.scale_identifiable = true;
    } else {
      const OperatorFit fit =
          fit_order == 1 ? fit_operator(market_pools[c], market_pools[reference_index])
                         : fit_operator_moments(market_pools[c], market_pools[reference_index]);
      op.op = fit.op;
      op.residual = fit.residual;
      op.scale_identifiable = fit.scale_identifiable;
    }
    result.operators.push_back(op);
  }

  // Adjusted sector distributions, kept as quantile grids. Applying the
  // affine operator maps quantiles exactly, so the grid is computed once per
  // pool and transformed in place.
  std::vector<std::vector<double>> grids;
  for (std::size_t c = 0; c < crises.size(); ++c) {
    const ReturnPanel& rp = crisis_returns[c];
    const AffineOperator& op = result.operators[c].op;
    for (int s = 0; s < SectorUniverse::kCount; ++s) {
      const std::string sector(SectorUniverse::names()[static_cast<std::size_t>(s)]);
      std::vector<double> pooled;
      for (std::size_t j = 0; j < rp.sector_ids.size(); ++j) {
        if (rp.sector_ids[j] != s) continue;
        const auto col = rp.returns.col(static_cast<Eigen::Index>(j));
        pooled.insert(pooled.end(), col.begin(), col.end());
      }
      if (pooled.size() < 2) {
        result.omitted.push_back({crises[c].name, sector,
                                  pooled.empty() ? "no tickers in sector"
                                                 : "fewer than 2 pooled observations"});
        continue;
      }
      const EmpiricalDistribution dist(std::move(pooled));
      std::vector<double> grid = dist.quantile_grid();
      for (double& q : grid) q = op.scale * q + op.shift;
      grids.push_back(std::move(grid));
      result.labels.push_back({crises[c].name, sector});
    }
  }
  if (grids.empty()) throw DataError("no (crisis, sector) cell has enough observations");

  const auto n = static_cast<Eigen::Index>(grids.size());
  result.distances = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double d = wasserstein1_grids(grids[static_cast<std::size_t>(i)],
                                        grids[static_cast<std::size_t>(j)]);
    result.distances(i, j) = d;
    result.distances(j, i) = d;
  });

  result.dendrogram = agglomerative_cluster(result.distances, linkage);
  return result;
}

}  // namespace crisisdyn
