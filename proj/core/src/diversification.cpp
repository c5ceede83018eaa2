#include "crisisdyn/diversification.hpp"

#include <algorithm>
#include <atomic>

#include "crisisdyn/collectivity.hpp"
#include "crisisdyn/empirical.hpp"
#include "crisisdyn/errors.hpp"
#include "crisisdyn/parallel.hpp"

namespace crisisdyn {

namespace {

constexpr std::uint64_t kDrawTag = 0xD1;

struct SectorPools {
  // Column indices per sector, only for sectors present in the panel.
  std::vector<std::vector<Eigen::Index>> members;
};

SectorPools make_pools(const PricePanel& panel) {
  SectorPools pools;
  pools.members.resize(SectorUniverse::kCount);
  const auto& ids = panel.sector_ids();
  for (std::size_t j = 0; j < ids.size(); ++j) {
    pools.members[static_cast<std::size_t>(ids[j])].push_back(static_cast<Eigen::Index>(j));
  }
  return pools;
}

std::vector<int> eligible_sectors(const SectorPools& pools, int w) {
  std::vector<int> out;
  for (int s = 0; s < SectorUniverse::kCount; ++s) {
    if (pools.members[static_cast<std::size_t>(s)].size() >= static_cast<std::size_t>(w)) {
      out.push_back(s);
    }
  }
  return out;
}

std::string sector_count_message(const SectorPools& pools) {
  std::string msg;
  for (int s = 0; s < SectorUniverse::kCount; ++s) {
    const auto n = pools.members[static_cast<std::size_t>(s)].size();
    if (n == 0) continue;
    if (!msg.empty()) msg += ", ";
    msg += std::string(SectorUniverse::names()[static_cast<std::size_t>(s)]) + "=" +
           std::to_string(n);
  }
  return msg.empty() ? "none" : msg;
}

std::vector<Eigen::Index> draw_portfolio(Rng& rng, const SectorPools& pools, int w, int a) {
  const auto eligible = eligible_sectors(pools, w);
  if (static_cast<int>(eligible.size()) < a) {
    throw ConfigError("need " + std::to_string(a) + " sectors with at least " +
                      std::to_string(w) + " tickers, but eligible sector counts are: " +
                      sector_count_message(pools));
  }
  std::vector<Eigen::Index> subset;
  subset.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(a));
  const auto chosen = rng.sample_without_replacement(static_cast<int>(eligible.size()), a);
  for (int pick : chosen) {
    const auto& pool = pools.members[static_cast<std::size_t>(eligible[static_cast<std::size_t>(pick)])];
    const auto within = rng.sample_without_replacement(static_cast<int>(pool.size()), w);
    for (int idx : within) subset.push_back(pool[static_cast<std::size_t>(idx)]);
  }
  std::sort(subset.begin(), subset.end());
  return subset;
}

struct CellInput {
  const Eigen::MatrixXd* returns = nullptr;
  const std::vector<bool>* degenerate = nullptr;
  const std::vector<std::string>* tickers = nullptr;
  const SectorPools* pools = nullptr;
};

/// One draw's collectivity series: sample a clean portfolio (redrawing
/// degenerate ones) and run the rolling leading-eigenvalue engine on it.
std::vector<double> draw_series(const CellInput& in, const SamplingConfig& config, int w, int a,
                                int draw_index, long& rejected) {
  Rng rng(config.seed, {kDrawTag, static_cast<std::uint64_t>(w), static_cast<std::uint64_t>(a),
                        static_cast<std::uint64_t>(draw_index)});
  const int size = w * a;
  for (int attempt = 0; attempt <= config.max_redraws; ++attempt) {
    const auto subset = draw_portfolio(rng, *in.pools, w, a);
    const Eigen::Index degenerate_at = [&]() -> Eigen::Index {
      for (Eigen::Index column : subset) {
        if ((*in.degenerate)[static_cast<std::size_t>(column)]) return column;
      }
      return -1;
    }();
    if (degenerate_at >= 0) {
      ++rejected;
      if (attempt == config.max_redraws) {
        throw DataError("portfolio draw for (w=" + std::to_string(w) + ", a=" +
                        std::to_string(a) + ") still degenerate after " +
                        std::to_string(config.max_redraws) + " redraws; ticker '" +
                        (*in.tickers)[static_cast<std::size_t>(degenerate_at)] +
                        "' has a zero-variance window");
      }
      continue;
    }
    Eigen::MatrixXd block(in.returns->rows(), size);
    for (int c = 0; c < size; ++c) {
      block.col(c) = in.returns->col(subset[static_cast<std::size_t>(c)]);
    }
    return leading_eigen_series(block, config.window);
  }
  return {};  // unreachable
}

std::vector<double> cell_median_series(const CellInput& in, const SamplingConfig& config, int w,
                                       int a, int threads, long& rejected_total) {
  const auto steps = static_cast<std::size_t>(in.returns->rows() - config.window + 1);
  const auto draws = static_cast<std::size_t>(config.draws);
  std::vector<std::vector<double>> per_draw(draws);
  std::vector<long> rejected(draws, 0);
  parallel_for(draws, threads, [&](std::size_t d) {
    per_draw[d] = draw_series(in, config, w, a, static_cast<int>(d), rejected[d]);
  });
  for (long r : rejected) rejected_total += r;

  std::vector<double> medians(steps);
  std::vector<double> column(draws);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t d = 0; d < draws; ++d) column[d] = per_draw[d][t];
    medians[t] = median_of(column);
  }
  return medians;
}

}  // namespace

void SamplingConfig::validate() const {
  if (w_min < 2 || a_min < 2) throw ConfigError("w and a ranges must start at >= 2");
  if (w_max < w_min || a_max < a_min) throw ConfigError("empty (w, a) range");
  if (draws < 1) throw ConfigError("draws must be >= 1");
  if (window < 2) throw ConfigError("window must be >= 2");
  if (max_redraws < 0) throw ConfigError("max_redraws must be >= 0");
}

std::vector<Eigen::Index> sample_portfolio_indices(Rng& rng, const PricePanel& panel, int w,
                                                   int a) {
  if (w < 2 || a < 2) throw ConfigError("portfolio shape requires w >= 2 and a >= 2");
  const SectorPools pools = make_pools(panel);
  return draw_portfolio(rng, pools, w, a);
}

std::vector<std::string> sample_portfolio(Rng& rng, const PricePanel& panel, int w, int a) {
  const auto indices = sample_portfolio_indices(rng, panel, w, a);
  std::vector<std::string> tickers;
  tickers.reserve(indices.size());
  for (Eigen::Index i : indices) tickers.push_back(panel.tickers()[static_cast<std::size_t>(i)]);
  return tickers;
}

MedianSeries median_collectivity(const PricePanel& slice, const SamplingConfig& config, int w,
                                 int a, int threads) {
  config.validate();
  const ReturnPanel rp = log_returns(slice);
  if (rp.returns.rows() < config.window) {
    throw DataError("window of " + std::to_string(config.window) +
                    " exceeds available return rows (" + std::to_string(rp.returns.rows()) + ")");
  }
  const auto degenerate = degenerate_window_flags(rp.returns, config.window);
  const SectorPools pools = make_pools(slice);
  const CellInput in{&rp.returns, &degenerate, &rp.tickers, &pools};

  MedianSeries out;
  out.stamps.assign(rp.dates.begin() + (config.window - 1), rp.dates.end());
  out.values = cell_median_series(in, config, w, a, threads, out.rejected_draws);
  return out;
}

DiversificationResult mu_table(const PricePanel& slice, const SamplingConfig& config,
                               int threads, bool keep_series) {
  config.validate();
  const ReturnPanel rp = log_returns(slice);
  if (rp.returns.rows() < config.window) {
    throw DataError("window of " + std::to_string(config.window) +
                    " exceeds available return rows (" + std::to_string(rp.returns.rows()) + ")");
  }
  const auto degenerate = degenerate_window_flags(rp.returns, config.window);
  const SectorPools pools = make_pools(slice);
  const CellInput in{&rp.returns, &degenerate, &rp.tickers, &pools};

  DiversificationResult result;
  result.table.w_min = config.w_min;
  result.table.w_max = config.w_max;
  result.table.a_min = config.a_min;
  result.table.a_max = config.a_max;
  result.table.mu.resize(result.table.n_a(), result.table.n_w());
  result.stamps.assign(rp.dates.begin() + (config.window - 1), rp.dates.end());
  if (keep_series) result.median_series.emplace();

  for (int a = config.a_min; a <= config.a_max; ++a) {
    for (int w = config.w_min; w <= config.w_max; ++w) {
      const auto medians = cell_median_series(in, config, w, a, threads, result.rejected_draws);
      double sum = 0.0;
      for (double v : medians) sum += v;
      result.table.at(w, a) = sum / static_cast<double>(medians.size());
      if (keep_series) result.median_series->push_back(medians);
    }
  }
  return result;
}

GreedyPath greedy_path(const DiversificationTable& table) {
  GreedyPath path;
  int w = table.w_min;
  int a = table.a_min;
  path.push_back({w, a, table.at(w, a)});
  while (w < table.w_max || a < table.a_max) {
    const bool can_w = w < table.w_max;
    const bool can_a = a < table.a_max;
    const double mu_w = can_w ? table.at(w + 1, a) : 0.0;
    const double mu_a = can_a ? table.at(w, a + 1) : 0.0;
    int next_w = w;
    int next_a = a;
    if (can_w && can_a) {
      // Ties increment w, which is what reproduces the published paths.
      if (mu_a < mu_w) {
        ++next_a;
      } else {
        ++next_w;
      }
    } else if (can_w) {
      ++next_w;
    } else {
      ++next_a;
    }
    const double next_mu = table.at(next_w, next_a);
    if (!(next_mu < path.back().mu)) break;
    w = next_w;
    a = next_a;
    path.push_back({w, a, next_mu});
  }
  return path;
}

Marginals marginal_means(const DiversificationTable& table) {
  if (table.n_w() != table.n_a() || table.w_min != table.a_min) {
    throw ConfigError("marginal means require a square (w, a) grid");
  }
  Marginals m;
  const int n = table.n_w();
  m.values.resize(static_cast<std::size_t>(n));
  m.mu_by_w.resize(static_cast<std::size_t>(n));
  m.mu_by_a.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    m.values[static_cast<std::size_t>(i)] = table.w_min + i;
    m.mu_by_w[static_cast<std::size_t>(i)] = table.mu.col(i).mean();
    m.mu_by_a[static_cast<std::size_t>(i)] = table.mu.row(i).mean();
  }
  return m;
}

}  // namespace crisisdyn
