#include "crisisdyn/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "crisisdyn/collectivity.hpp"
#include "crisisdyn/errors.hpp"
#include "crisisdyn/parallel.hpp"
#include "crisisdyn/rng.hpp"

namespace crisisdyn {

namespace {

constexpr std::uint64_t kSearchTag = 0x5E;

struct SharpeOutcome {
  double value = 0.0;
  bool degenerate = false;
};

/// Equal-weight portfolio Sharpe over a return matrix, selecting columns.
SharpeOutcome sharpe_of(const Eigen::MatrixXd& returns, std::span<const Eigen::Index> assets,
                        double risk_free_rate) {
  const Eigen::Index T = returns.rows();
  const double k = static_cast<double>(assets.size());
  double mean = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> series(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    double sum = 0.0;
    for (Eigen::Index j : assets) sum += returns(t, j);
    const double r = sum / k;
    series[static_cast<std::size_t>(t)] = r;
    mean += r;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  mean /= static_cast<double>(T);
  if (lo == hi) return {0.0, true};
  double ss = 0.0;
  for (double r : series) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(T - 1));
  if (!(sd > 0.0)) return {0.0, true};
  return {(mean - risk_free_rate) / sd, false};
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// C(n, k) with an infeasibility cap.
long n_subsets(int n, int k, long cap) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > static_cast<double>(cap) * 2.0) return cap + 1;
  }
  const long rounded = static_cast<long>(std::llround(c));
  return rounded;
}

std::vector<std::vector<Eigen::Index>> all_subsets(int n, int k) {
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> current(static_cast<std::size_t>(k));
  std::iota(current.begin(), current.end(), 0);
  for (;;) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (n_draws < 1) throw ConfigError("n_draws must be >= 1");
  if (portfolio_size < 1) throw ConfigError("portfolio_size must be >= 1");
  if (!(top_fraction > 0.0) || top_fraction > 1.0) {
    throw ConfigError("top_fraction must be in (0, 1]");
  }
  if (max_redraws < 0) throw ConfigError("max_redraws must be >= 0");
}

SectorAllocation::SectorAllocation(std::vector<double> proportions, double sum_tolerance)
    : proportions_(std::move(proportions)) {
  if (proportions_.size() != static_cast<std::size_t>(SectorUniverse::kCount)) {
    throw DataError("sector allocation must have " + std::to_string(SectorUniverse::kCount) +
                    " components");
  }
  double sum = 0.0;
  for (double p : proportions_) {
    if (!std::isfinite(p) || p < 0.0) throw DataError("allocation entries must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > sum_tolerance) {
    throw DataError("allocation must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

double half_l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DataError("allocation vectors have mismatched universes");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double allocation_distance(const SectorAllocation& p, const SectorAllocation& q) {
  return half_l1_distance(p.proportions(), q.proportions());
}

double portfolio_sharpe(const PricePanel& slice, std::span<const std::string> tickers,
                        double risk_free_rate) {
  if (tickers.empty()) throw ConfigError("portfolio must contain at least one ticker");
  const ReturnPanel rp = log_returns(slice);
  if (rp.returns.rows() < 2) {
    throw DataError("Sharpe ratio requires at least 2 return observations");
  }
  std::vector<Eigen::Index> assets;
  assets.reserve(tickers.size());
  for (const auto& ticker : tickers) {
    const auto idx = slice.index_of(ticker);
    if (!idx) throw DataError("unknown ticker '" + ticker + "'");
    assets.push_back(*idx);
  }
  const SharpeOutcome outcome = sharpe_of(rp.returns, assets, risk_free_rate);
  if (outcome.degenerate) {
    throw DataError("degenerate portfolio: constant return series (zero variance)");
  }
  return outcome.value;
}

SearchResult run_search(const PricePanel& slice, const SearchConfig& config, int threads) {
  config.validate();
  const int n = static_cast<int>(slice.n_assets());
  const int k = config.portfolio_size;
  if (k > n) {
    throw ConfigError("portfolio_size " + std::to_string(k) + " exceeds universe of " +
                      std::to_string(n) + " tickers");
  }
  const ReturnPanel rp = log_returns(slice);
  if (rp.returns.rows() < 2) {
    throw DataError("search window must contain at least 2 return observations");
  }

  std::vector<std::vector<Eigen::Index>> subsets;
  long n_draws = config.n_draws;
  if (config.exhaustive) {
    constexpr long kEnumerationCap = 1000000;
    n_draws = n_subsets(n, k, kEnumerationCap);
    if (n_draws > kEnumerationCap) {
      throw ConfigError("exhaustive enumeration infeasible: C(" + std::to_string(n) + ", " +
                        std::to_string(k) + ") exceeds " + std::to_string(kEnumerationCap));
    }
    subsets = all_subsets(n, k);
  } else {
    subsets.resize(static_cast<std::size_t>(n_draws));
  }

  std::vector<double> sharpes(static_cast<std::size_t>(n_draws));
  std::vector<long> rejected(static_cast<std::size_t>(n_draws), 0);

  parallel_for(static_cast<std::size_t>(n_draws), threads, [&](std::size_t d) {
    if (config.exhaustive) {
      const SharpeOutcome outcome = sharpe_of(rp.returns, subsets[d], config.risk_free_rate);
      if (outcome.degenerate) {
        throw DataError("degenerate portfolio at enumeration index " + std::to_string(d) +
                        ": constant return series");
      }
      sharpes[d] = outcome.value;
      return;
    }
    Rng rng(config.seed, {kSearchTag, static_cast<std::uint64_t>(d)});
    for (int attempt = 0;; ++attempt) {
      auto picks = rng.sample_without_replacement(n, k);
      std::vector<Eigen::Index> assets(picks.begin(), picks.end());
      std::sort(assets.begin(), assets.end());
      const SharpeOutcome outcome = sharpe_of(rp.returns, assets, config.risk_free_rate);
      if (!outcome.degenerate) {
        subsets[d] = std::move(assets);
        sharpes[d] = outcome.value;
        return;
      }
      ++rejected[d];
      if (attempt >= config.max_redraws) {
        throw DataError("draw " + std::to_string(d) + " still degenerate after " +
                        std::to_string(config.max_redraws) + " redraws");
      }
    }
  });

  // Rank by Sharpe, ties broken by draw index (earlier draw wins).
  std::vector<long> order(static_cast<std::size_t>(n_draws));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](long lhs, long rhs) {
    const double sl = sharpes[static_cast<std::size_t>(lhs)];
    const double sr = sharpes[static_cast<std::size_t>(rhs)];
    if (sl != sr) return sl > sr;
    return lhs < rhs;
  });

  const long retained = std::min<long>(
      n_draws, static_cast<long>(std::ceil(config.top_fraction * static_cast<double>(n_draws))));

  std::vector<double> slot_counts(static_cast<std::size_t>(SectorUniverse::kCount), 0.0);
  std::vector<RankedPortfolio> top;
  top.reserve(static_cast<std::size_t>(retained));
  for (long rank = 0; rank < retained; ++rank) {
    const long d = order[static_cast<std::size_t>(rank)];
    const auto& assets = subsets[static_cast<std::size_t>(d)];
    for (Eigen::Index j : assets) {
      ++slot_counts[static_cast<std::size_t>(slice.sector_ids()[static_cast<std::size_t>(j)])];
    }
    top.push_back({d, sharpes[static_cast<std::size_t>(d)], assets});
  }

  const double total_slots = static_cast<double>(retained) * static_cast<double>(k);
  for (double& c : slot_counts) c /= total_slots;

  long total_rejected = 0;
  for (long r : rejected) total_rejected += r;

  return SearchResult{std::move(top), SectorAllocation(std::move(slot_counts)), n_draws,
                      retained, total_rejected};
}

SectorAllocation index_allocation(const PricePanel& panel) {
  const auto counts = panel.sector_counts();
  std::vector<double> proportions(static_cast<std::size_t>(SectorUniverse::kCount));
  const double n = static_cast<double>(panel.n_assets());
  for (std::size_t s = 0; s < proportions.size(); ++s) {
    proportions[s] = static_cast<double>(counts[s]) / n;
  }
  return SectorAllocation(std::move(proportions));
}

AllocationMatrix crisis_allocation_matrix(const PricePanel& panel,
                                          std::span<const CrisisWindow> crises,
                                          const SearchConfig& config, int threads) {
  if (crises.empty()) throw ConfigError("allocation matrix requires at least one crisis");
  AllocationMatrix out;
  for (const auto& crisis : crises) {
    const PricePanel slice = slice_window(panel, crisis);
    SearchConfig per_crisis = config;
    // Independent draw streams per crisis, invariant to crisis ordering.
    per_crisis.seed = config.seed ^ fnv1a(crisis.name);
    const SearchResult res = run_search(slice, per_crisis, threads);
    out.labels.push_back(crisis.name);
    out.allocations.push_back(res.allocation);
  }
  out.labels.emplace_back("Index");
  out.allocations.push_back(index_allocation(panel));

  const auto n = static_cast<Eigen::Index>(out.allocations.size());
  out.distances = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = allocation_distance(out.allocations[static_cast<std::size_t>(i)],
                                           out.allocations[static_cast<std::size_t>(j)]);
      out.distances(i, j) = d;
      out.distances(j, i) = d;
    }
  }
  return out;
}

}  // namespace crisisdyn
