#pragma once

#include <cstdint>
#include <vector>

#include "crisisdyn/dates.hpp"
#include "crisisdyn/panel.hpp"

namespace crisisdyn {

/// Market/sector factor model used to generate oracle panels with known
/// correlation structure:
///
///   r[i,t] = drift[sector(i)] + market_beta * F[t]
///            + sector_beta * G[sector(i),t] + idio_sigma * eps[i,t]
///
/// with independent standard Gaussian F, G and eps. Prices are exponentiated
/// cumulative sums starting at 100. With sector_beta = 0 the panel is
/// equicorrelated with rho = market_beta^2 / (market_beta^2 + idio_sigma^2).
struct FactorModelSpec {
  int n_sectors = 5;
  int stocks_per_sector = 10;
  int n_steps = 250;  // number of return observations; the panel has n_steps + 1 dates
  double market_beta = 0.0;
  double sector_beta = 0.0;
  double idio_sigma = 1.0;
  std::vector<double> sector_drift;  // per sector; empty means all zero
  int student_t_dof = 0;             // 0 = Gaussian noise; >= 3 = unit-variance Student-t
  Date start_date{2000, 1, 3};
  std::uint64_t seed = 0;

  /// Throws ConfigError on invalid parameters.
  void validate() const;
};

/// Deterministic in the spec (including seed); independent of thread count.
PricePanel generate(const FactorModelSpec& spec);

}  // namespace crisisdyn
