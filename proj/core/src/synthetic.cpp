#include "crisisdyn/synthetic.hpp"

#include <cmath>
#include <string>

#include "crisisdyn/errors.hpp"
#include "crisisdyn/rng.hpp"

namespace crisisdyn {

namespace {

constexpr std::uint64_t kMarketTag = 0x01;
constexpr std::uint64_t kSectorTag = 0x02;
constexpr std::uint64_t kNoiseTag = 0x03;

std::string make_ticker(int sector_id, int index_in_sector) {
  std::string code(SectorUniverse::codes()[static_cast<std::size_t>(sector_id)]);
  const std::string num = std::to_string(index_in_sector + 1);
  return code + (num.size() < 2 ? "0" + num : num);
}

/// Unit-variance noise draw: Gaussian, or Student-t rescaled by
/// sqrt((dof-2)/dof) so variance stays 1.
double noise_draw(Rng& rng, int t_dof) {
  const double z = rng.gaussian();
  if (t_dof == 0) return z;
  double chi2 = 0.0;
  for (int i = 0; i < t_dof; ++i) {
    const double g = rng.gaussian();
    chi2 += g * g;
  }
  const double t = z / std::sqrt(chi2 / t_dof);
  return t * std::sqrt((t_dof - 2.0) / t_dof);
}

}  // namespace

void FactorModelSpec::validate() const {
  if (n_sectors < 1 || n_sectors > SectorUniverse::kCount) {
    throw ConfigError("n_sectors must be in [1, " + std::to_string(SectorUniverse::kCount) +
                      "], got " + std::to_string(n_sectors));
  }
  if (stocks_per_sector < 1) throw ConfigError("stocks_per_sector must be >= 1");
  if (stocks_per_sector > 99) throw ConfigError("stocks_per_sector must be <= 99");
  if (n_steps < 2) throw ConfigError("n_steps must be >= 2");
  if (market_beta < 0.0) throw ConfigError("market_beta must be >= 0");
  if (sector_beta < 0.0) throw ConfigError("sector_beta must be >= 0");
  if (!(idio_sigma > 0.0)) throw ConfigError("idio_sigma must be > 0");
  if (!sector_drift.empty() && sector_drift.size() != static_cast<std::size_t>(n_sectors)) {
    throw ConfigError("sector_drift must be empty or have one entry per sector (" +
                      std::to_string(n_sectors) + "), got " +
                      std::to_string(sector_drift.size()));
  }
  if (student_t_dof != 0 && student_t_dof < 3) {
    throw ConfigError("student_t_dof must be 0 (Gaussian) or >= 3");
  }
  if (!is_valid_date(start_date)) throw ConfigError("invalid start_date");
}

PricePanel generate(const FactorModelSpec& spec) {
  spec.validate();
  const int n_assets = spec.n_sectors * spec.stocks_per_sector;
  const int T = spec.n_steps;

  Eigen::MatrixXd market(T, 1);
  {
    Rng rng(spec.seed, {kMarketTag});
    for (int t = 0; t < T; ++t) market(t, 0) = rng.gaussian();
  }
  Eigen::MatrixXd sector_factors(T, spec.n_sectors);
  for (int s = 0; s < spec.n_sectors; ++s) {
    Rng rng(spec.seed, {kSectorTag, static_cast<std::uint64_t>(s)});
    for (int t = 0; t < T; ++t) sector_factors(t, s) = rng.gaussian();
  }

  Eigen::MatrixXd prices(T + 1, n_assets);
  std::vector<std::string> tickers;
  std::vector<int> sector_ids;
  tickers.reserve(static_cast<std::size_t>(n_assets));
  sector_ids.reserve(static_cast<std::size_t>(n_assets));

  for (int s = 0; s < spec.n_sectors; ++s) {
    const double drift = spec.sector_drift.empty() ? 0.0 : spec.sector_drift[static_cast<std::size_t>(s)];
    for (int k = 0; k < spec.stocks_per_sector; ++k) {
      const int j = s * spec.stocks_per_sector + k;
      tickers.push_back(make_ticker(s, k));
      sector_ids.push_back(s);
      Rng rng(spec.seed, {kNoiseTag, static_cast<std::uint64_t>(j)});
      double log_price = std::log(100.0);
      prices(0, j) = 100.0;
      for (int t = 0; t < T; ++t) {
        const double r = drift + spec.market_beta * market(t, 0) +
                         spec.sector_beta * sector_factors(t, s) +
                         spec.idio_sigma * noise_draw(rng, spec.student_t_dof);
        log_price += r;
        prices(t + 1, j) = std::exp(log_price);
      }
    }
  }

  std::vector<Date> dates;
  dates.reserve(static_cast<std::size_t>(T) + 1);
  Date d = spec.start_date;
  for (int t = 0; t <= T; ++t) {
    dates.push_back(d);
    d = next_day(d);
  }

  return PricePanel(std::move(dates), std::move(tickers), std::move(sector_ids),
                    std::move(prices));
}

}  // namespace crisisdyn
