#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "crisisdyn/panel.hpp"
#include "crisisdyn/synthetic.hpp"

namespace crisisdyn {

/// Minimal TOML subset used by the shipped config files: comments, bare keys,
/// quoted strings, integers/floats/booleans, flat arrays of numbers, [table]
/// sections and [[array-of-table]] sections. Anything richer raises
/// ConfigError with the offending line number.
namespace toml_lite {

using Value = std::variant<std::string, double, bool, std::vector<double>>;
using Table = std::map<std::string, Value>;

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;
};

Document parse(const std::string& text, const std::string& source_name);
Document parse_file(const std::filesystem::path& path);

}  // namespace toml_lite

/// Reads crisis windows from a config of the form:
///
///   [[crisis]]
///   name = "GFC"
///   start = "2007-01-03"
///   end = "2010-05-03"
std::vector<CrisisWindow> load_crises(const std::filesystem::path& path);

/// Reads a factor-model spec from top-level keys (n_sectors,
/// stocks_per_sector, n_steps, market_beta, sector_beta, idio_sigma,
/// sector_drift, student_t_dof, start_date, seed); all optional with
/// FactorModelSpec defaults.
FactorModelSpec load_factor_spec(const std::filesystem::path& path);

}  // namespace crisisdyn
