#include "crisisdyn/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "crisisdyn/errors.hpp"

namespace crisisdyn {

namespace toml_lite {

namespace {

std::string strip(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail(const std::string& source, std::size_t line_no, const std::string& what) {
  throw ConfigError(source + " line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& token, const std::string& source, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) fail(source, line_no, "invalid number '" + token + "'");
  return value;
}

Value parse_value(const std::string& raw, const std::string& source, std::size_t line_no) {
  if (raw.empty()) fail(source, line_no, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') fail(source, line_no, "unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(source, line_no, "unterminated array");
    std::vector<double> values;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      values.push_back(parse_number(item, source, line_no));
    }
    return values;
  }
  return parse_number(raw, source, line_no);
}

}  // namespace

Document parse(const std::string& text, const std::string& source_name) {
  Document doc;
  Table* current = &doc.root;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.size() >= 4 && line[1] == '[') {
        if (line.substr(line.size() - 2) != "]]") fail(source_name, line_no, "expected ']]'");
        const std::string name = strip(line.substr(2, line.size() - 4));
        if (name.empty()) fail(source_name, line_no, "empty table name");
        doc.table_arrays[name].emplace_back();
        current = &doc.table_arrays[name].back();
      } else {
        if (line.back() != ']') fail(source_name, line_no, "expected ']'");
        const std::string name = strip(line.substr(1, line.size() - 2));
        if (name.empty()) fail(source_name, line_no, "empty table name");
        current = &doc.tables[name];
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(source_name, line_no, "expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) fail(source_name, line_no, "empty key");
    (*current)[key] = parse_value(strip(line.substr(eq + 1)), source_name, line_no);
  }
  return doc;
}

Document parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

}  // namespace toml_lite

namespace {

using toml_lite::Table;
using toml_lite::Value;

const Value* find_key(const Table& table, const std::string& key) {
  auto it = table.find(key);
  return it == table.end() ? nullptr : &it->second;
}

std::string require_string(const Table& table, const std::string& key, const std::string& ctx) {
  const Value* v = find_key(table, key);
  if (!v) throw ConfigError(ctx + ": missing key '" + key + "'");
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw ConfigError(ctx + ": key '" + key + "' must be a string");
}

double get_number(const Table& table, const std::string& key, double fallback,
                  const std::string& ctx) {
  const Value* v = find_key(table, key);
  if (!v) return fallback;
  if (const auto* d = std::get_if<double>(v)) return *d;
  throw ConfigError(ctx + ": key '" + key + "' must be a number");
}

std::int64_t get_integer(const Table& table, const std::string& key, std::int64_t fallback,
                         const std::string& ctx) {
  const double d = get_number(table, key, static_cast<double>(fallback), ctx);
  const auto i = static_cast<std::int64_t>(d);
  if (static_cast<double>(i) != d) {
    throw ConfigError(ctx + ": key '" + key + "' must be an integer");
  }
  return i;
}

}  // namespace

std::vector<CrisisWindow> load_crises(const std::filesystem::path& path) {
  const auto doc = toml_lite::parse_file(path);
  const auto it = doc.table_arrays.find("crisis");
  if (it == doc.table_arrays.end() || it->second.empty()) {
    throw ConfigError(path.string() + ": no [[crisis]] entries");
  }
  std::vector<CrisisWindow> out;
  out.reserve(it->second.size());
  for (std::size_t i = 0; i < it->second.size(); ++i) {
    const Table& t = it->second[i];
    const std::string ctx = path.string() + " [[crisis]] #" + std::to_string(i + 1);
    CrisisWindow w;
    w.name = require_string(t, "name", ctx);
    auto start = try_parse_date(require_string(t, "start", ctx));
    auto end = try_parse_date(require_string(t, "end", ctx));
    if (!start || !end) throw ConfigError(ctx + ": dates must be YYYY-MM-DD");
    w.start = *start;
    w.end = *end;
    w.validate();
    for (const auto& prev : out) {
      if (prev.name == w.name) throw ConfigError(ctx + ": duplicate crisis name '" + w.name + "'");
    }
    out.push_back(std::move(w));
  }
  return out;
}

FactorModelSpec load_factor_spec(const std::filesystem::path& path) {
  const auto doc = toml_lite::parse_file(path);
  const Table& t = doc.root;
  const std::string ctx = path.string();
  FactorModelSpec spec;
  spec.n_sectors = static_cast<int>(get_integer(t, "n_sectors", spec.n_sectors, ctx));
  spec.stocks_per_sector =
      static_cast<int>(get_integer(t, "stocks_per_sector", spec.stocks_per_sector, ctx));
  spec.n_steps = static_cast<int>(get_integer(t, "n_steps", spec.n_steps, ctx));
  spec.market_beta = get_number(t, "market_beta", spec.market_beta, ctx);
  spec.sector_beta = get_number(t, "sector_beta", spec.sector_beta, ctx);
  spec.idio_sigma = get_number(t, "idio_sigma", spec.idio_sigma, ctx);
  spec.student_t_dof = static_cast<int>(get_integer(t, "student_t_dof", spec.student_t_dof, ctx));
  spec.seed = static_cast<std::uint64_t>(get_integer(t, "seed", 0, ctx));
  if (const Value* v = find_key(t, "sector_drift")) {
    if (const auto* arr = std::get_if<std::vector<double>>(v)) {
      spec.sector_drift = *arr;
    } else if (const auto* d = std::get_if<double>(v)) {
      spec.sector_drift.assign(static_cast<std::size_t>(spec.n_sectors), *d);
    } else {
      throw ConfigError(ctx + ": key 'sector_drift' must be a number or an array of numbers");
    }
  }
  if (const Value* v = find_key(t, "start_date")) {
    if (const auto* s = std::get_if<std::string>(v)) {
      auto d = try_parse_date(*s);
      if (!d) throw ConfigError(ctx + ": start_date must be YYYY-MM-DD");
      spec.start_date = *d;
    } else {
      throw ConfigError(ctx + ": key 'start_date' must be a string");
    }
  }
  spec.validate();
  return spec;
}

}  // namespace crisisdyn
