#include "crisisdyn/sectors.hpp"

namespace crisisdyn {

namespace {

constexpr std::array<std::string_view, SectorUniverse::kCount> kNames = {
    "Energy",
    "Communications",
    "Real Estate",
    "Utilities",
    "Materials",
    "Financials",
    "Consumer staples",
    "Consumer discretionary",
    "Industrials",
    "Information technology",
    "Healthcare",
};

constexpr std::array<std::string_view, SectorUniverse::kCount> kCodes = {
    "ENE", "COM", "RES", "UTL", "MAT", "FIN", "CST", "CDS", "IND", "INT", "HLC",
};

}  // namespace

const std::array<std::string_view, SectorUniverse::kCount>& SectorUniverse::names() {
  return kNames;
}

const std::array<std::string_view, SectorUniverse::kCount>& SectorUniverse::codes() {
  return kCodes;
}

std::optional<int> SectorUniverse::index_of(std::string_view name) {
  for (int i = 0; i < kCount; ++i) {
    if (kNames[static_cast<std::size_t>(i)] == name) return i;
  }
  return std::nullopt;
}

std::string SectorUniverse::names_joined() {
  std::string out;
  for (int i = 0; i < kCount; ++i) {
    if (i > 0) out += ", ";
    out += kNames[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace crisisdyn
