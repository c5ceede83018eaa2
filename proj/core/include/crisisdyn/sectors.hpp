#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace crisisdyn {

/// The fixed 11-sector GICS universe. Order is canonical throughout the
/// library: allocation vectors, sector counts and CSV output all use it.
class SectorUniverse {
 public:
  static constexpr int kCount = 11;

  static const std::array<std::string_view, kCount>& names();

  /// Short uppercase codes used for synthetic ticker generation.
  static const std::array<std::string_view, kCount>& codes();

  /// Index of an exact sector name, nullopt if unknown.
  static std::optional<int> index_of(std::string_view name);

  /// Comma-separated list of valid names, for error messages.
  static std::string names_joined();
};

}  // namespace crisisdyn
