#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace areal {

struct Nation {
  std::string_view iso3;  // lowercase
  std::string_view name;  // lowercase English name, used for stage3 files
};

inline constexpr std::string_view kGlobalNation = "global";

std::span<const Nation> allNations();

/// Accepts an alpha-3 code or the English name, case-insensitively.
std::optional<Nation> findNation(std::string_view token);

/// As findNation, but "global" maps to itself and misses throw UnknownNation.
Nation requireNation(std::string_view token);

/// Stage3 files are named by the full nation name (alpha-3 codes resolve to
/// it); names outside the nation list are case-folded.
std::string nationFileStem(std::string_view name);

}  // namespace areal
