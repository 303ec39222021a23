#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace areal::text {

/// Unicode NFC composition of UTF-8 input. Invalid sequences are replaced.
std::string nfc(std::string_view s);

/// Trims Unicode white space (including no-break space) at both ends.
std::string trim(std::string_view s);

/// Matching key for terms and unit names: trimmed, NFC, full case fold.
/// Comparison of keys is byte-wise.
std::string matchKey(std::string_view s);

/// Code points of the NFC form, used by the edit distance.
std::u32string codePoints(std::string_view s);

std::string lowerAscii(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Strips ASCII spaces and ',' thousands separators and parses with '.'
/// as the decimal point. The whole cell must be consumed.
std::optional<double> parseNumber(std::string_view cell);

/// Fixed notation with at most six fractional digits; trailing zeros dropped.
std::string formatNumber(double value);

std::optional<long long> parseInteger(std::string_view s);

}  // namespace areal::text
