#include "areal/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace areal::text {
namespace {

const icu::Normalizer2& nfcInstance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  return *n;
}

icu::UnicodeString normalised(std::string_view s) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  UErrorCode status = U_ZERO_ERROR;
  auto out = nfcInstance().normalize(u, status);
  return U_SUCCESS(status) ? out : u;
}

icu::UnicodeString trimmed(const icu::UnicodeString& u) {
  int32_t begin = 0;
  int32_t end = u.length();
  while (begin < end && u_isUWhiteSpace(u.char32At(begin))) begin = u.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = u.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(u.char32At(prev))) break;
    end = prev;
  }
  return icu::UnicodeString(u, begin, end - begin);
}

std::string toUtf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

}  // namespace

std::string nfc(std::string_view s) { return toUtf8(normalised(s)); }

std::string trim(std::string_view s) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  return toUtf8(trimmed(u));
}

std::string matchKey(std::string_view s) {
  auto u = trimmed(normalised(s));
  u.foldCase(U_FOLD_CASE_DEFAULT);
  // folding can decompose (e.g. U+0130), so recompose
  UErrorCode status = U_ZERO_ERROR;
  auto out = nfcInstance().normalize(u, status);
  return toUtf8(U_SUCCESS(status) ? out : u);
}

std::u32string codePoints(std::string_view s) {
  const auto u = normalised(s);
  std::u32string out;
  out.reserve(static_cast<std::size_t>(u.countChar32()));
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) out.push_back(static_cast<char32_t>(u.char32At(i)));
  return out;
}

std::string lowerAscii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::optional<double> parseNumber(std::string_view cell) {
  std::string cleaned;
  cleaned.reserve(cell.size());
  for (char c : cell)
    if (c != ' ' && c != ',' && c != '\t') cleaned.push_back(c);
  if (cleaned.empty()) return std::nullopt;
  const char* first = cleaned.data();
  const char* last = first + cleaned.size();
  if (*first == '+') ++first;
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string formatNumber(double value) {
  if (value == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  while (!out.empty() && out.back() == '0') out.pop_back();
  if (!out.empty() && out.back() == '.') out.pop_back();
  if (out == "-0") out = "0";
  return out;
}

std::optional<long long> parseInteger(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace areal::text
