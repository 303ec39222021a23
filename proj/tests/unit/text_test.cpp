#include <gtest/gtest.h>

#include "areal/text.hpp"

using namespace areal;

TEST(Text, NfcComposesDecomposedInput) {
  EXPECT_EQ(text::nfc("Rondo\xCC\x82nia"), "Rond\xC3\xB4nia");
  EXPECT_EQ(text::nfc("plain"), "plain");
}

TEST(Text, TrimHandlesUnicodeSpace) {
  EXPECT_EQ(text::trim("  Cabixi \t"), "Cabixi");
  EXPECT_EQ(text::trim("\xC2\xA0" "Cacoal" "\xC2\xA0"), "Cacoal");
  EXPECT_EQ(text::trim("   "), "");
}

TEST(Text, MatchKeyFoldsCaseAndForm) {
  EXPECT_EQ(text::matchKey(" RONDÔNIA "), text::matchKey("rondo\xCC\x82nia"));
  EXPECT_EQ(text::matchKey("SOYBEANS"), "soybeans");
  EXPECT_NE(text::matchKey("Rondonia"), text::matchKey("Rondônia"));
  EXPECT_EQ(text::matchKey("Straße"), text::matchKey("STRASSE"));
}

TEST(Text, CodePointsCountCharacters) {
  EXPECT_EQ(text::codePoints("Rondônia").size(), 8u);
  EXPECT_EQ(text::codePoints("Rondo\xCC\x82nia").size(), 8u);
}

TEST(Text, ParseNumberStripsThousandsSeparators) {
  EXPECT_EQ(text::parseNumber("5,300"), 5300.0);
  EXPECT_EQ(text::parseNumber(" 152,000 "), 152000.0);
  EXPECT_EQ(text::parseNumber("1,234.5"), 1234.5);
  EXPECT_EQ(text::parseNumber("-12"), -12.0);
  EXPECT_EQ(text::parseNumber("4 516"), 4516.0);
  EXPECT_FALSE(text::parseNumber("12a"));
  EXPECT_FALSE(text::parseNumber("(D)"));
  EXPECT_FALSE(text::parseNumber(""));
  EXPECT_FALSE(text::parseNumber("1.2.3"));
}

TEST(Text, FormatNumberIsFixedWithSixDecimals) {
  EXPECT_EQ(text::formatNumber(40.4686), "40.4686");
  EXPECT_EQ(text::formatNumber(100 * 0.404686), "40.4686");
  EXPECT_EQ(text::formatNumber(411224), "411224");
  EXPECT_EQ(text::formatNumber(2.5), "2.5");
  EXPECT_EQ(text::formatNumber(1.0 / 3.0), "0.333333");
  EXPECT_EQ(text::formatNumber(1e-9), "0");
  EXPECT_EQ(text::formatNumber(-0.0), "0");
  EXPECT_EQ(text::formatNumber(-7.25), "-7.25");
  EXPECT_EQ(text::formatNumber(1e15), "1000000000000000");
}

TEST(Text, SplitJoinRoundTrip) {
  const auto parts = text::split("a|b||c", '|');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[2], "");
  EXPECT_EQ(text::join(parts, "|"), "a|b||c");
}

TEST(Text, ParseInteger) {
  EXPECT_EQ(text::parseInteger("32001001"), 32001001);
  EXPECT_EQ(text::parseInteger("-3"), -3);
  EXPECT_FALSE(text::parseInteger("3.0"));
  EXPECT_FALSE(text::parseInteger(""));
  EXPECT_FALSE(text::parseInteger("12x"));
}
