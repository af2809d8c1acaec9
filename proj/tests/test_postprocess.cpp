#include "redteam/postprocess.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

using namespace redteam;

namespace {

std::optional<std::string> extract(const std::string& raw,
                                   AttackKind kind = AttackKind::Level1GuidedTrigger,
                                   std::optional<PrivacyField> field = std::nullopt) {
    return extract_answer(raw, kind, TargetLanguage::PythonSource, field);
}

}  // namespace

TEST(ExtractAnswerTest, StopsAtUnescapedQuote) {
    auto out = extract("Step 2: do X\"\nprint(answer)");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "Step 2: do X");
}

TEST(ExtractAnswerTest, FencedBlockInteriorWins) {
    auto out = extract("```python\nanswer = 'Y'\n```");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "answer = 'Y'");
}

TEST(ExtractAnswerTest, FenceWithoutLanguageTag) {
    auto out = extract("```\nline one\nline two\n```");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "line one\nline two");
}

TEST(ExtractAnswerTest, UnterminatedFenceTakesRest) {
    auto out = extract("```python\nkeep going forever");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "keep going forever");
}

TEST(ExtractAnswerTest, FirstFenceWinsOverLater) {
    auto out = extract("```\nfirst\n```\ntext\n```\nsecond\n```");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "first");
}

TEST(ExtractAnswerTest, FencePreferredOverQuote) {
    auto out = extract("prefix \" quote\n```\nfenced body\n```");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "fenced body");
}

TEST(ExtractAnswerTest, VerbatimWhenNoFenceOrQuote) {
    auto out = extract("  plain continuation text  ");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "plain continuation text");
}

TEST(ExtractAnswerTest, EscapedQuotesAreNotTerminators) {
    auto out = extract("say \\\"hi\\\" then stop\" tail");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "say \\\"hi\\\" then stop");
}

TEST(ExtractAnswerTest, EvenBackslashRunBeforeQuoteTerminates) {
    auto out = extract("x\\\\\" tail");
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "x\\\\");
}

TEST(ExtractAnswerTest, EmptyAndWhitespaceAreAbsent) {
    EXPECT_FALSE(extract("").has_value());
    EXPECT_FALSE(extract("   \n\t ").has_value());
    EXPECT_FALSE(extract("\" immediately closed").has_value());
}

TEST(ExtractAnswerTest, IdempotentOnPlainText) {
    std::string raw = "no fence no quote here";
    auto once = extract(raw);
    ASSERT_TRUE(once.has_value());
    auto twice = extract(*once);
    ASSERT_TRUE(twice.has_value());
    EXPECT_EQ(*twice, *once);
}

TEST(ExtractAnswerTest, PrivacyStep1IsolatesUsername) {
    auto out = extract("octocat\" # end", AttackKind::PrivacyStep1);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "octocat");

    out = extract("octocat and more words", AttackKind::PrivacyStep1);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "octocat");

    out = extract("   octocat", AttackKind::PrivacyStep1);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "octocat");
}

TEST(ExtractAnswerTest, PrivacyEmailStopsAtWhitespace) {
    auto out = extract("a@b.com and more", AttackKind::PrivacyStep2, PrivacyField::Email);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "a@b.com");
}

TEST(ExtractAnswerTest, PrivacyLocationKeepsInternalSpaces) {
    auto out = extract("San Francisco, CA\" tail", AttackKind::PrivacyStep2,
                       PrivacyField::Location);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "San Francisco, CA");
}

TEST(ExtractAnswerTest, PrivacyFencedTokenIsolated) {
    auto out = extract("```\nocto-cat extra\n```", AttackKind::PrivacyStep1);
    ASSERT_TRUE(out.has_value());
    EXPECT_EQ(*out, "octo-cat");
}

TEST(ExtractAnswerTest, TotalOnArbitraryBytes) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::string raw;
        size_t n = rng() % 64;
        for (size_t i = 0; i < n; ++i) {
            raw.push_back(static_cast<char>(rng() % 256));
        }
        for (AttackKind kind : kAllAttackKinds) {
            EXPECT_NO_THROW({ auto result = extract(raw, kind); (void)result; });
        }
    }
}
