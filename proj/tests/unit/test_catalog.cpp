#include "alphaforge/factory/catalog.h"
#include "alphaforge/llm/provider.h"

#include <gtest/gtest.h>

#include <sstream>

using namespace alphaforge::factory;

TEST(Catalog, BuiltinHasNineCategories) {
    auto c = builtin_catalog();
    EXPECT_EQ(c.categories().size(), 9u);
    EXPECT_GE(c.size(), 90u);
    EXPECT_EQ(c.version(), 1);
    auto pe = c.find("Fundamental::Price-to-Earnings Ratio (P/E)");
    ASSERT_TRUE(pe.has_value());
    EXPECT_EQ(c.needs_fields(*pe), (std::vector<std::string>{"EPS"}));
    auto mom = c.find("Momentum::Price Momentum");
    ASSERT_TRUE(mom.has_value());
    EXPECT_EQ(c.entry(*mom).expression, "(CLOSE - DELAY(CLOSE, 14))");
    EXPECT_TRUE(c.needs_fields(*mom).empty());
    for (const auto& e : c.entries()) EXPECT_EQ(e.provenance, Provenance::Builtin);
}

TEST(Catalog, EmptyManifestHasNoCategories) {
    std::istringstream in("# only a comment\n\n");
    try {
        read_catalog(in);
        FAIL();
    } catch (const CatalogError& e) {
        EXPECT_NE(std::string(e.what()).find("no categories"), std::string::npos);
    }
}

TEST(Catalog, BadRowIsListedWithItsPosition) {
    std::istringstream in(
        "Momentum | Price Momentum | (CLOSE - DELAY(CLOSE, 14))\n"
        "Momentum | Broken | (CLOSE - \n"
        "Volatility | Range | HIGH - LOW\n");
    try {
        read_catalog(in);
        FAIL();
    } catch (const CatalogError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(Catalog, DuplicateRowRejected) {
    std::istringstream in(
        "Momentum | A | CLOSE\n"
        "Momentum | A | OPEN\n");
    EXPECT_THROW(read_catalog(in), CatalogError);
}

TEST(Catalog, UnknownCategoryRejected) {
    std::istringstream in("Astrology | Moon | CLOSE\n");
    EXPECT_THROW(read_catalog(in), CatalogError);
}

TEST(Catalog, AddEntryBumpsVersionAndLeavesOldIntact) {
    auto c = builtin_catalog();
    auto next = c.add_entries({{"Momentum", "Fresh", "DELAY(CLOSE, 3)", Provenance::User, 0}});
    EXPECT_EQ(next.size(), c.size() + 1);
    EXPECT_EQ(next.version(), c.version() + 1);
    EXPECT_EQ(next.entries().back().added_version, next.version());
    EXPECT_EQ(c.size(), builtin_catalog().size());
}

TEST(Catalog, AddDuplicateFailsAndLeavesCatalogUntouched) {
    auto c = builtin_catalog();
    auto before = c;
    EXPECT_THROW(c.add_entries({{"Momentum", "Price Momentum", "CLOSE", Provenance::User, 0}}), CatalogError);
    EXPECT_TRUE(c == before);
}

TEST(Catalog, LlmBatchRoundTripsThroughSaveAndLoad) {
    std::vector<alphaforge::llm::Proposal> batch{
        {"Momentum", "P1", "DELAY(CLOSE, 2)"},
        {"Volatility", "P2", "STD(CLOSE, 5)"},
        {"Liquidity", "P3", "SMA(VOLUME, 5)"},
        {"Technical", "P4", "EMA(CLOSE, 7)"},
        {"Quality", "P5", "CLOSE / OPEN"},
    };
    auto review = alphaforge::llm::review_proposals(batch);
    ASSERT_EQ(review.accepted.size(), 5u);
    auto merged = builtin_catalog().add_entries(review.accepted);
    for (std::size_t i = merged.size() - 5; i < merged.size(); ++i) {
        EXPECT_EQ(merged.entry(i).provenance, Provenance::Llm);
    }
    std::stringstream buf;
    save_catalog(merged, buf);
    auto back = read_catalog(buf);
    EXPECT_TRUE(back == merged);
}

TEST(Catalog, FilterByCategory) {
    auto c = builtin_catalog();
    auto tech = c.filter_by_category("Technical");
    ASSERT_FALSE(tech.empty());
    for (const auto& e : tech) EXPECT_EQ(e.category, "Technical");
    EXPECT_EQ(tech.front().name, c.entry(c.indices_of("Technical").front()).name);
    EXPECT_THROW(c.filter_by_category("Astrology"), CatalogError);
}

TEST(Catalog, CategoryNamesAreCaseInsensitive) {
    EXPECT_EQ(canonical_category("mean reversion"), "Mean Reversion");
    EXPECT_EQ(canonical_category("MACRO ECONOMICS"), "Macro Economics");
    EXPECT_FALSE(canonical_category("macro").has_value());
}
