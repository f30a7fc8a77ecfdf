#include "../support/fixtures.h"
#include "../support/oracles.h"

#include "alphaforge/common/missing.h"
#include "alphaforge/data/synth.h"
#include "alphaforge/dsl/parser.h"
#include "alphaforge/eval/evaluator.h"
#include "alphaforge/eval/kernels.h"
#include "alphaforge/factory/catalog.h"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace alphaforge;

namespace {

eval::AlphaSeries run(const std::string& text, const data::PanelPtr& p) {
    return eval::evaluate(dsl::parse(text), data::PanelSlice::whole(p));
}

std::vector<double> row(const eval::AlphaSeries& s, std::size_t i) { return {s.row(i).begin(), s.row(i).end()}; }

}  // namespace

TEST(Kernels, DelayShifts) {
    std::vector<double> x{1, 2, 3, 4, 5}, out(5);
    eval::kernels::delay(x, 1, out);
    EXPECT_TRUE(is_missing(out[0]));
    EXPECT_EQ(std::vector<double>(out.begin() + 1, out.end()), (std::vector<double>{1, 2, 3, 4}));
}

TEST(Kernels, WindowWithMissingIsMissing) {
    std::vector<double> x{1, 2, kMissing, 4, 5, 6}, out(6);
    eval::kernels::rolling_mean(x, 2, out);
    EXPECT_TRUE(is_missing(out[2]));
    EXPECT_TRUE(is_missing(out[3]));
    EXPECT_EQ(out[4], 4.5);
}

TEST(Kernels, RsiFlatIsFifty) {
    std::vector<double> x(20, 7.0), out(20);
    eval::kernels::rsi(x, 14, out);
    EXPECT_EQ(out[14], 50.0);
    EXPECT_EQ(out[19], 50.0);
}

TEST(Kernels, CrossSectionRankAndZscore) {
    std::vector<double> x{3, 1, 2, 2}, out(4);
    eval::kernels::cs_rank(x, out);
    EXPECT_EQ(out, (std::vector<double>{1.0, 0.0, 0.5, 0.5}));
    std::vector<double> one{5}, o1(1);
    eval::kernels::cs_rank(one, o1);
    EXPECT_EQ(o1[0], 0.5);
    std::vector<double> y{1, 2, 3}, z(3);
    eval::kernels::cs_zscore(y, z);
    EXPECT_DOUBLE_EQ(z[0], -1.0);
    EXPECT_DOUBLE_EQ(z[2], 1.0);
}

TEST(Evaluate, DpoOnConstantSeriesIsZeroAfterWarmup) {
    auto p = fixture::close_panel({std::vector<double>(40, 12.5)});
    auto s = run("(CLOSE - DELAY(SMA(CLOSE, 14), 7))", p);
    for (std::size_t t = 0; t < 40; ++t) {
        if (t < 20) {
            EXPECT_TRUE(is_missing(s.at(0, t)));
        } else {
            EXPECT_EQ(s.at(0, t), 0.0);
        }
    }
}

TEST(Evaluate, DpoMatchesLoopOracle) {
    std::mt19937_64 rng(30);
    auto close = fixture::random_walk(rng, 30);
    auto p = fixture::close_panel({close});
    auto s = run("(CLOSE - DELAY(SMA(CLOSE, 14), 7))", p);
    auto want = oracle::dpo(close);
    for (std::size_t t = 0; t < 30; ++t) {
        if (std::isnan(want[t])) {
            EXPECT_TRUE(is_missing(s.at(0, t)));
        } else {
            EXPECT_NEAR(s.at(0, t), want[t], 1e-12);
        }
    }
}

TEST(Evaluate, PointwiseDomainRules) {
    auto p = fixture::close_panel({{4, 0, 9, 16, 1, 1, 1, 1, 1, 1}});
    auto sq = run("SQRT(CLOSE - 1)", p);
    EXPECT_EQ(sq.at(0, 0), std::sqrt(3.0));
    EXPECT_TRUE(is_missing(sq.at(0, 1)));
    EXPECT_EQ(sq.at(0, 4), 0.0);
    auto lg = run("LOG(CLOSE)", p);
    EXPECT_TRUE(is_missing(lg.at(0, 1)));
    auto div = run("1 / CLOSE", p);
    EXPECT_TRUE(is_missing(div.at(0, 1)));
    EXPECT_EQ(div.at(0, 0), 0.25);
}

TEST(Evaluate, ConditionalSelectsBranch) {
    auto p = fixture::close_panel({{1, 5, 3, 3}});
    auto s = run("IF(CLOSE > 2, CLOSE, 0 - CLOSE)", p);
    EXPECT_EQ(row(s, 0), (std::vector<double>{-1, 5, 3, 3}));
    auto guarded = run("IF(CLOSE > 2, 1, 1 / (CLOSE - 1))", p);
    EXPECT_EQ(guarded.at(0, 1), 1.0);
    EXPECT_TRUE(is_missing(guarded.at(0, 0)));
}

TEST(Evaluate, MissingFieldIsAnError) {
    auto p = fixture::close_panel({{1, 2, 3}});
    EXPECT_THROW(run("CLOSE / EPS", p), eval::EvalError);
}

TEST(Evaluate, TooFewDatesForLookbackIsAnError) {
    auto p = fixture::close_panel({{1, 2, 3}});
    EXPECT_THROW(run("DELAY(CLOSE, 5)", p), eval::EvalError);
}

TEST(Evaluate, CrossSectionRankPerDate) {
    auto p = fixture::close_panel({{1, 3}, {2, 2}, {3, 1}});
    auto s = run("CS_RANK(CLOSE)", p);
    EXPECT_EQ(s.at(0, 0), 0.0);
    EXPECT_EQ(s.at(2, 0), 1.0);
    EXPECT_EQ(s.at(0, 1), 1.0);
    EXPECT_EQ(s.at(1, 1), 0.5);
}

TEST(ForwardReturns, TwoDayExample) {
    auto p = fixture::close_panel({{100, 110}});
    auto f = eval::forward_returns(data::PanelSlice::whole(p), 1);
    EXPECT_NEAR(f.at(0, 0), 0.10, 1e-15);
    EXPECT_TRUE(is_missing(f.at(0, 1)));
}

TEST(ForwardReturns, ConstantPricesAreZero) {
    auto p = fixture::close_panel({std::vector<double>(10, 3.0)});
    auto f = eval::forward_returns(data::PanelSlice::whole(p), 2);
    for (std::size_t t = 0; t < 8; ++t) EXPECT_EQ(f.at(0, t), 0.0);
    EXPECT_TRUE(is_missing(f.at(0, 8)));
    EXPECT_THROW(eval::forward_returns(data::PanelSlice::whole(p), 0), eval::EvalError);
}

TEST(Batch, IdenticalExpressionsGiveIdenticalSeries) {
    auto p = data::synthesize_panel(data::planted_panel_config(1));
    auto e = dsl::parse("RSI(14)");
    auto out = eval::evaluate_batch({e, e}, data::PanelSlice::whole(p), 2);
    ASSERT_TRUE(out[0].ok() && out[1].ok());
    EXPECT_EQ(out[0].series->values().size(), out[1].series->values().size());
    for (std::size_t k = 0; k < out[0].series->values().size(); ++k) {
        double a = out[0].series->values()[k], b = out[1].series->values()[k];
        EXPECT_TRUE(a == b || (std::isnan(a) && std::isnan(b)));
    }
}

TEST(Batch, CatalogOnLargePanelMatchesSingleEvaluationAndIsolatesErrors) {
    data::SynthConfig cfg;
    cfg.seed = 4;
    cfg.n_tickers = 50;
    cfg.n_days = 300;
    cfg.extra_fields = {"EPS", "ROE", "BOOK_VALUE_PER_SHARE", "REVENUE", "GDP", "CPI"};
    auto p = data::synthesize_panel(cfg);
    auto slice = data::PanelSlice::whole(p);
    auto catalog = factory::builtin_catalog();
    std::vector<dsl::AlphaExpr> exprs;
    for (std::size_t i = 0; i < catalog.size(); ++i) exprs.push_back(catalog.expr(i));
    exprs.push_back(dsl::parse("CLOSE / NOT_A_FIELD"));

    auto batch = eval::evaluate_batch(exprs, slice, 4);
    ASSERT_EQ(batch.size(), exprs.size());
    EXPECT_FALSE(batch.back().ok());
    EXPECT_NE(batch.back().error.find("NOT_A_FIELD"), std::string::npos);
    std::size_t ok = 0;
    for (std::size_t i = 0; i + 1 < exprs.size(); ++i) {
        if (!batch[i].ok()) continue;
        ++ok;
        auto single = eval::evaluate(exprs[i], slice);
        const auto& a = batch[i].series->values();
        const auto& b = single.values();
        bool same = a.size() == b.size();
        for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k] == b[k] || (std::isnan(a[k]) && std::isnan(b[k]));
        EXPECT_TRUE(same) << catalog.entry(i).id();
    }
    EXPECT_GT(ok, 45u);
}

TEST(AlphaSeriesCsv, RoundTrip) {
    auto p = data::synthesize_panel(data::planted_panel_config(2));
    auto s = run("EMA(CLOSE, 5)", p);
    std::stringstream buf;
    eval::write_series_csv(s, buf);
    auto back = eval::read_series_csv(buf);
    ASSERT_TRUE(back.same_shape(s));
    for (std::size_t k = 0; k < s.values().size(); ++k) {
        double a = s.values()[k], b = back.values()[k];
        EXPECT_TRUE(a == b || (std::isnan(a) && std::isnan(b)));
    }
}
