// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include "../support/fixtures.h"
#include "../support/oracles.h"

#include "alphaforge/agents/ic.h"
#include "alphaforge/agents/selection.h"
#include "alphaforge/backtest/backtest.h"
#include "alphaforge/backtest/metrics.h"
#include "alphaforge/common/missing.h"
#include "alphaforge/data/synth.h"
#include "alphaforge/dsl/parser.h"
#include "alphaforge/eval/evaluator.h"
#include "alphaforge/factory/catalog.h"
#include "alphaforge/optim/mlp.h"
#include "alphaforge/optim/weights.h"
#include "alphaforge/pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace alphaforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Max |a - b| over cells; a missing/defined mismatch counts as infinite.
double max_gap(std::span<const double> a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        bool ma = std::isnan(a[i]), mb = std::isnan(b[i]);
        if (ma != mb) return INFINITY;
        if (!ma) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("alphaforge_acceptance_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// 1 ---------------------------------------------------------------------------
Outcome catalog_conformance() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t rows = 0;
    std::istringstream manifest{std::string(factory::builtin_manifest())};
    for (std::string line; std::getline(manifest, line);) {
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] != '#') ++rows;
    }
    auto catalog = factory::builtin_catalog();
    o.require(catalog.size() == rows, "catalog holds " + std::to_string(catalog.size()) + " of " +
                                          std::to_string(rows) + " manifest rows");
    o.require(catalog.categories().size() == 9, "expected 9 categories");

    for (std::size_t i = 0; i < catalog.size(); ++i) {
        auto text = dsl::print(catalog.expr(i));
        auto again = dsl::parse(text);
        o.require(again == catalog.expr(i) && dsl::print(again) == text,
                  "round trip failed for " + catalog.entry(i).id());
    }

    auto panel = data::synthesize_panel(data::planted_panel_config(7));
    auto whole = data::PanelSlice::whole(panel);
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        bool available = true;
        for (const auto& f : catalog.meta(i).required_fields) available = available && panel->has_field(f);
        if (!available) continue;
        try {
            eval::evaluate(catalog.expr(i), whole);
            ++evaluated;
        } catch (const std::exception& e) {
            o.require(false, catalog.entry(i).id() + ": " + e.what());
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 10.0, "took " + fmt(secs) + " s");
    if (o.pass) {
        o.detail = std::to_string(rows) + " rows parse and round-trip, " + std::to_string(evaluated) +
                   " evaluate on the synthetic panel, " + fmt(secs) + " s";
    }
    return o;
}

// 2 ---------------------------------------------------------------------------
Outcome evaluator_oracle() {
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    const std::vector<std::pair<std::string, std::function<std::vector<double>(const std::vector<double>&)>>> cases = {
        {"(CLOSE - DELAY(SMA(CLOSE, 14), 7))", oracle::dpo},
        {"RSI(14)", [](const std::vector<double>& c) { return oracle::rsi(c, 14); }},
        {"EMA(CLOSE, 20)", [](const std::vector<double>& c) { return oracle::ema(c, 20); }},
        {"STD(CLOSE, 20)", [](const std::vector<double>& c) { return oracle::stdev(c, 20); }},
        {"(UPPER_BAND - LOWER_BAND) / SMA(CLOSE, 20)", oracle::bollinger_width},
    };
    for (int fixture = 0; fixture < 50; ++fixture) {
        std::vector<std::vector<double>> closes;
        for (int i = 0; i < 4; ++i) closes.push_back(fixture::random_walk(rng, 30));
        auto panel = fixture::close_panel(closes);
        auto slice = data::PanelSlice::whole(panel);
        for (const auto& [text, ref] : cases) {
            auto series = eval::evaluate(dsl::parse(text), slice);
            for (std::size_t i = 0; i < closes.size(); ++i) {
                double gap = max_gap(series.row(i), ref(closes[i]));
                o.require(gap <= 1e-12, text + " differs by " + fmt(gap));
                worst = std::max(worst, gap);
            }
        }
        for (int h : {1, 3}) {
            auto fwd = eval::forward_returns(slice, h);
            for (std::size_t i = 0; i < closes.size(); ++i) {
                double gap = max_gap(fwd.row(i), oracle::forward_returns(closes[i], h));
                o.require(gap <= 1e-12, "forward return h=" + std::to_string(h) + " differs by " + fmt(gap));
                worst = std::max(worst, gap);
            }
        }
    }
    if (o.pass) o.detail = "DPO, RSI, EMA, STD, Bollinger width, forward returns; max |diff| " + fmt(worst);
    return o;
}

// 3 ---------------------------------------------------------------------------
Outcome ic_oracle() {
    Outcome o;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
        std::vector<double> x(20), y(20);
        for (int i = 0; i < 20; ++i) {
            x[i] = z(rng);
            y[i] = 0.3 * x[i] + z(rng);
            if (s % 3 == 0) x[i] = std::round(x[i] * 2.0);  // ties
        }
        auto p = agents::information_coefficient(x, y, agents::IcMethod::Pearson);
        auto r = agents::information_coefficient(x, y, agents::IcMethod::Rank);
        o.require(p && r, "IC undefined on a non-degenerate sample");
        if (!p || !r) continue;
        worst = std::max({worst, std::abs(*p - oracle::pearson(x, y)), std::abs(*r - oracle::rank_ic(x, y))});
    }
    o.require(worst < 1e-12, "max |diff| " + fmt(worst));

    std::size_t invariant = 0;
    for (int s = 0; s < 200; ++s) {
        std::vector<double> x(20), y(20), fx(20);
        for (int i = 0; i < 20; ++i) {
            x[i] = z(rng);
            y[i] = z(rng);
            fx[i] = std::exp(x[i]) + x[i] * x[i] * x[i];
        }
        auto a = agents::information_coefficient(x, y, agents::IcMethod::Rank);
        auto b = agents::information_coefficient(fx, y, agents::IcMethod::Rank);
        if (a && b && *a == *b) ++invariant;
    }
    o.require(invariant == 200, "rank IC changed under a monotone transform in " + std::to_string(200 - invariant) +
                                    " cases");
    if (o.pass) o.detail = "1000 samples max |diff| " + fmt(worst) + "; 200/200 monotone-invariant";
    return o;
}

// 4 ---------------------------------------------------------------------------
Outcome selection_equivalence() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto cats = factory::known_categories();
    std::vector<std::string> order(cats.begin(), cats.end());
    std::size_t nonempty = 0;
    for (int inst = 0; inst < 500 && o.pass; ++inst) {
        std::vector<std::string> chosen = order;
        std::shuffle(chosen.begin(), chosen.end(), rng);
        chosen.resize(1 + rng() % 5);

        std::vector<factory::CatalogEntry> entries;
        std::vector<oracle::Candidate> candidates;
        std::map<std::string, agents::AgentScore> scores;
        for (const auto& c : chosen) {
            const int n = 1 + static_cast<int>(rng() % 5);
            for (int a = 0; a < n; ++a) {
                factory::CatalogEntry e{c, "A" + std::to_string(a), "CLOSE", factory::Provenance::User, 1};
                double theta = u(rng) * 0.8 - 0.2;
                double rho = u(rng);
                if (inst % 4 == 0) theta = std::round(theta * 4.0) / 4.0;  // ties
                agents::AgentScore s;
                s.id = e.id();
                s.theta = theta;
                s.rho = rho;
                scores[e.id()] = s;
                candidates.push_back({c, e.name, theta, rho});
                entries.push_back(std::move(e));
            }
        }
        agents::SelectionConfig cfg;
        cfg.w_c = std::round(u(rng) * 10.0) / 10.0;
        cfg.w_r = 1.0 - cfg.w_c;
        cfg.threshold = u(rng) * 0.5;
        cfg.per_category_shortlist = 1 + rng() % 5;

        auto ids_of = [](const agents::SelectionResult& r) {
            std::vector<std::string> ids;
            for (const auto& s : r.selected) ids.push_back(s.id);
            return ids;
        };
        auto got = ids_of(agents::select_alphas(factory::AlphaCatalog(entries, 1), scores, cfg));
        auto want = oracle::select(candidates, cfg.w_c, cfg.w_r, cfg.threshold, cfg.per_category_shortlist, order);
        o.require(got == want, "instance " + std::to_string(inst) + " disagrees with the oracle");
        nonempty += !want.empty();

        std::shuffle(entries.begin(), entries.end(), rng);
        auto permuted = ids_of(agents::select_alphas(factory::AlphaCatalog(entries, 1), scores, cfg));
        o.require(permuted == got, "instance " + std::to_string(inst) + " depends on input order");
    }
    if (o.pass) o.detail = "500 instances match (" + std::to_string(nonempty) + " non-empty), permutation-stable";
    return o;
}

// 5 ---------------------------------------------------------------------------
Outcome mlp_gradient() {
    Outcome o;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    std::size_t kinks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int inputs = 1 + static_cast<int>(rng() % 6);
        const int hidden = 1 + static_cast<int>(rng() % 12);
        const int rows = 1 + static_cast<int>(rng() % 16);
        optim::MlpModel m(inputs, hidden, rng());
        Eigen::MatrixXd x(rows, inputs);
        Eigen::VectorXd y(rows);
        std::normal_distribution<double> z(0.0, 1.0);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < inputs; ++c) x(r, c) = z(rng);
            y(r) = z(rng);
        }
        auto check = optim::gradient_check(m, x, y, 0.01 * (trial % 3));
        worst = std::max(worst, check.max_relative_error);
        kinks += check.skipped_kinks;
    }
    o.require(worst < 1e-5, "max relative error " + fmt(worst));

    std::mt19937_64 data_rng(55);
    std::normal_distribution<double> z(0.0, 1.0);
    const int n = 512;
    Eigen::MatrixXd x(n, 3), xv(128, 3);
    Eigen::VectorXd y(n), yv(128);
    auto fill = [&](Eigen::MatrixXd& a, Eigen::VectorXd& b) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            for (int c = 0; c < 3; ++c) a(r, c) = z(data_rng);
            b(r) = 0.5 * a(r, 0) - 0.3 * a(r, 1) + 0.2 * a(r, 2);
        }
    };
    fill(x, y);
    fill(xv, yv);
    optim::TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.l2_lambda = 0.0;
    cfg.max_epochs = 1000;
    cfg.patience = 1000;
    auto result = optim::train(optim::MlpModel(3, 10, 1), {x, y, xv, yv}, cfg);
    const double fit = optim::mse(result.model, x, y);
    o.require(fit < 1e-4, "linear target training MSE " + fmt(fit));
    if (o.pass) {
        o.detail = "50 pairs max rel err " + fmt(worst) + " (" + std::to_string(kinks) +
                   " kink params skipped); linear fit MSE " + fmt(fit);
    }
    return o;
}

// 6 ---------------------------------------------------------------------------
Outcome weights_oracle() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> z(0.0, 1.0);
    double worst_w = 0.0, worst_c = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int a = 1 + static_cast<int>(rng() % 5);
        const int rows = 40 + static_cast<int>(rng() % 60);
        optim::MlpModel m(a, 8, rng());
        Eigen::MatrixXd x(rows, a);
        std::vector<std::vector<double>> xr(rows, std::vector<double>(a));
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < a; ++c) xr[r][c] = x(r, c) = z(rng);
        }
        std::vector<std::string> ids;
        for (int c = 0; c < a; ++c) ids.push_back("Momentum::A" + std::to_string(c));
        auto w = optim::extract_weights(m, x, ids);
        Eigen::VectorXd pred = m.predict(x);
        auto beta = oracle::normal_equations(xr, std::vector<double>(pred.data(), pred.data() + rows));
        worst_w = std::max(worst_w, std::abs(w.intercept - beta[0]));
        for (int c = 0; c < a; ++c) worst_w = std::max(worst_w, std::abs(w.weights[c] - beta[c + 1]));

        auto panel = fixture::close_panel({fixture::random_walk(rng, 12), fixture::random_walk(rng, 12),
                                           fixture::random_walk(rng, 12)});
        auto slice = data::PanelSlice::whole(panel);
        std::vector<eval::AlphaSeries> series;
        for (int c = 0; c < a; ++c) series.push_back(fixture::random_alpha(rng, slice, 0.1));
        auto combined = optim::combine(w.weights, series);
        for (std::size_t t = 0; t < slice.n_tickers(); ++t) {
            for (std::size_t d = 0; d < slice.n_dates(); ++d) {
                double want = 0.0;
                for (int c = 0; c < a; ++c) want += w.weights[c] * series[c].at(t, d);
                double got = combined.at(t, d);
                if (std::isnan(want) != std::isnan(got)) {
                    worst_c = INFINITY;
                } else if (!std::isnan(want)) {
                    worst_c = std::max(worst_c, std::abs(got - want));
                }
            }
        }
    }
    o.require(worst_w < 1e-8, "weights differ by " + fmt(worst_w));
    o.require(worst_c < 1e-12, "combine differs by " + fmt(worst_c));
    if (o.pass) o.detail = "weights max |diff| " + fmt(worst_w) + ", combine max |diff| " + fmt(worst_c);
    return o;
}

// 7 ---------------------------------------------------------------------------
Outcome backtest_accounting() {
    Outcome o;
    std::mt19937_64 rng(7);
    double worst_identity = 0.0, worst_conservation = 0.0;
    for (int trial = 0; trial < 200 && o.pass; ++trial) {
        data::SynthConfig sc;
        sc.seed = 1000 + trial;
        sc.n_tickers = 3;
        sc.n_days = 60;
        auto panel = data::synthesize_panel(sc);
        auto slice = data::PanelSlice::whole(panel);
        auto alpha = fixture::random_alpha(rng, slice, 0.1);
        backtest::BacktestConfig cfg;
        cfg.k = 1 + rng() % 3;
        cfg.n = 1 + rng() % cfg.k;
        cfg.cost_bps = trial % 2 ? 0.0 : 10.0;
        auto r = backtest::run_backtest(alpha, slice, cfg);

        std::map<std::string, double> prev_shares;
        double prev_cash = 1.0;
        bool invested = false;
        for (std::size_t d = 0; d < r.history.size(); ++d) {
            const auto& day = r.history[d];
            double marked = day.cash;
            for (const auto& [t, sh] : day.shares) marked += sh * slice.series("CLOSE", *panel->ticker_index(t))[d];
            worst_identity = std::max(worst_identity, std::abs(day.net_worth - marked));

            std::size_t buys = 0, sells = 0;
            for (const auto& tr : r.trades) {
                if (tr.date == day.date) (tr.buy ? buys : sells)++;
            }
            if (invested) {
                o.require(buys <= cfg.n && sells <= cfg.n, "more than n swaps on " + day.date.to_string());
                o.require(day.removals <= cfg.n && day.additions <= cfg.n, "turnover counts exceed n");
            } else {
                o.require(buys == 0 || buys == cfg.k, "initial construction bought " + std::to_string(buys));
            }
            if (cfg.cost_bps == 0.0) {
                double before = prev_cash;
                for (const auto& [t, sh] : prev_shares) before += sh * slice.series("CLOSE", *panel->ticker_index(t))[d];
                worst_conservation = std::max(worst_conservation, std::abs(before - day.net_worth));
            }
            invested = invested || !day.shares.empty();
            prev_shares = day.shares;
            prev_cash = day.cash;
        }
    }
    o.require(worst_identity <= 1e-10, "net worth differs from cash + holdings by " + fmt(worst_identity));
    o.require(worst_conservation <= 1e-10, "zero-cost rebalance changed value by " + fmt(worst_conservation));

    auto walk = fixture::random_walk(rng, 60);
    auto single = fixture::close_panel({walk});
    auto slice = data::PanelSlice::whole(single);
    eval::AlphaSeries ones(slice.ticker_names(), {slice.dates().begin(), slice.dates().end()},
                           std::vector<double>(60, 1.0));
    backtest::BacktestConfig one;
    one.k = 1;
    one.n = 1;
    auto r = backtest::run_backtest(ones, slice, one);
    bool exact = true;
    for (std::size_t d = 0; d < 60; ++d) exact = exact && r.history[d].net_worth == (1.0 / walk[0]) * walk[d];
    o.require(exact, "single-asset net worth is not price / first price");
    if (o.pass) {
        o.detail = "200 panels: identity " + fmt(worst_identity) + ", conservation " + fmt(worst_conservation) +
                   ", swaps <= n, single-asset exact";
    }
    return o;
}

// 8 ---------------------------------------------------------------------------
Outcome metrics_oracle() {
    Outcome o;
    std::mt19937_64 rng(8);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto nw = fixture::random_walk(rng, 250, 0.01);
        const double rf = trial % 2 ? 0.02 : 0.0;
        auto got = backtest::compute_metrics(nw, {rf, 252});
        auto want = oracle::metrics(nw, rf, 252);
        const std::pair<double, double> pairs[] = {
            {got.cumulative_return, want.cumulative}, {got.annual_return, want.annual},
            {got.sharpe, want.sharpe},                {got.volatility, want.volatility},
            {got.sortino, want.sortino},              {got.calmar, want.calmar},
            {got.max_drawdown, want.max_drawdown}};
        for (auto [a, b] : pairs) worst = std::max(worst, std::abs(a - b));
    }
    o.require(worst <= 1e-10, "max |diff| " + fmt(worst));
    const std::vector<double> path{1.0, 1.1, 0.99};
    const double dd = backtest::max_drawdown(path);
    o.require(dd == (1.1 - 0.99) / 1.1 && std::abs(dd - 0.1) < 1e-15,
              "maxDD of [1.0, 1.1, 0.99] = " + std::to_string(dd));
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "100 walks max |diff| %s; maxDD[1.0,1.1,0.99] = %.17g (nearest double to (1.1-0.99)/1.1)",
                      fmt(worst).c_str(), dd);
        o.detail = buf;
    }
    return o;
}

// 9 ---------------------------------------------------------------------------
pipeline::RunConfig planted_run_config() {
    pipeline::RunConfig cfg;
    return cfg;
}

factory::AlphaCatalog with_entries(std::vector<factory::CatalogEntry> extra) {
    return factory::builtin_catalog().add_entries(std::move(extra));
}

Outcome planted_signal() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    auto panel = data::synthesize_panel(data::planted_panel_config(7, 0.6));
    auto catalog = with_entries({{"Technical", "Planted Signal", "SIGNAL", factory::Provenance::User, 0}});
    llm::StubProvider provider(11);
    auto cfg = planted_run_config();
    auto result = pipeline::run_pipeline(panel, catalog, provider, cfg);

    const std::string planted = "Technical::Planted Signal";
    o.require(result.selection.is_selected(planted), "planted alpha was not selected");
    auto it = result.scoring.scores.find(planted);
    o.require(it != result.scoring.scores.end(), "planted alpha was not scored");
    std::size_t decoys = 0;
    double best_decoy = -INFINITY;
    if (it != result.scoring.scores.end()) {
        for (const auto& [id, s] : result.scoring.scores) {
            if (id == planted) continue;
            ++decoys;
            best_decoy = std::max(best_decoy, s.theta);
        }
        o.require(it->second.theta > best_decoy, "a decoy has confidence " + fmt(best_decoy) + " >= planted " +
                                                     fmt(it->second.theta));
    }
    o.require(decoys >= 20, "only " + std::to_string(decoys) + " decoys were scored");

    auto split = pipeline::split_panel(panel, cfg);
    std::mt19937_64 rng(99);
    std::vector<double> baseline;
    for (int i = 0; i < 50; ++i) {
        auto random = fixture::random_alpha(rng, split.test);
        baseline.push_back(backtest::run_backtest(random, split.test, cfg.backtest).metrics.annualized_sharpe);
    }
    std::sort(baseline.begin(), baseline.end());
    const double median = 0.5 * (baseline[24] + baseline[25]);
    const double sharpe = result.backtest.metrics.annualized_sharpe;
    o.require(sharpe >= median + 1.0, "Sharpe " + fmt(sharpe) + " vs random median " + fmt(median));
    const double secs = seconds_since(t0);
    o.require(secs < 120.0, "took " + fmt(secs) + " s");
    if (o.pass && it != result.scoring.scores.end()) {
        o.detail = "selected; confidence " + fmt(it->second.theta) + " > best of " + std::to_string(decoys) +
                   " decoys " + fmt(best_decoy) + "; annualized Sharpe " + fmt(sharpe) + " vs random median " +
                   fmt(median) + "; " + fmt(secs) + " s";
    }
    return o;
}

// 10 --------------------------------------------------------------------------
std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
    }
    return files;
}

Outcome determinism() {
    Outcome o;
    auto panel = data::synthesize_panel(data::planted_panel_config(7, 0.6));
    auto catalog = with_entries({{"Technical", "Planted Signal", "SIGNAL", factory::Provenance::User, 0}});
    std::vector<std::map<std::string, std::string>> runs;
    for (int run = 0; run < 2; ++run) {
        llm::StubProvider provider(11);
        auto dir = scratch_dir("determinism_" + std::to_string(run));
        auto cfg = planted_run_config();
        cfg.threads = run == 0 ? 1 : 4;
        pipeline::run_pipeline(panel, catalog, provider, cfg, dir);
        runs.push_back(read_dir(dir));
    }
    o.require(runs[0].size() >= 6, "only " + std::to_string(runs[0].size()) + " artifacts written");
    o.require(runs[0] == runs[1], "output directories differ");
    if (o.pass) o.detail = std::to_string(runs[0].size()) + " artifacts byte-identical (1 vs 4 threads)";
    return o;
}

// 11 --------------------------------------------------------------------------
struct AblationRun {
    double bear_ic = 0.0;
    std::size_t bear_dates = 0;
    std::vector<std::string> selected;
};

AblationRun run_ablation(const data::PanelPtr& panel, const factory::AlphaCatalog& catalog, double w_c, double w_r) {
    llm::StubProvider provider(11);
    auto cfg = planted_run_config();
    cfg.selection.w_c = w_c;
    cfg.selection.w_r = w_r;
    cfg.selection.threshold = 0.2;
    auto result = pipeline::run_pipeline(panel, catalog, provider, cfg);

    AblationRun out;
    for (const auto& s : result.selection.selected) out.selected.push_back(s.id);
    auto split = pipeline::split_panel(panel, cfg);
    auto regimes = pipeline::panel_regimes(panel, cfg.regime);
    auto ic = agents::daily_ic(result.combined_test, eval::forward_returns(split.test, cfg.horizon), cfg.ic_method);
    double sum = 0.0;
    for (std::size_t d = 0; d < ic.size(); ++d) {
        if (regimes.labels[split.test.date_begin() + d] == agents::Regime::Bear && !is_missing(ic[d])) {
            sum += ic[d];
            ++out.bear_dates;
        }
    }
    out.bear_ic = out.bear_dates ? sum / static_cast<double>(out.bear_dates) : kMissing;
    return out;
}

Outcome regime_ablation() {
    Outcome o;
    auto panel = data::synthesize_panel(data::regime_flip_panel_config(7, 0.5));
    auto catalog = with_entries({{"Macro Economics", "Bear Signal", "BEAR_SIGNAL", factory::Provenance::User, 0},
                                 {"Momentum", "Calm Signal", "CALM_SIGNAL", factory::Provenance::User, 0}});
    auto full = run_ablation(panel, catalog, 0.6, 0.4);
    auto ablated = run_ablation(panel, catalog, 1.0, 0.0);
    o.require(full.bear_dates >= 10, "test slice has " + std::to_string(full.bear_dates) + " Bear dates");
    o.require(full.bear_ic > ablated.bear_ic, "Bear IC full " + fmt(full.bear_ic) + " <= ablated " +
                                                  fmt(ablated.bear_ic));
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " + ") + x;
        return s;
    };
    o.detail = "Bear IC full " + fmt(full.bear_ic) + " [" + join(full.selected) + "] vs w_r=0 " +
               fmt(ablated.bear_ic) + " [" + join(ablated.selected) + "] over " + std::to_string(full.bear_dates) +
               " Bear test dates" + (o.pass ? "" : "; " + o.detail);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"catalog conformance", catalog_conformance},
        {"evaluator oracle", evaluator_oracle},
        {"IC oracle", ic_oracle},
        {"selection equivalence", selection_equivalence},
        {"MLP gradient check", mlp_gradient},
        {"weight extraction oracle", weights_oracle},
        {"backtest accounting", backtest_accounting},
        {"metrics oracle", metrics_oracle},
        {"planted-signal end-to-end", planted_signal},
        {"determinism", determinism},
        {"regime ablation", regime_ablation},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s %2zu %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::error_code ec;
    fs::remove_all(fs::temp_directory_path() / ("alphaforge_acceptance_" + std::to_string(::getpid())), ec);
    return failures ? 1 : 0;
}
