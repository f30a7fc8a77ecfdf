#include "alphaforge/pipeline/pipeline.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"
#include "alphaforge/eval/evaluator.h"
#include "alphaforge/llm/prompt.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

namespace alphaforge::pipeline {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (!validation_start != !test_start) {
        throw std::invalid_argument("validation_start and test_start must be given together");
    }
    if (!(train_fraction > 0.0) || !(validation_fraction > 0.0) || train_fraction + validation_fraction >= 1.0) {
        throw std::invalid_argument("split fractions must be positive and leave room for a test slice");
    }
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (regime.window < 1 || !(regime.tau > 0.0)) throw std::invalid_argument("regime window and tau must be positive");
    if (hidden < 1) throw std::invalid_argument("hidden layer needs at least one unit");
    if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be at least 1");
    selection.validate();
    train.validate();
    backtest.validate();
}

data::SplitSlices split_panel(const data::PanelPtr& panel, const RunConfig& cfg) {
    if (cfg.validation_start) return data::split(panel, *cfg.validation_start, *cfg.test_start);
    const auto n = static_cast<double>(panel->n_dates());
    auto v = static_cast<std::size_t>(std::floor(n * cfg.train_fraction));
    auto t = static_cast<std::size_t>(std::floor(n * (cfg.train_fraction + cfg.validation_fraction)));
    return data::split_at(data::PanelSlice::whole(panel), v, t);
}

EvaluationReport evaluate_catalog(const factory::AlphaCatalog& catalog, const data::PanelPtr& panel, unsigned threads) {
    std::vector<dsl::AlphaExpr> exprs;
    for (std::size_t i = 0; i < catalog.size(); ++i) exprs.push_back(catalog.expr(i));
    auto whole = data::PanelSlice::whole(panel);
    auto batch = eval::evaluate_batch(exprs, whole, threads);

    EvaluationReport report;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto id = catalog.entry(i).id();
        if (!batch[i].ok()) {
            report.skipped.emplace_back(id, batch[i].error);
            continue;
        }
        report.alphas.push_back({i, id, std::move(*batch[i].series)});
    }
    return report;
}

agents::MarketRegimeSeries panel_regimes(const data::PanelPtr& panel, const data::RegimeParams& params) {
    auto index = data::equal_weight_index(data::PanelSlice::whole(panel));
    return agents::classify_regimes(index, params);
}

eval::AlphaSeries restrict_to(const eval::AlphaSeries& full, const data::PanelSlice& slice) {
    if (full.n_dates() != slice.panel().n_dates() || full.tickers() != slice.ticker_names()) {
        throw std::invalid_argument("series does not span the slice's panel");
    }
    return full.window(slice.date_begin(), slice.date_end());
}

namespace {

std::vector<std::optional<agents::Regime>> window_labels(const agents::MarketRegimeSeries& all,
                                                         const data::PanelSlice& slice) {
    return {all.labels.begin() + static_cast<std::ptrdiff_t>(slice.date_begin()),
            all.labels.begin() + static_cast<std::ptrdiff_t>(slice.date_end())};
}

void attach_llm_scores(ScoringReport& report, const factory::AlphaCatalog& catalog,
                       const std::map<std::string, double>& mean_ic, const RunConfig& cfg, llm::Provider& provider) {
    std::vector<std::string> prompts;
    for (const auto& category : catalog.categories()) {
        llm::PromptContext ctx;
        ctx.task = llm::Task::ScoreAlphas;
        ctx.market_summary = "Current regime: " + std::string(data::to_string(report.current_regime));
        for (auto i : catalog.indices_of(category)) {
            auto it = mean_ic.find(catalog.entry(i).id());
            if (it != mean_ic.end()) ctx.factor_history.push_back({it->first, it->second});
        }
        if (!ctx.factor_history.empty()) prompts.push_back(llm::render_prompt(ctx, "score_alphas"));
    }
    auto replies = llm::complete_all(provider, prompts, llm::Task::ScoreAlphas, cfg.max_in_flight);
    for (const auto& reply : replies) {
        if (!reply.ok()) throw std::runtime_error("LLM scoring failed: " + reply.error);
        for (const auto& s : reply.response->scores) {
            auto it = report.scores.find(s.name);
            if (it == report.scores.end()) continue;
            it->second.llm_confidence = s.confidence;
            it->second.llm_risk = s.risk;
        }
    }
}

}  // namespace

ScoringReport score_alphas(const EvaluationReport& evaluated, const factory::AlphaCatalog& catalog,
                           const data::PanelPtr& panel, const data::SplitSlices& split, const RunConfig& cfg,
                           llm::Provider* llm) {
    ScoringReport report;
    auto all = panel_regimes(panel, cfg.regime);
    report.train_regimes.params = cfg.regime;
    report.train_regimes.labels = window_labels(all, split.train);
    auto current = report.train_regimes.last();
    if (!current) throw std::runtime_error("the training slice has no regime label; it is shorter than the regime window");
    report.current_regime = *current;

    auto forward = eval::forward_returns(split.train, cfg.horizon);
    std::map<std::string, double> mean_ic;
    for (const auto& a : evaluated.alphas) {
        const auto& e = catalog.entry(a.catalog_index);
        auto ic = agents::daily_ic(restrict_to(a.series, split.train), forward, cfg.ic_method);
        try {
            report.scores.emplace(a.id, agents::score_alpha(a.id, e.category, e.name, ic, report.train_regimes.labels,
                                                            report.current_regime, cfg.min_obs));
            mean_ic[a.id] = agents::mean_defined(ic);
        } catch (const agents::InsufficientObservations& ex) {
            report.skipped.emplace_back(a.id, ex.what());
        }
    }
    if (llm && cfg.selection.llm_blend > 0.0) attach_llm_scores(report, catalog, mean_ic, cfg, *llm);
    return report;
}

ProposalOutcome propose_alphas(const factory::AlphaCatalog& catalog, llm::Provider& provider) {
    llm::PromptContext ctx;
    ctx.task = llm::Task::ProposeAlphas;
    ctx.market_summary = "Catalog version " + std::to_string(catalog.version()) + " holds " +
                         std::to_string(catalog.size()) + " seed alphas in " +
                         std::to_string(catalog.categories().size()) + " categories.";
    auto response = llm::complete(provider, llm::render_prompt(ctx, "propose_alphas"), llm::Task::ProposeAlphas);
    auto review = llm::review_proposals(response.proposals);

    std::vector<factory::CatalogEntry> fresh;
    std::set<std::string> taken;
    for (const auto& e : catalog.entries()) taken.insert(e.id());
    for (auto& e : review.accepted) {
        if (!taken.insert(e.id()).second) {
            review.rejected.emplace_back(llm::Proposal{e.category, e.name, e.expression}, "duplicate name");
            continue;
        }
        fresh.push_back(e);
    }
    review.accepted = fresh;
    if (fresh.empty()) return {catalog, std::move(review)};
    return {catalog.add_entries(std::move(fresh)), std::move(review)};
}

TrainedCombination train_combination(const std::vector<std::string>& ids,
                                     const std::vector<eval::AlphaSeries>& full_series, const data::SplitSlices& split,
                                     const RunConfig& cfg) {
    std::vector<eval::AlphaSeries> train, val;
    for (const auto& s : full_series) {
        train.push_back(restrict_to(s, split.train));
        val.push_back(restrict_to(s, split.validation));
    }
    auto y_train = eval::forward_returns(split.train, cfg.horizon);
    auto y_val = eval::forward_returns(split.validation, cfg.horizon);

    TrainedCombination out{ids, optim::build_dataset(ids, train, y_train, val, y_val),
                           optim::TrainResult{optim::MlpModel(static_cast<int>(ids.size()), cfg.hidden, cfg.train.seed),
                                              {}, {}, 0, false},
                           {}};
    out.training = optim::train(out.training.model, out.dataset.data, cfg.train);
    out.weights = optim::extract_weights(out.training.model, out.dataset.data.x_train, ids);
    return out;
}

eval::AlphaSeries combined_alpha(const TrainedCombination& model, const std::vector<eval::AlphaSeries>& series) {
    std::vector<eval::AlphaSeries> scaled;
    for (std::size_t j = 0; j < series.size(); ++j) scaled.push_back(model.dataset.scaler.apply(series[j], j));
    return optim::combine(model.weights.weights, scaled, "combined");
}

namespace {

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        if (!enabled()) return;
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        body(out);
        if (!out) throw std::runtime_error("failed writing " + (dir_ / name).string());
    }

    void manifest(const std::vector<std::string>& stages, const std::string& failure) {
        write("MANIFEST", [&](std::ostream& out) {
            for (const auto& s : stages) out << "stage " << s << " ok\n";
            if (!failure.empty()) out << "failed " << failure << '\n';
        });
    }

private:
    fs::path dir_;
};

std::string stage_list(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
}

}  // namespace

PipelineResult run_pipeline(const data::PanelPtr& panel, const factory::AlphaCatalog& catalog, llm::Provider& provider,
                            const RunConfig& cfg, const fs::path& out_dir) {
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw StageError("config", e.what());
    }
    ArtifactWriter files(out_dir);
    if (files.enabled()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw StageError("setup", "cannot create " + out_dir.string() + ": " + ec.message());
    }

    PipelineResult result;
    std::string stage;
    auto done = [&] { result.completed_stages.push_back(stage); };
    try {
        stage = "split";
        auto split = split_panel(panel, cfg);
        done();

        stage = "propose";
        if (cfg.propose_alphas) {
            auto outcome = propose_alphas(catalog, provider);
            result.catalog = std::move(outcome.catalog);
            result.proposals = std::move(outcome.review);
            files.write("proposals.csv", [&](std::ostream& out) {
                out << "category,name,status,detail\n";
                for (const auto& e : result.proposals->accepted) out << e.category << ',' << e.name << ",accepted,\n";
                for (const auto& [p, why] : result.proposals->rejected) {
                    std::string detail = why;
                    std::replace(detail.begin(), detail.end(), ',', ';');
                    std::replace(detail.begin(), detail.end(), '\n', ' ');
                    out << p.category << ',' << p.name << ",rejected," << detail << '\n';
                }
            });
        } else {
            result.catalog = catalog;
        }
        files.write("catalog.saf", [&](std::ostream& out) { factory::save_catalog(*result.catalog, out); });
        done();

        stage = "evaluate";
        result.evaluation = evaluate_catalog(*result.catalog, panel, cfg.threads);
        if (result.evaluation.alphas.empty()) throw std::runtime_error("no catalog entry could be evaluated on this panel");
        done();

        stage = "score";
        result.scoring = score_alphas(result.evaluation, *result.catalog, panel, split, cfg, &provider);
        files.write("evaluation.csv", [&](std::ostream& out) {
            out << "alpha,status,detail\n";
            std::map<std::string, std::string> why;
            for (const auto& [id, reason] : result.evaluation.skipped) why[id] = "not evaluated: " + reason;
            for (const auto& [id, reason] : result.scoring.skipped) why[id] = "not scored: " + reason;
            for (const auto& e : result.catalog->entries()) {
                auto it = why.find(e.id());
                std::string detail = it == why.end() ? "" : it->second;
                std::replace(detail.begin(), detail.end(), ',', ';');
                std::replace(detail.begin(), detail.end(), '\n', ' ');
                out << e.id() << ',' << (it == why.end() ? "scored" : "skipped") << ',' << detail << '\n';
            }
        });
        if (result.scoring.scores.empty()) throw std::runtime_error("no alpha could be scored on the training slice");
        done();

        stage = "select";
        result.selection = agents::select_alphas(*result.catalog, result.scoring.scores, cfg.selection);
        files.write("scores.csv", [&](std::ostream& out) { agents::write_scores_csv(result.selection, out); });
        if (result.selection.status == agents::SelectionStatus::NothingPassed) {
            throw std::runtime_error("nothing passed: no final score exceeds the threshold " +
                                     csv::format_double(cfg.selection.threshold));
        }
        done();

        stage = "train";
        std::vector<std::string> ids;
        std::vector<eval::AlphaSeries> full;
        for (const auto& s : result.selection.selected) {
            ids.push_back(s.id);
            auto it = std::find_if(result.evaluation.alphas.begin(), result.evaluation.alphas.end(),
                                   [&](const EvaluatedAlpha& a) { return a.id == s.id; });
            full.push_back(it->series);
        }
        result.combination = train_combination(ids, full, split, cfg);
        files.write("model.txt", [&](std::ostream& out) { optim::save_model(result.combination->training.model, out); });
        files.write("weights.csv",
                    [&](std::ostream& out) { optim::write_weights_csv(result.combination->weights, out); });
        files.write("loss_curve.csv", [&](std::ostream& out) {
            const auto& tr = result.combination->training;
            out << "epoch,train_mse,val_mse\n";
            for (std::size_t e = 0; e < tr.train_mse.size(); ++e) {
                out << e + 1 << ',' << csv::format_double(tr.train_mse[e]) << ','
                    << csv::format_double(e < tr.val_mse.size() ? tr.val_mse[e] : kMissing) << '\n';
            }
        });
        done();

        stage = "combine";
        result.combined_test = restrict_to(combined_alpha(*result.combination, full), split.test);
        done();

        stage = "backtest";
        result.backtest = backtest::run_backtest(result.combined_test, split.test, cfg.backtest);
        auto test_ic = agents::daily_ic(result.combined_test, eval::forward_returns(split.test, cfg.horizon),
                                        cfg.ic_method);
        result.backtest.metrics.mean_ic = agents::mean_defined(test_ic);
        files.write("trades.csv", [&](std::ostream& out) { backtest::write_trades_csv(result.backtest, out); });
        done();

        stage = "report";
        files.write("report.csv", [&](std::ostream& out) { backtest::write_report_csv(result.backtest, out); });
        files.write("plot.csv", [&](std::ostream& out) { backtest::write_plot_csv(result.backtest, out); });
        files.write("metrics.csv", [&](std::ostream& out) {
            backtest::write_metrics_csv(
                {{"strategy", result.backtest.metrics}, {"benchmark", result.backtest.benchmark_metrics}}, out);
        });
        done();
        files.manifest(result.completed_stages, "");
    } catch (const std::exception& e) {
        try {
            files.manifest(result.completed_stages, stage + ": " + e.what());
        } catch (const std::exception&) {
        }
        throw StageError(stage, std::string(e.what()) +
                                    (result.completed_stages.empty() ? "" : " (completed: " +
                                                                                stage_list(result.completed_stages) + ")"));
    }
    return result;
}

}  // namespace alphaforge::pipeline
