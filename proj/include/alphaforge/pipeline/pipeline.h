#pragma once

#include "alphaforge/agents/ic.h"
#include "alphaforge/agents/scoring.h"
#include "alphaforge/agents/selection.h"
#include "alphaforge/backtest/backtest.h"
#include "alphaforge/data/panel.h"
#include "alphaforge/eval/alpha_series.h"
#include "alphaforge/factory/catalog.h"
#include "alphaforge/llm/provider.h"
#include "alphaforge/optim/mlp.h"
#include "alphaforge/optim/weights.h"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alphaforge::pipeline {

struct RunConfig {
    /// Split boundaries; when unset the dates are cut by the fractions below.
    std::optional<Date> validation_start;
    std::optional<Date> test_start;
    double train_fraction = 0.6;
    double validation_fraction = 0.2;

    int horizon = 1;
    agents::IcMethod ic_method = agents::IcMethod::Pearson;
    data::RegimeParams regime;
    std::size_t min_obs = 20;
    agents::SelectionConfig selection;
    optim::TrainConfig train;
    int hidden = 10;
    backtest::BacktestConfig backtest;

    /// Ask the provider for new seed alphas before evaluation.
    bool propose_alphas = true;
    unsigned max_in_flight = 4;
    unsigned threads = 0;

    /// Throws std::invalid_argument when any part is inconsistent.
    void validate() const;
};

/// Failure inside a named stage.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

data::SplitSlices split_panel(const data::PanelPtr& panel, const RunConfig& cfg);

struct EvaluatedAlpha {
    std::size_t catalog_index = 0;
    std::string id;
    eval::AlphaSeries series;  // over the whole panel
};

struct EvaluationReport {
    std::vector<EvaluatedAlpha> alphas;
    std::vector<std::pair<std::string, std::string>> skipped;  // id, reason
};

/// Evaluates every catalog entry over the whole panel; entries that fail are skipped.
EvaluationReport evaluate_catalog(const factory::AlphaCatalog& catalog, const data::PanelPtr& panel,
                                  unsigned threads = 0);

struct ScoringReport {
    std::map<std::string, agents::AgentScore> scores;
    std::vector<std::pair<std::string, std::string>> skipped;
    agents::MarketRegimeSeries train_regimes;
    agents::Regime current_regime = agents::Regime::Sideways;
};

/// Regime labels for every panel date from the causal equal-weight index.
agents::MarketRegimeSeries panel_regimes(const data::PanelPtr& panel, const data::RegimeParams& params);

/// Scores each evaluated alpha on the training slice. When `llm` is given and
/// llm_blend > 0 the provider's confidence/risk triples are attached.
ScoringReport score_alphas(const EvaluationReport& evaluated, const factory::AlphaCatalog& catalog,
                           const data::PanelPtr& panel, const data::SplitSlices& split, const RunConfig& cfg,
                           llm::Provider* llm = nullptr);

struct ProposalOutcome {
    factory::AlphaCatalog catalog;
    llm::ProposalReview review;
};

/// Asks the provider for new alphas and merges the valid ones into a new catalog version.
ProposalOutcome propose_alphas(const factory::AlphaCatalog& catalog, llm::Provider& provider);

struct TrainedCombination {
    std::vector<std::string> ids;
    optim::AlphaDataset dataset;
    optim::TrainResult training;
    optim::CombinedAlphaWeights weights;
};

/// Builds the dataset from the selected alphas, trains the MLP and linearizes it.
TrainedCombination train_combination(const std::vector<std::string>& ids,
                                     const std::vector<eval::AlphaSeries>& full_series, const data::SplitSlices& split,
                                     const RunConfig& cfg);

/// Standardizes each series with the training statistics and combines them.
eval::AlphaSeries combined_alpha(const TrainedCombination& model, const std::vector<eval::AlphaSeries>& series);

/// Restricts a whole-panel series to a slice's dates.
eval::AlphaSeries restrict_to(const eval::AlphaSeries& full, const data::PanelSlice& slice);

/// Stage outputs; a field is filled once its stage has completed.
struct PipelineResult {
    std::optional<factory::AlphaCatalog> catalog;
    std::optional<llm::ProposalReview> proposals;
    EvaluationReport evaluation;
    ScoringReport scoring;
    agents::SelectionResult selection;
    std::optional<TrainedCombination> combination;
    eval::AlphaSeries combined_test;
    backtest::BacktestResult backtest;
    std::vector<std::string> completed_stages;
};

/// Runs propose -> evaluate -> score -> select -> train -> combine -> backtest.
/// With a non-empty `out_dir` every artifact is written there and a MANIFEST lists
/// the completed stages, also when a later stage fails. Throws StageError.
PipelineResult run_pipeline(const data::PanelPtr& panel, const factory::AlphaCatalog& catalog, llm::Provider& provider,
                            const RunConfig& cfg, const std::filesystem::path& out_dir = {});

}  // namespace alphaforge::pipeline
