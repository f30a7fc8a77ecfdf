// alphaforge command line: the full pipeline plus one entry point per stage.

#include "alphaforge/agents/selection.h"
#include "alphaforge/backtest/backtest.h"
#include "alphaforge/common/csv.h"
#include "alphaforge/data/panel_io.h"
#include "alphaforge/data/synth.h"
#include "alphaforge/dsl/parser.h"
#include "alphaforge/eval/evaluator.h"
#include "alphaforge/factory/catalog.h"
#include "alphaforge/llm/http_provider.h"
#include "alphaforge/llm/provider.h"
#include "alphaforge/pipeline/pipeline.h"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace alphaforge;

namespace {

constexpr int kSuccess = 0;
constexpr int kStageFailure = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CommandError : public std::runtime_error {
public:
    CommandError(const std::string& stage, const std::string& what) : std::runtime_error(stage + ": " + what) {}
};

struct Settings {
    std::string panel;
    std::string catalog;
    std::string out;
    std::string provider = "stub";
    std::uint64_t provider_seed = 1;
    llm::HttpConfig http;
    std::vector<std::string> added_alphas;  // "Category|Name|expression"
    pipeline::RunConfig run;
};

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    auto t = csv::trim(text);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || p != t.data() + t.size()) {
        throw UsageError(key + ": '" + std::string(t) + "' is not a valid number");
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    auto t = csv::trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw UsageError(key + ": '" + std::string(t) + "' is not a boolean");
}

using Setter = std::function<void(Settings&, const std::string& key, const std::string& value)>;

template <class T>
Setter number(T Settings::*member) {
    return [member](Settings& s, const std::string& k, const std::string& v) { s.*member = parse_number<T>(k, v); };
}

template <class T, class F>
Setter number_at(F pick) {
    return [pick](Settings& s, const std::string& k, const std::string& v) { pick(s) = parse_number<T>(k, v); };
}

Setter text(std::string Settings::*member) {
    return [member](Settings& s, const std::string&, const std::string& v) { s.*member = std::string(csv::trim(v)); };
}

const std::map<std::string, Setter>& setting_table() {
    static const std::map<std::string, Setter> table = {
        {"paths.panel", text(&Settings::panel)},
        {"paths.catalog", text(&Settings::catalog)},
        {"paths.out", text(&Settings::out)},

        {"split.validation_start",
         [](Settings& s, const std::string& k, const std::string& v) {
             try {
                 s.run.validation_start = Date::parse(csv::trim(v));
             } catch (const std::exception& e) {
                 throw UsageError(k + ": " + e.what());
             }
         }},
        {"split.test_start",
         [](Settings& s, const std::string& k, const std::string& v) {
             try {
                 s.run.test_start = Date::parse(csv::trim(v));
             } catch (const std::exception& e) {
                 throw UsageError(k + ": " + e.what());
             }
         }},
        {"split.train_fraction", number_at<double>([](Settings& s) -> double& { return s.run.train_fraction; })},
        {"split.validation_fraction",
         number_at<double>([](Settings& s) -> double& { return s.run.validation_fraction; })},

        {"scoring.horizon", number_at<int>([](Settings& s) -> int& { return s.run.horizon; })},
        {"scoring.ic_method",
         [](Settings& s, const std::string& k, const std::string& v) {
             auto m = agents::parse_ic_method(csv::trim(v));
             if (!m) throw UsageError(k + ": expected pearson or rank, got '" + v + "'");
             s.run.ic_method = *m;
         }},
        {"scoring.regime_window", number_at<int>([](Settings& s) -> int& { return s.run.regime.window; })},
        {"scoring.regime_tau", number_at<double>([](Settings& s) -> double& { return s.run.regime.tau; })},
        {"scoring.min_obs", number_at<std::size_t>([](Settings& s) -> std::size_t& { return s.run.min_obs; })},

        {"selection.w_c", number_at<double>([](Settings& s) -> double& { return s.run.selection.w_c; })},
        {"selection.w_r", number_at<double>([](Settings& s) -> double& { return s.run.selection.w_r; })},
        {"selection.threshold", number_at<double>([](Settings& s) -> double& { return s.run.selection.threshold; })},
        {"selection.shortlist",
         number_at<std::size_t>([](Settings& s) -> std::size_t& { return s.run.selection.per_category_shortlist; })},
        {"selection.llm_blend", number_at<double>([](Settings& s) -> double& { return s.run.selection.llm_blend; })},

        {"train.learning_rate", number_at<double>([](Settings& s) -> double& { return s.run.train.learning_rate; })},
        {"train.batch_size", number_at<std::size_t>([](Settings& s) -> std::size_t& { return s.run.train.batch_size; })},
        {"train.l2", number_at<double>([](Settings& s) -> double& { return s.run.train.l2_lambda; })},
        {"train.max_epochs", number_at<int>([](Settings& s) -> int& { return s.run.train.max_epochs; })},
        {"train.patience", number_at<int>([](Settings& s) -> int& { return s.run.train.patience; })},
        {"train.seed", number_at<std::uint64_t>([](Settings& s) -> std::uint64_t& { return s.run.train.seed; })},
        {"train.hidden", number_at<int>([](Settings& s) -> int& { return s.run.hidden; })},

        {"backtest.k", number_at<std::size_t>([](Settings& s) -> std::size_t& { return s.run.backtest.k; })},
        {"backtest.n", number_at<std::size_t>([](Settings& s) -> std::size_t& { return s.run.backtest.n; })},
        {"backtest.cost_bps", number_at<double>([](Settings& s) -> double& { return s.run.backtest.cost_bps; })},
        {"backtest.risk_free_rate",
         number_at<double>([](Settings& s) -> double& { return s.run.backtest.metrics.risk_free_rate; })},

        {"provider.kind",
         [](Settings& s, const std::string& k, const std::string& v) {
             auto t = std::string(csv::trim(v));
             if (t != "stub" && t != "http") throw UsageError(k + ": expected stub or http, got '" + t + "'");
             s.provider = t;
         }},
        {"provider.seed", number(&Settings::provider_seed)},
        {"provider.endpoint",
         [](Settings& s, const std::string&, const std::string& v) { s.http.endpoint = csv::trim(v); }},
        {"provider.model", [](Settings& s, const std::string&, const std::string& v) { s.http.model = csv::trim(v); }},
        {"provider.max_retries", number_at<int>([](Settings& s) -> int& { return s.http.max_retries; })},
        {"provider.propose",
         [](Settings& s, const std::string& k, const std::string& v) { s.run.propose_alphas = parse_bool(k, v); }},
        {"provider.max_in_flight", number_at<unsigned>([](Settings& s) -> unsigned& { return s.run.max_in_flight; })},

        {"run.threads", number_at<unsigned>([](Settings& s) -> unsigned& { return s.run.threads; })},
    };
    return table;
}

void apply_setting(Settings& s, const std::string& key, const std::string& value) {
    auto it = setting_table().find(key);
    if (it == setting_table().end()) throw UsageError("unknown setting '" + key + "'");
    it->second(s, key, value);
}

/// Options shared by every command that builds a RunConfig.
struct RunOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::vector<std::string> added;
    std::map<std::string, std::optional<std::string>> flags;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "INI file with [section] key = value settings");
        cmd->add_option("--set", overrides, "Override one setting, e.g. --set selection.threshold=0.2");
        cmd->add_option("--add-alpha", added, "Extra catalog row 'Category|Name|expression'");
        static const std::vector<std::pair<std::string, std::string>> shortcuts = {
            {"--panel", "paths.panel"},         {"--catalog", "paths.catalog"},
            {"--out", "paths.out"},             {"--threads", "run.threads"},
            {"--horizon", "scoring.horizon"},   {"--ic-method", "scoring.ic_method"},
            {"--threshold", "selection.threshold"}, {"--k", "backtest.k"},
            {"--n", "backtest.n"},              {"--cost-bps", "backtest.cost_bps"},
            {"--provider", "provider.kind"},    {"--seed", "provider.seed"},
        };
        for (const auto& [flag, key] : shortcuts) {
            auto& slot = flags[key];
            cmd->add_option(flag, slot, "Same as --set " + key + "=VALUE");
        }
    }

    Settings resolve() const {
        Settings s;
        if (!config.empty()) {
            if (!fs::exists(config)) throw UsageError("config file not found: " + config);
            std::vector<CLI::ConfigItem> items;
            try {
                items = CLI::ConfigINI().from_file(config);
            } catch (const std::exception& e) {
                throw UsageError("cannot read config " + config + ": " + e.what());
            }
            for (const auto& item : items) {
                if (item.name == "++" || item.name == "--") continue;
                std::string key;
                for (const auto& p : item.parents) key += p + ".";
                key += item.name;
                std::string value;
                for (const auto& in : item.inputs) value += (value.empty() ? "" : ",") + in;
                apply_setting(s, key, value);
            }
        }
        for (const auto& o : overrides) {
            auto eq = o.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
            apply_setting(s, o.substr(0, eq), o.substr(eq + 1));
        }
        for (const auto& [key, value] : flags) {
            if (value) apply_setting(s, key, *value);
        }
        s.added_alphas.insert(s.added_alphas.end(), added.begin(), added.end());
        try {
            s.run.validate();
        } catch (const std::exception& e) {
            throw UsageError(std::string("invalid configuration: ") + e.what());
        }
        return s;
    }
};

data::PanelPtr load_panel_or_fail(const std::string& path) {
    if (path.empty()) throw UsageError("no panel given; pass --panel or set paths.panel");
    if (!fs::exists(path)) throw UsageError("panel file not found: " + path);
    try {
        auto loaded = data::load_panel(path);
        for (const auto& w : loaded.warnings) {
            std::cerr << "warning: " << path << " line " << w.line << ": " << w.ticker << ' ' << w.date.to_string()
                      << ": " << w.message << '\n';
        }
        return loaded.panel;
    } catch (const std::exception& e) {
        throw CommandError("load", e.what());
    }
}

factory::AlphaCatalog load_catalog_or_fail(const Settings& s) {
    factory::AlphaCatalog catalog = factory::builtin_catalog();
    if (!s.catalog.empty()) {
        if (!fs::exists(s.catalog)) throw UsageError("catalog file not found: " + s.catalog);
        try {
            catalog = factory::load_catalog(s.catalog);
        } catch (const std::exception& e) {
            throw CommandError("load", e.what());
        }
    }
    if (s.added_alphas.empty()) return catalog;
    std::vector<factory::CatalogEntry> extra;
    for (const auto& row : s.added_alphas) {
        auto parts = csv::split(row, '|');
        if (parts.size() != 3) throw UsageError("--add-alpha expects 'Category|Name|expression', got '" + row + "'");
        factory::CatalogEntry e;
        auto category = factory::canonical_category(csv::trim(parts[0]));
        if (!category) throw UsageError("--add-alpha: unknown category '" + std::string(csv::trim(parts[0])) + "'");
        e.category = std::string(*category);
        e.name = std::string(csv::trim(parts[1]));
        e.expression = std::string(csv::trim(parts[2]));
        e.provenance = factory::Provenance::User;
        extra.push_back(std::move(e));
    }
    try {
        return catalog.add_entries(std::move(extra));
    } catch (const std::exception& e) {
        throw UsageError(std::string("--add-alpha: ") + e.what());
    }
}

std::unique_ptr<llm::Provider> make_provider(const Settings& s) {
    if (s.provider == "http") {
        if (s.http.endpoint.empty()) throw UsageError("provider.kind = http needs provider.endpoint");
        return std::make_unique<llm::HttpProvider>(s.http);
    }
    return std::make_unique<llm::StubProvider>(s.provider_seed);
}

fs::path output_dir(const std::string& out) {
    if (out.empty()) throw UsageError("no output directory; pass --out or set paths.out");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw UsageError("cannot create output directory " + out + ": " + ec.message());
    return out;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CommandError("report", "cannot write " + path.string());
    body(f);
}

void print_metrics(const backtest::MetricBlock& m, const std::string& label) {
    char sharpe[32] = "undefined";
    if (m.sharpe_defined) std::snprintf(sharpe, sizeof sharpe, "%+.4f", m.annualized_sharpe);
    std::printf("%-10s cumulative %+.4f  annual %+.4f  sharpe(ann) %s  vol(ann) %.4f  maxDD %.4f\n", label.c_str(),
                m.cumulative_return, m.annual_return, sharpe, m.annualized_volatility, m.max_drawdown);
}

// ---- commands ----

int cmd_pipeline(const RunOptions& opts) {
    Settings s = opts.resolve();
    auto panel = load_panel_or_fail(s.panel);
    auto catalog = load_catalog_or_fail(s);
    auto provider = make_provider(s);
    auto out = output_dir(s.out);
    try {
        auto result = pipeline::run_pipeline(panel, catalog, *provider, s.run, out);
        std::printf("selected %zu alpha(s):\n", result.selection.selected.size());
        for (const auto& a : result.selection.selected) {
            std::printf("  %-45s theta %+.4f  rho %.4f  final %.4f\n", a.id.c_str(), a.theta, a.rho, a.final_score);
        }
        print_metrics(result.backtest.metrics, "strategy");
        print_metrics(result.backtest.benchmark_metrics, "benchmark");
        std::printf("artifacts in %s\n", out.string().c_str());
    } catch (const pipeline::StageError& e) {
        throw CommandError("pipeline", e.what());
    }
    return kSuccess;
}

int cmd_eval(const std::string& expression, const RunOptions& opts) {
    Settings s = opts.resolve();
    auto panel = load_panel_or_fail(s.panel);
    eval::AlphaSeries series;
    try {
        series = eval::evaluate(dsl::parse(expression), data::PanelSlice::whole(panel));
    } catch (const std::exception& e) {
        throw CommandError("eval", e.what());
    }
    if (s.out.empty()) {
        eval::write_series_csv(series, std::cout);
    } else {
        eval::write_series_csv(series, output_dir(s.out) / "alpha.csv");
    }
    return kSuccess;
}

int cmd_select(const RunOptions& opts) {
    Settings s = opts.resolve();
    auto panel = load_panel_or_fail(s.panel);
    auto catalog = load_catalog_or_fail(s);
    auto provider = make_provider(s);
    auto out = output_dir(s.out);

    std::string stage = "split";
    try {
        auto split = pipeline::split_panel(panel, s.run);
        stage = "evaluate";
        auto evaluated = pipeline::evaluate_catalog(catalog, panel, s.run.threads);
        stage = "score";
        auto scoring = pipeline::score_alphas(evaluated, catalog, panel, split, s.run, provider.get());
        stage = "select";
        auto selection = agents::select_alphas(catalog, scoring.scores, s.run.selection);
        write_file(out / "scores.csv", [&](std::ostream& f) { agents::write_scores_csv(selection, f); });
        if (selection.status == agents::SelectionStatus::NothingPassed) {
            throw std::runtime_error("nothing passed the threshold " + csv::format_double(s.run.selection.threshold));
        }
        for (const auto& a : selection.selected) std::printf("%s\n", a.id.c_str());
    } catch (const std::exception& e) {
        throw CommandError(stage, e.what());
    }
    return kSuccess;
}

std::vector<std::string> selected_from_scores(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("scores file not found: " + path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    if (csv::trim(line) != "alpha,category,theta,rho,final,selected") {
        throw UsageError(path + ": not a scores file");
    }
    std::vector<std::string> ids;
    while (std::getline(in, line)) {
        auto cols = csv::split(line);
        if (cols.size() == 6 && csv::trim(cols[5]) == "1") ids.emplace_back(cols[0]);
    }
    return ids;
}

int cmd_train(const RunOptions& opts, std::vector<std::string> ids, const std::string& scores) {
    Settings s = opts.resolve();
    if (!scores.empty()) {
        auto more = selected_from_scores(scores);
        ids.insert(ids.end(), more.begin(), more.end());
    }
    if (ids.empty()) throw UsageError("no alphas to train on; pass --alpha ID or --scores FILE");
    auto panel = load_panel_or_fail(s.panel);
    auto catalog = load_catalog_or_fail(s);
    auto out = output_dir(s.out);

    std::string stage = "evaluate";
    try {
        auto split = pipeline::split_panel(panel, s.run);
        std::vector<eval::AlphaSeries> full;
        for (const auto& id : ids) {
            auto i = catalog.find(id);
            if (!i) throw std::runtime_error("alpha '" + id + "' is not in the catalog");
            full.push_back(eval::evaluate(catalog.expr(*i), data::PanelSlice::whole(panel), id));
        }
        stage = "train";
        auto model = pipeline::train_combination(ids, full, split, s.run);
        write_file(out / "model.txt", [&](std::ostream& f) { optim::save_model(model.training.model, f); });
        write_file(out / "weights.csv", [&](std::ostream& f) { optim::write_weights_csv(model.weights, f); });
        stage = "combine";
        auto combined = pipeline::restrict_to(pipeline::combined_alpha(model, full), split.test);
        eval::write_series_csv(combined, out / "combined_alpha.csv");
        for (std::size_t j = 0; j < ids.size(); ++j) {
            std::printf("%-45s %+.6f\n", ids[j].c_str(), model.weights.weights[j]);
        }
    } catch (const std::exception& e) {
        throw CommandError(stage, e.what());
    }
    return kSuccess;
}

/// Slice of the panel covering exactly the series' dates and tickers.
data::PanelSlice slice_for(const data::PanelPtr& panel, const eval::AlphaSeries& series) {
    if (series.n_dates() == 0) throw std::runtime_error("alpha series is empty");
    auto begin = panel->date_index(series.dates().front());
    auto last = panel->date_index(series.dates().back());
    if (!begin || !last || *last + 1 - *begin != series.n_dates()) {
        throw std::runtime_error("alpha dates do not form a contiguous window of the panel");
    }
    std::vector<std::size_t> tickers;
    for (const auto& t : series.tickers()) {
        auto i = panel->ticker_index(t);
        if (!i) throw std::runtime_error("alpha ticker '" + t + "' is not in the panel");
        tickers.push_back(*i);
    }
    return data::PanelSlice(panel, *begin, *last + 1, tickers);
}

int cmd_backtest(const RunOptions& opts, const std::string& alpha_path) {
    Settings s = opts.resolve();
    if (!fs::exists(alpha_path)) throw UsageError("alpha file not found: " + alpha_path);
    auto panel = load_panel_or_fail(s.panel);
    auto out = output_dir(s.out);
    try {
        auto alpha = eval::read_series_csv(alpha_path);
        auto slice = slice_for(panel, alpha);
        auto result = backtest::run_backtest(alpha, slice, s.run.backtest);
        write_file(out / "report.csv", [&](std::ostream& f) { backtest::write_report_csv(result, f); });
        write_file(out / "plot.csv", [&](std::ostream& f) { backtest::write_plot_csv(result, f); });
        write_file(out / "trades.csv", [&](std::ostream& f) { backtest::write_trades_csv(result, f); });
        write_file(out / "metrics.csv", [&](std::ostream& f) {
            backtest::write_metrics_csv({{"strategy", result.metrics}, {"benchmark", result.benchmark_metrics}}, f);
        });
        for (const auto& skip : result.skips) {
            std::cerr << "skip " << skip.date.to_string() << ": " << skip.reason << '\n';
        }
        print_metrics(result.metrics, "strategy");
        print_metrics(result.benchmark_metrics, "benchmark");
    } catch (const std::exception& e) {
        throw CommandError("backtest", e.what());
    }
    return kSuccess;
}

int cmd_catalog(const RunOptions& opts, const std::string& action, const std::string& category) {
    Settings s = opts.resolve();
    factory::AlphaCatalog catalog = load_catalog_or_fail(s);
    if (action == "validate") {
        std::printf("ok: %zu entries in %zu categories (version %d)\n", catalog.size(), catalog.categories().size(),
                    catalog.version());
        for (const auto& c : catalog.categories()) std::printf("  %-16s %zu\n", c.c_str(), catalog.indices_of(c).size());
        return kSuccess;
    }
    if (action == "export") {
        factory::save_catalog(catalog, output_dir(s.out) / "catalog.saf");
        return kSuccess;
    }
    std::vector<factory::CatalogEntry> rows;
    try {
        rows = category.empty() ? catalog.entries() : catalog.filter_by_category(category);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    for (const auto& e : rows) {
        std::printf("%s | %s | %s\n", e.category.c_str(), e.name.c_str(), e.expression.c_str());
    }
    return kSuccess;
}

struct SynthOptions {
    std::string preset = "planted";
    std::uint64_t seed = 7;
    std::optional<std::size_t> tickers;
    std::optional<std::size_t> days;
    std::optional<double> correlation;
    std::string out;
};

int cmd_synth(const SynthOptions& o) {
    data::SynthConfig cfg;
    if (o.preset == "planted") {
        cfg = data::planted_panel_config(o.seed, o.correlation.value_or(0.6));
    } else if (o.preset == "regime-flip") {
        cfg = data::regime_flip_panel_config(o.seed, o.correlation.value_or(0.5));
    } else if (o.preset == "random") {
        cfg.seed = o.seed;
        if (o.correlation) cfg.signals = {{"SIGNAL", *o.correlation, data::SignalRegime::Always}};
    } else {
        throw UsageError("unknown preset '" + o.preset + "'; expected planted, regime-flip or random");
    }
    if (o.tickers) cfg.n_tickers = *o.tickers;
    if (o.days) cfg.n_days = *o.days;
    auto out = output_dir(o.out);
    data::PanelPtr panel;
    try {
        panel = data::synthesize_panel(cfg);
    } catch (const std::exception& e) {
        throw CommandError("synth", e.what());
    }
    data::write_panel(*panel, out / "panel.csv");
    std::printf("%zu tickers x %zu dates -> %s\n", panel->n_tickers(), panel->n_dates(),
                (out / "panel.csv").string().c_str());
    return kSuccess;
}

void copy_to(std::ostream& os, const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    os << in.rdbuf();
}

int cmd_report(const std::string& run_dir, const std::string& out) {
    fs::path dir(run_dir);
    if (!fs::exists(dir / "MANIFEST")) throw UsageError("no MANIFEST in " + run_dir + "; not a pipeline output directory");
    std::ostringstream text;
    text << "== stages\n";
    copy_to(text, dir / "MANIFEST");
    for (const char* name : {"scores.csv", "weights.csv", "metrics.csv"}) {
        if (!fs::exists(dir / name)) continue;
        text << "== " << name << '\n';
        if (std::string(name) == "scores.csv") {
            std::ifstream in(dir / name);
            std::string line;
            std::getline(in, line);
            text << line << '\n';
            while (std::getline(in, line)) {
                if (line.size() > 1 && line.back() == '1') text << line << '\n';
            }
        } else {
            copy_to(text, dir / name);
        }
    }
    std::cout << text.str();
    if (!out.empty()) write_file(output_dir(out) / "summary.txt", [&](std::ostream& f) { f << text.str(); });
    return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alphaforge: formulaic alpha mining, scoring, weighting and backtesting"};
    app.require_subcommand(1);

    RunOptions pipeline_opts, eval_opts, select_opts, train_opts, backtest_opts, catalog_opts;

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run propose, evaluate, score, select, train, backtest, report");
    pipeline_opts.attach(pipeline_cmd);

    std::string expression;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate one expression over a panel");
    eval_cmd->add_option("expression", expression, "Alpha expression")->required();
    eval_opts.attach(eval_cmd);

    auto* select_cmd = app.add_subcommand("select", "Evaluate, score and select catalog alphas");
    select_opts.attach(select_cmd);

    std::vector<std::string> train_ids;
    std::string scores_path;
    auto* train_cmd = app.add_subcommand("train", "Fit the weight model on chosen alphas");
    train_cmd->add_option("--alpha", train_ids, "Catalog id 'Category::Name' (repeatable)");
    train_cmd->add_option("--scores", scores_path, "scores.csv whose selected rows are used");
    train_opts.attach(train_cmd);

    std::string alpha_path;
    auto* backtest_cmd = app.add_subcommand("backtest", "Backtest an alpha series CSV");
    backtest_cmd->add_option("--alpha-file", alpha_path, "CSV date,ticker,value")->required();
    backtest_opts.attach(backtest_cmd);

    std::string catalog_action = "list";
    std::string category;
    auto* catalog_cmd = app.add_subcommand("catalog", "List, validate or export a seed catalog");
    catalog_cmd->add_option("action", catalog_action, "list | validate | export")
        ->check(CLI::IsMember({"list", "validate", "export"}));
    catalog_cmd->add_option("--category", category, "Only list this category");
    catalog_opts.attach(catalog_cmd);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic panel");
    synth_cmd->add_option("--preset", synth.preset, "planted | regime-flip | random");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--tickers", synth.tickers, "Ticker count");
    synth_cmd->add_option("--days", synth.days, "Trading days");
    synth_cmd->add_option("--corr", synth.correlation, "Planted signal correlation");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();

    std::string run_dir, report_out;
    auto* report_cmd = app.add_subcommand("report", "Summarize a pipeline output directory");
    report_cmd->add_option("--run", run_dir, "Pipeline output directory")->required();
    report_cmd->add_option("--out", report_out, "Also write summary.txt here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*pipeline_cmd) return cmd_pipeline(pipeline_opts);
        if (*eval_cmd) return cmd_eval(expression, eval_opts);
        if (*select_cmd) return cmd_select(select_opts);
        if (*train_cmd) return cmd_train(train_opts, train_ids, scores_path);
        if (*backtest_cmd) return cmd_backtest(backtest_opts, alpha_path);
        if (*catalog_cmd) return cmd_catalog(catalog_opts, catalog_action, category);
        if (*synth_cmd) return cmd_synth(synth);
        if (*report_cmd) return cmd_report(run_dir, report_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStageFailure;
    }
    return kUsageError;
}
