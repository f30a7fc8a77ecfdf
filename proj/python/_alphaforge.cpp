#include "alphaforge/agents/ic.h"
#include "alphaforge/backtest/backtest.h"
#include "alphaforge/backtest/metrics.h"
#include "alphaforge/data/panel_io.h"
#include "alphaforge/data/synth.h"
#include "alphaforge/dsl/analysis.h"
#include "alphaforge/dsl/parser.h"
#include "alphaforge/eval/evaluator.h"
#include "alphaforge/factory/catalog.h"
#include "alphaforge/llm/provider.h"
#include "alphaforge/pipeline/pipeline.h"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace alphaforge;

namespace {

struct Panel {
    data::PanelPtr ptr;
};

py::array_t<double> to_array(const eval::AlphaSeries& s) {
    py::array_t<double> out({s.n_tickers(), s.n_dates()});
    std::copy(s.values().begin(), s.values().end(), out.mutable_data());
    return out;
}

std::vector<std::string> date_strings(std::span<const Date> dates) {
    std::vector<std::string> out;
    out.reserve(dates.size());
    for (const auto& d : dates) out.push_back(d.to_string());
    return out;
}

eval::AlphaSeries from_array(const Panel& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != p.ptr->n_tickers() ||
        static_cast<std::size_t>(a.shape(1)) != p.ptr->n_dates()) {
        throw std::invalid_argument("alpha array must have shape (n_tickers, n_dates)");
    }
    std::vector<double> v(a.data(), a.data() + a.size());
    return {p.ptr->tickers(), p.ptr->dates(), std::move(v), "python"};
}

py::dict metrics_dict(const backtest::MetricBlock& m) {
    py::dict d;
    d["cumulative_return"] = m.cumulative_return;
    d["annual_return"] = m.annual_return;
    d["volatility"] = m.volatility;
    d["sharpe"] = m.sharpe_defined ? py::cast(m.sharpe) : py::none();
    d["annualized_sharpe"] = m.sharpe_defined ? py::cast(m.annualized_sharpe) : py::none();
    d["sortino"] = m.sortino_defined ? py::cast(m.sortino) : py::none();
    d["calmar"] = m.calmar_defined ? py::cast(m.calmar) : py::none();
    d["max_drawdown"] = m.max_drawdown;
    d["mean_ic"] = m.mean_ic;
    return d;
}

py::dict entry_dict(const factory::CatalogEntry& e) {
    py::dict d;
    d["id"] = e.id();
    d["category"] = e.category;
    d["name"] = e.name;
    d["expression"] = e.expression;
    d["provenance"] = std::string(factory::to_string(e.provenance));
    return d;
}

Panel synth(const std::string& preset, std::uint64_t seed) {
    data::SynthConfig cfg;
    if (preset == "planted") {
        cfg = data::planted_panel_config(seed);
    } else if (preset == "regime-flip") {
        cfg = data::regime_flip_panel_config(seed);
    } else if (preset == "random") {
        cfg.seed = seed;
    } else {
        throw std::invalid_argument("unknown preset '" + preset + "'");
    }
    return {data::synthesize_panel(cfg)};
}

factory::AlphaCatalog with_extra(factory::AlphaCatalog catalog, const std::vector<std::tuple<std::string, std::string, std::string>>& extra) {
    if (extra.empty()) return catalog;
    std::vector<factory::CatalogEntry> rows;
    for (const auto& [category, name, expression] : extra) {
        rows.push_back({category, name, expression, factory::Provenance::User, 0});
    }
    return catalog.add_entries(rows);
}

}  // namespace

PYBIND11_MODULE(_alphaforge, m) {
    m.doc() = "Formulaic alpha parsing, evaluation, scoring and backtesting";

    py::register_exception<dsl::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<eval::EvalError>(m, "EvalError", PyExc_RuntimeError);
    py::register_exception<factory::CatalogError>(m, "CatalogError", PyExc_ValueError);
    py::register_exception<backtest::BacktestError>(m, "BacktestError", PyExc_ValueError);
    py::register_exception<pipeline::StageError>(m, "StageError", PyExc_RuntimeError);

    m.def("normalize", [](const std::string& text) { return dsl::print(dsl::parse(text)); }, py::arg("expression"),
          "Parse an expression and print it back in canonical form.");
    m.def(
        "analyze",
        [](const std::string& text) {
            auto meta = dsl::analyze(dsl::parse(text));
            py::dict d;
            d["required_fields"] = std::vector<std::string>(meta.required_fields.begin(), meta.required_fields.end());
            d["max_lookback"] = meta.max_lookback;
            d["kind"] = std::string(dsl::to_string(meta.kind));
            return d;
        },
        py::arg("expression"));

    py::class_<Panel>(m, "Panel")
        .def_static("load", [](const std::filesystem::path& p) { return Panel{data::load_panel(p).panel}; }, py::arg("path"))
        .def_static("synthetic", &synth, py::arg("preset") = "planted", py::arg("seed") = 7)
        .def("save", [](const Panel& p, const std::filesystem::path& path) { data::write_panel(*p.ptr, path); })
        .def_property_readonly("tickers", [](const Panel& p) { return p.ptr->tickers(); })
        .def_property_readonly("dates", [](const Panel& p) { return date_strings(p.ptr->dates()); })
        .def_property_readonly("fields", [](const Panel& p) { return p.ptr->field_names(); })
        .def_property_readonly("shape", [](const Panel& p) { return py::make_tuple(p.ptr->n_tickers(), p.ptr->n_dates()); })
        .def("field", [](const Panel& p, const std::string& name) {
            if (!p.ptr->has_field(name)) throw py::key_error(name);
            py::array_t<double> out({p.ptr->n_tickers(), p.ptr->n_dates()});
            auto* dst = out.mutable_data();
            for (std::size_t i = 0; i < p.ptr->n_tickers(); ++i) {
                auto s = p.ptr->series(name, i);
                dst = std::copy(s.begin(), s.end(), dst);
            }
            return out;
        });

    m.def(
        "evaluate",
        [](const std::string& text, const Panel& p) {
            return to_array(eval::evaluate(dsl::parse(text), data::PanelSlice::whole(p.ptr)));
        },
        py::arg("expression"), py::arg("panel"), "Alpha values as an (n_tickers, n_dates) array; NaN is missing.");
    m.def(
        "forward_returns",
        [](const Panel& p, int horizon) { return to_array(eval::forward_returns(data::PanelSlice::whole(p.ptr), horizon)); },
        py::arg("panel"), py::arg("horizon") = 1);

    m.def(
        "information_coefficient",
        [](const std::vector<double>& predicted, const std::vector<double>& realized, const std::string& method) {
            auto mth = agents::parse_ic_method(method);
            if (!mth) throw std::invalid_argument("ic method must be pearson or rank");
            if (predicted.size() != realized.size()) throw std::invalid_argument("inputs differ in length");
            auto ic = agents::information_coefficient(predicted, realized, *mth);
            return ic ? py::cast(*ic) : py::none();
        },
        py::arg("predicted"), py::arg("realized"), py::arg("method") = "pearson");

    m.def(
        "builtin_catalog",
        [] {
            auto catalog = factory::builtin_catalog();
            py::list out;
            for (const auto& e : catalog.entries()) out.append(entry_dict(e));
            return out;
        },
        "Seed catalog rows as dicts.");
    m.def(
        "load_catalog",
        [](const std::filesystem::path& path) {
            auto catalog = factory::load_catalog(path);
            py::list out;
            for (const auto& e : catalog.entries()) out.append(entry_dict(e));
            return out;
        },
        py::arg("path"));

    m.def("max_drawdown", [](const std::vector<double>& nw) { return backtest::max_drawdown(nw); }, py::arg("net_worth"));
    m.def(
        "compute_metrics",
        [](const std::vector<double>& nw, double rf) { return metrics_dict(backtest::compute_metrics(nw, {rf, 252})); },
        py::arg("net_worth"), py::arg("risk_free_rate") = 0.0);
    m.def(
        "backtest",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& alpha, const Panel& p, std::size_t k,
           std::size_t n, double cost_bps) {
            auto r = backtest::run_backtest(from_array(p, alpha), data::PanelSlice::whole(p.ptr), {k, n, cost_bps, {}});
            py::dict d;
            d["net_worth"] = r.net_worth();
            d["benchmark"] = r.benchmark();
            d["trades"] = r.trades.size();
            d["metrics"] = metrics_dict(r.metrics);
            return d;
        },
        py::arg("alpha"), py::arg("panel"), py::arg("k") = 13, py::arg("n") = 5, py::arg("cost_bps") = 0.0);

    m.def(
        "run_pipeline",
        [](const Panel& p, const std::filesystem::path& out_dir,
           const std::vector<std::tuple<std::string, std::string, std::string>>& extra_alphas, double threshold,
           std::uint64_t provider_seed, unsigned threads) {
            pipeline::RunConfig cfg;
            cfg.selection.threshold = threshold;
            cfg.threads = threads;
            auto catalog = with_extra(factory::builtin_catalog(), extra_alphas);
            llm::StubProvider stub(provider_seed);
            pipeline::PipelineResult r;
            {
                py::gil_scoped_release release;
                r = pipeline::run_pipeline(p.ptr, catalog, stub, cfg, out_dir);
            }
            py::dict d;
            std::vector<std::string> selected;
            for (const auto& s : r.selection.selected) selected.push_back(s.id);
            d["selected"] = selected;
            py::dict weights;
            for (std::size_t j = 0; j < r.combination->weights.ids.size(); ++j) {
                weights[py::str(r.combination->weights.ids[j])] = r.combination->weights.weights[j];
            }
            d["weights"] = weights;
            d["metrics"] = metrics_dict(r.backtest.metrics);
            d["benchmark_metrics"] = metrics_dict(r.backtest.benchmark_metrics);
            d["stages"] = r.completed_stages;
            return d;
        },
        py::arg("panel"), py::arg("out_dir") = std::filesystem::path{},
        py::arg("extra_alphas") = std::vector<std::tuple<std::string, std::string, std::string>>{},
        py::arg("threshold") = 0.25, py::arg("provider_seed") = 1, py::arg("threads") = 0,
        "Run the full pipeline with the offline stub provider; extra_alphas are (category, name, expression).");
}
