#include "alphaforge/eval/evaluator.h"

#include "alphaforge/common/missing.h"
#include "alphaforge/dsl/analysis.h"
#include "alphaforge/dsl/parser.h"
#include "alphaforge/dsl/registry.h"
#include "alphaforge/eval/kernels.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace alphaforge::eval {

namespace {

using dsl::BinaryOp;
using dsl::Kernel;

// Ticker-major value matrix for one subtree.
struct Grid {
    std::size_t n_tickers = 0;
    std::size_t n_dates = 0;
    std::vector<double> v;

    Grid(std::size_t nt, std::size_t nd, double fill = kMissing) : n_tickers(nt), n_dates(nd), v(nt * nd, fill) {}

    std::span<double> row(std::size_t i) { return std::span<double>(v).subspan(i * n_dates, n_dates); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(v).subspan(i * n_dates, n_dates);
    }
};

double apply(BinaryOp op, double a, double b) {
    if (is_missing(a) || is_missing(b)) return kMissing;
    switch (op) {
        case BinaryOp::Add: return finite_or_missing(a + b);
        case BinaryOp::Sub: return finite_or_missing(a - b);
        case BinaryOp::Mul: return finite_or_missing(a * b);
        case BinaryOp::Div: return b == 0.0 ? kMissing : finite_or_missing(a / b);
        case BinaryOp::Pow: return finite_or_missing(std::pow(a, b));
        case BinaryOp::Gt: return a > b ? 1.0 : 0.0;
        case BinaryOp::Lt: return a < b ? 1.0 : 0.0;
        case BinaryOp::Ge: return a >= b ? 1.0 : 0.0;
        case BinaryOp::Le: return a <= b ? 1.0 : 0.0;
        case BinaryOp::Eq: return a == b ? 1.0 : 0.0;
    }
    return kMissing;
}

double pointwise(Kernel k, double x) {
    if (is_missing(x)) return kMissing;
    switch (k) {
        case Kernel::Abs: return std::abs(x);
        case Kernel::Sign: return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
        case Kernel::Log: return x > 0 ? finite_or_missing(std::log(x)) : kMissing;
        case Kernel::Sqrt: return x >= 0 ? std::sqrt(x) : kMissing;
        default: return kMissing;
    }
}

class Interpreter {
public:
    explicit Interpreter(const data::PanelSlice& slice) : slice_(slice) {}

    Grid eval(const dsl::Node& node) {
        return std::visit([this](const auto& n) { return this->on(n); }, node.variant());
    }

private:
    std::size_t nt() const { return slice_.n_tickers(); }
    std::size_t nd() const { return slice_.n_dates(); }

    Grid field(std::string_view name) {
        if (!slice_.has_field(name)) throw EvalError("panel has no field '" + std::string(name) + "'");
        Grid g(nt(), nd());
        for (std::size_t i = 0; i < nt(); ++i) {
            auto s = slice_.series(name, i);
            std::copy(s.begin(), s.end(), g.row(i).begin());
        }
        return g;
    }

    Grid on(const dsl::Literal& l) { return Grid(nt(), nd(), l.value); }
    Grid on(const dsl::FieldRef& f) { return field(f.name); }

    Grid on(const dsl::Negate& n) {
        Grid g = eval(*n.operand);
        for (double& x : g.v) x = -x;
        return g;
    }

    Grid on(const dsl::Binary& b) {
        Grid l = eval(*b.lhs);
        Grid r = eval(*b.rhs);
        for (std::size_t k = 0; k < l.v.size(); ++k) l.v[k] = apply(b.op, l.v[k], r.v[k]);
        return l;
    }

    Grid on(const dsl::Conditional& c) {
        Grid cond = eval(*c.cond);
        Grid a = eval(*c.then_branch);
        Grid b = eval(*c.else_branch);
        for (std::size_t k = 0; k < cond.v.size(); ++k) {
            double x = cond.v[k];
            cond.v[k] = is_missing(x) ? kMissing : (x != 0.0 ? a.v[k] : b.v[k]);
        }
        return cond;
    }

    Grid on(const dsl::Call& c) {
        const dsl::FunctionSpec* spec = dsl::find_function(c.function);
        if (!spec) throw EvalError("unknown function '" + c.function + "'");
        int window = 0;
        for (std::size_t i = 0; i < spec->args.size() && i < c.args.size(); ++i) {
            if (spec->args[i] == dsl::ArgKind::Window) window = static_cast<int>(c.args[i]->as<dsl::Literal>()->value);
        }

        if (spec->kernel == Kernel::Rsi) {
            Grid close = field(data::kClose);
            Grid out(nt(), nd());
            for (std::size_t i = 0; i < nt(); ++i) kernels::rsi(close.row(i), window, out.row(i));
            return out;
        }
        if (spec->kernel == Kernel::Atr) {
            Grid high = field(data::kHigh), low = field(data::kLow), close = field(data::kClose);
            Grid out(nt(), nd());
            for (std::size_t i = 0; i < nt(); ++i) kernels::atr(high.row(i), low.row(i), close.row(i), window, out.row(i));
            return out;
        }

        Grid x = eval(*c.args.front());
        Grid out(nt(), nd());
        switch (spec->cls) {
            case dsl::FunctionClass::Pointwise:
                for (std::size_t k = 0; k < x.v.size(); ++k) out.v[k] = pointwise(spec->kernel, x.v[k]);
                break;
            case dsl::FunctionClass::TimeSeries:
                for (std::size_t i = 0; i < nt(); ++i) series_kernel(spec->kernel, x.row(i), window, out.row(i));
                break;
            case dsl::FunctionClass::CrossSection: {
                std::vector<double> col(nt()), res(nt());
                for (std::size_t d = 0; d < nd(); ++d) {
                    for (std::size_t i = 0; i < nt(); ++i) col[i] = x.v[i * nd() + d];
                    if (spec->kernel == Kernel::CsRank) {
                        kernels::cs_rank(col, res);
                    } else {
                        kernels::cs_zscore(col, res);
                    }
                    for (std::size_t i = 0; i < nt(); ++i) out.v[i * nd() + d] = res[i];
                }
                break;
            }
        }
        return out;
    }

    static void series_kernel(Kernel k, std::span<const double> x, int n, std::span<double> out) {
        switch (k) {
            case Kernel::Delay: kernels::delay(x, n, out); return;
            case Kernel::Sma: kernels::rolling_mean(x, n, out); return;
            case Kernel::Ema: kernels::ema(x, n, out); return;
            case Kernel::Std: kernels::rolling_std(x, n, out); return;
            case Kernel::Var: kernels::rolling_var(x, n, out); return;
            case Kernel::Sum: kernels::rolling_sum(x, n, out); return;
            case Kernel::Min: kernels::rolling_min(x, n, out); return;
            case Kernel::Max: kernels::rolling_max(x, n, out); return;
            case Kernel::MeanDev: kernels::rolling_mean_dev(x, n, out); return;
            default: throw EvalError("kernel is not a time-series function");
        }
    }

    const data::PanelSlice& slice_;
};

}  // namespace

AlphaSeries evaluate(const dsl::AlphaExpr& expr, const data::PanelSlice& slice, std::string source) {
    dsl::ExprMeta meta;
    try {
        dsl::validate(expr);
        meta = dsl::analyze(expr);
    } catch (const dsl::InvalidExpression& e) {
        throw EvalError(e.what());
    }
    for (const auto& f : meta.required_fields) {
        if (!slice.has_field(f)) throw EvalError("panel has no field '" + f + "'");
    }
    if (slice.n_dates() <= static_cast<std::size_t>(meta.max_lookback)) {
        throw EvalError("lookback of " + std::to_string(meta.max_lookback) + " days does not fit a slice of " +
                        std::to_string(slice.n_dates()) + " dates");
    }
    Grid g = Interpreter(slice).eval(expr.root());
    const auto warm = static_cast<std::size_t>(meta.max_lookback);
    for (std::size_t i = 0; i < g.n_tickers; ++i) {
        auto r = g.row(i);
        std::fill(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(warm), kMissing);
    }
    if (source.empty()) source = dsl::print(expr);
    auto dates = slice.dates();
    return AlphaSeries(slice.ticker_names(), std::vector<Date>(dates.begin(), dates.end()), std::move(g.v),
                       std::move(source), meta.max_lookback);
}

std::vector<BatchItem> evaluate_batch(const std::vector<dsl::AlphaExpr>& exprs, const data::PanelSlice& slice,
                                      unsigned threads) {
    std::vector<BatchItem> out(exprs.size());
    auto run_one = [&](std::size_t k) {
        try {
            out[k].series = evaluate(exprs[k], slice);
        } catch (const std::exception& e) {
            out[k].error = e.what();
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(exprs.size(), 1)));
    if (threads <= 1) {
        for (std::size_t k = 0; k < exprs.size(); ++k) run_one(k);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < exprs.size(); k = next++) run_one(k);
            });
        }
    }
    return out;
}

AlphaSeries forward_returns(const data::PanelSlice& slice, int horizon) {
    if (horizon < 1) throw EvalError("horizon must be at least 1");
    if (static_cast<std::size_t>(horizon) >= slice.n_dates()) {
        throw EvalError("horizon " + std::to_string(horizon) + " is not shorter than the slice");
    }
    if (!slice.has_field(data::kClose)) throw EvalError("panel has no field 'CLOSE'");
    const std::size_t nd = slice.n_dates();
    const auto h = static_cast<std::size_t>(horizon);
    std::vector<double> values(slice.n_tickers() * nd, kMissing);
    for (std::size_t i = 0; i < slice.n_tickers(); ++i) {
        auto c = slice.series(data::kClose, i);
        for (std::size_t t = 0; t + h < nd; ++t) {
            double a = c[t], b = c[t + h];
            values[i * nd + t] = (is_missing(a) || is_missing(b) || a == 0.0) ? kMissing : finite_or_missing(b / a - 1.0);
        }
    }
    auto dates = slice.dates();
    return AlphaSeries(slice.ticker_names(), std::vector<Date>(dates.begin(), dates.end()), std::move(values),
                       "forward_return_" + std::to_string(horizon), 0);
}

}  // namespace alphaforge::eval
