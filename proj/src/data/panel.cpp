#include "alphaforge/data/panel.h"

#include "alphaforge/common/missing.h"

#include <algorithm>
#include <array>

namespace alphaforge::data {

namespace {

constexpr std::array<std::string_view, 6> kMarketFields = {kOpen, kHigh, kLow, kClose, kVolume, kVwap};

bool same_value(double a, double b) {
    if (is_missing(a) || is_missing(b)) return is_missing(a) && is_missing(b);
    return a == b;
}

}  // namespace

bool is_market_field(std::string_view field) {
    return std::find(kMarketFields.begin(), kMarketFields.end(), field) != kMarketFields.end();
}

MarketPanel::MarketPanel(std::vector<Date> dates, std::vector<std::string> tickers, FieldMap fields)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), fields_(std::move(fields)) {
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw PanelError("dates must be strictly increasing (at " + dates_[i].to_string() + ")");
        }
    }
    for (std::size_t i = 1; i < tickers_.size(); ++i) {
        if (!(tickers_[i - 1] < tickers_[i])) {
            throw PanelError("tickers must be sorted and unique (at " + tickers_[i] + ")");
        }
    }
    const std::size_t cells = dates_.size() * tickers_.size();
    for (const auto& [name, values] : fields_) {
        if (values.size() != cells) {
            throw PanelError("field " + name + " has " + std::to_string(values.size()) +
                             " values, expected " + std::to_string(cells));
        }
    }

    auto field_ptr = [&](std::string_view f) -> const std::vector<double>* {
        auto it = fields_.find(f);
        return it == fields_.end() ? nullptr : &it->second;
    };
    const auto* open = field_ptr(kOpen);
    const auto* high = field_ptr(kHigh);
    const auto* low = field_ptr(kLow);
    const auto* close = field_ptr(kClose);
    const auto* volume = field_ptr(kVolume);
    for (std::size_t c = 0; c < cells; ++c) {
        double hi = high ? (*high)[c] : kMissing;
        double lo = low ? (*low)[c] : kMissing;
        for (const auto* body : {open, close}) {
            if (!body || is_missing((*body)[c])) continue;
            double v = (*body)[c];
            if ((!is_missing(lo) && lo > v) || (!is_missing(hi) && hi < v)) {
                throw PanelError("price invariant violated for " + tickers_[c / dates_.size()] + " on " +
                                 dates_[c % dates_.size()].to_string());
            }
        }
        if (volume && !is_missing((*volume)[c]) && (*volume)[c] < 0) {
            throw PanelError("negative volume for " + tickers_[c / dates_.size()] + " on " +
                             dates_[c % dates_.size()].to_string());
        }
    }
}

std::vector<std::string> MarketPanel::field_names() const {
    std::vector<std::string> out;
    out.reserve(fields_.size());
    for (const auto& [name, _] : fields_) out.push_back(name);
    return out;
}

std::span<const double> MarketPanel::series(std::string_view field, std::size_t ticker) const {
    auto it = fields_.find(field);
    if (it == fields_.end()) throw PanelError("panel has no field " + std::string(field));
    if (ticker >= tickers_.size()) throw PanelError("ticker index out of range");
    return std::span<const double>(it->second).subspan(ticker * dates_.size(), dates_.size());
}

std::optional<std::size_t> MarketPanel::ticker_index(std::string_view ticker) const {
    auto it = std::lower_bound(tickers_.begin(), tickers_.end(), ticker);
    if (it == tickers_.end() || *it != ticker) return std::nullopt;
    return static_cast<std::size_t>(it - tickers_.begin());
}

std::optional<std::size_t> MarketPanel::date_index(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

bool operator==(const MarketPanel& a, const MarketPanel& b) {
    if (a.dates_ != b.dates_ || a.tickers_ != b.tickers_ || a.fields_.size() != b.fields_.size()) return false;
    for (auto ia = a.fields_.begin(), ib = b.fields_.begin(); ia != a.fields_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!std::equal(ia->second.begin(), ia->second.end(), ib->second.begin(), same_value)) return false;
    }
    return true;
}

PanelSlice::PanelSlice(PanelPtr panel, std::size_t date_begin, std::size_t date_end,
                       std::vector<std::size_t> ticker_indices)
    : panel_(std::move(panel)), begin_(date_begin), end_(date_end), tickers_(std::move(ticker_indices)) {
    if (!panel_) throw PanelError("slice over null panel");
    if (begin_ > end_ || end_ > panel_->n_dates()) {
        throw PanelError("slice window [" + std::to_string(begin_) + ", " + std::to_string(end_) +
                         ") outside panel of " + std::to_string(panel_->n_dates()) + " dates");
    }
    for (auto t : tickers_) {
        if (t >= panel_->n_tickers()) throw PanelError("slice ticker index out of range");
    }
}

PanelSlice PanelSlice::whole(PanelPtr panel) {
    std::vector<std::size_t> all(panel->n_tickers());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::size_t n = panel->n_dates();
    return PanelSlice(std::move(panel), 0, n, std::move(all));
}

std::span<const Date> PanelSlice::dates() const {
    return std::span<const Date>(panel_->dates()).subspan(begin_, end_ - begin_);
}

std::vector<std::string> PanelSlice::ticker_names() const {
    std::vector<std::string> out;
    out.reserve(tickers_.size());
    for (auto t : tickers_) out.push_back(panel_->tickers()[t]);
    return out;
}

std::span<const double> PanelSlice::series(std::string_view field, std::size_t local) const {
    return panel_->series(field, tickers_.at(local)).subspan(begin_, end_ - begin_);
}

PanelSlice PanelSlice::sub_window(std::size_t local_begin, std::size_t local_end) const {
    if (local_begin > local_end || local_end > n_dates()) throw PanelError("sub-window outside slice");
    return PanelSlice(panel_, begin_ + local_begin, begin_ + local_end, tickers_);
}

SplitSlices split_at(const PanelSlice& slice, std::size_t validation_start, std::size_t test_start) {
    const std::size_t n = slice.n_dates();
    if (validation_start == 0 || validation_start >= n || test_start >= n) {
        throw PanelError("split boundary outside range");
    }
    if (validation_start >= test_start) throw PanelError("split leaves the validation slice empty");
    return SplitSlices{slice.sub_window(0, validation_start), slice.sub_window(validation_start, test_start),
                       slice.sub_window(test_start, n)};
}

SplitSlices split(const PanelPtr& panel, Date validation_start, Date test_start) {
    const auto& dates = panel->dates();
    if (dates.empty()) throw PanelError("cannot split an empty panel");
    if (validation_start <= dates.front() || validation_start > dates.back() || test_start <= dates.front() ||
        test_start > dates.back()) {
        throw PanelError("split boundary outside range " + dates.front().to_string() + " .. " +
                         dates.back().to_string());
    }
    if (validation_start >= test_start) throw PanelError("split leaves the validation slice empty");
    auto first_at_or_after = [&](Date d) {
        return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin());
    };
    std::size_t v = first_at_or_after(validation_start);
    std::size_t t = first_at_or_after(test_start);
    if (v >= t) throw PanelError("split leaves the validation slice empty");
    return split_at(PanelSlice::whole(panel), v, t);
}

double EqualWeightIndex::step(std::span<const double> prev_close, std::span<const double> close) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < close.size(); ++i) {
        double p = prev_close[i];
        double c = close[i];
        if (is_missing(p) || is_missing(c) || p == 0.0) continue;
        sum += c / p - 1.0;
        ++count;
    }
    if (count > 0) level_ *= 1.0 + sum / static_cast<double>(count);
    return level_;
}

std::vector<double> equal_weight_index(const PanelSlice& slice) {
    const std::size_t n = slice.n_dates();
    const std::size_t m = slice.n_tickers();
    std::vector<double> out(n, 1.0);
    if (n == 0) return out;
    std::vector<std::span<const double>> closes;
    closes.reserve(m);
    for (std::size_t i = 0; i < m; ++i) closes.push_back(slice.series(kClose, i));
    std::vector<double> prev(m), cur(m);
    EqualWeightIndex index;
    for (std::size_t t = 1; t < n; ++t) {
        for (std::size_t i = 0; i < m; ++i) {
            prev[i] = closes[i][t - 1];
            cur[i] = closes[i][t];
        }
        out[t] = index.step(prev, cur);
    }
    return out;
}

}  // namespace alphaforge::data
