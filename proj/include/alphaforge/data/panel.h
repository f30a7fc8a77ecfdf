#pragma once

#include "alphaforge/common/date.h"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alphaforge::data {

inline constexpr std::string_view kOpen = "OPEN";
inline constexpr std::string_view kHigh = "HIGH";
inline constexpr std::string_view kLow = "LOW";
inline constexpr std::string_view kClose = "CLOSE";
inline constexpr std::string_view kVolume = "VOLUME";
inline constexpr std::string_view kVwap = "VWAP";

/// True for OPEN/HIGH/LOW/CLOSE/VOLUME/VWAP.
bool is_market_field(std::string_view field);

class PanelError : public std::runtime_error {
public:
    explicit PanelError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Immutable (field, ticker, date) cube of doubles.
///
/// Tickers and field names are kept sorted so that two panels holding the same
/// data compare equal regardless of how they were assembled. Each field is a
/// ticker-major matrix: series(field, i) is a contiguous span over all dates.
class MarketPanel {
public:
    using FieldMap = std::map<std::string, std::vector<double>, std::less<>>;

    /// Validates every structural and price invariant; throws PanelError on violation.
    MarketPanel(std::vector<Date> dates, std::vector<std::string> tickers, FieldMap fields);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    std::size_t n_dates() const { return dates_.size(); }
    std::size_t n_tickers() const { return tickers_.size(); }

    std::vector<std::string> field_names() const;
    bool has_field(std::string_view field) const { return fields_.find(field) != fields_.end(); }

    std::span<const double> series(std::string_view field, std::size_t ticker) const;
    double at(std::string_view field, std::size_t ticker, std::size_t date) const {
        return series(field, ticker)[date];
    }

    std::optional<std::size_t> ticker_index(std::string_view ticker) const;
    std::optional<std::size_t> date_index(Date d) const;

    /// Equality treating missing == missing; all other values compared exactly.
    friend bool operator==(const MarketPanel& a, const MarketPanel& b);

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    FieldMap fields_;
};

using PanelPtr = std::shared_ptr<const MarketPanel>;

/// A contiguous date window and ticker subset of a shared panel.
class PanelSlice {
public:
    /// Window is [date_begin, date_end) in panel date indices.
    PanelSlice(PanelPtr panel, std::size_t date_begin, std::size_t date_end,
               std::vector<std::size_t> ticker_indices);

    static PanelSlice whole(PanelPtr panel);

    const MarketPanel& panel() const { return *panel_; }
    const PanelPtr& panel_ptr() const { return panel_; }

    std::size_t date_begin() const { return begin_; }
    std::size_t date_end() const { return end_; }
    std::size_t n_dates() const { return end_ - begin_; }
    std::size_t n_tickers() const { return tickers_.size(); }
    bool empty() const { return begin_ == end_; }

    std::span<const Date> dates() const;
    Date first_date() const { return panel_->dates()[begin_]; }
    Date last_date() const { return panel_->dates()[end_ - 1]; }

    const std::vector<std::size_t>& ticker_indices() const { return tickers_; }
    const std::string& ticker_name(std::size_t local) const { return panel_->tickers()[tickers_[local]]; }
    std::vector<std::string> ticker_names() const;

    bool has_field(std::string_view field) const { return panel_->has_field(field); }
    /// Window of one ticker's series; `local` indexes the ticker subset.
    std::span<const double> series(std::string_view field, std::size_t local) const;

    /// Same tickers, narrower window expressed in this slice's local date indices.
    PanelSlice sub_window(std::size_t local_begin, std::size_t local_end) const;

private:
    PanelPtr panel_;
    std::size_t begin_;
    std::size_t end_;
    std::vector<std::size_t> tickers_;
};

struct SplitSlices {
    PanelSlice train;
    PanelSlice validation;
    PanelSlice test;
};

/// Partitions the whole panel into train = [first, validation_start),
/// validation = [validation_start, test_start), test = [test_start, last].
SplitSlices split(const PanelPtr& panel, Date validation_start, Date test_start);

/// Index-based variant of split over a slice's local dates.
SplitSlices split_at(const PanelSlice& slice, std::size_t validation_start, std::size_t test_start);

/// Causal equal-weight index, one step at a time. Shared by the synthetic
/// generator and the benchmark builder so both produce identical levels.
class EqualWeightIndex {
public:
    double level() const { return level_; }
    /// Advances using the mean simple return of tickers with both closes present.
    double step(std::span<const double> prev_close, std::span<const double> close);

private:
    double level_ = 1.0;
};

/// Equal-weight index level per slice date, starting at 1.0.
std::vector<double> equal_weight_index(const PanelSlice& slice);

}  // namespace alphaforge::data
