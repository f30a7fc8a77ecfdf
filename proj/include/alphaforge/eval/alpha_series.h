#pragma once

#include "alphaforge/common/date.h"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace alphaforge::eval {

/// Ticker x date matrix of alpha values (ticker-major) with missing markers.
class AlphaSeries {
public:
    AlphaSeries() = default;
    AlphaSeries(std::vector<std::string> tickers, std::vector<Date> dates, std::vector<double> values,
                std::string source = {}, int warmup = 0);

    std::size_t n_tickers() const { return tickers_.size(); }
    std::size_t n_dates() const { return dates_.size(); }
    const std::vector<std::string>& tickers() const { return tickers_; }
    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& source() const { return source_; }
    int warmup() const { return warmup_; }

    double at(std::size_t ticker, std::size_t date) const { return values_[ticker * dates_.size() + date]; }
    std::span<const double> row(std::size_t ticker) const {
        return std::span<const double>(values_).subspan(ticker * dates_.size(), dates_.size());
    }
    /// Values of every ticker on one date.
    std::vector<double> column(std::size_t date) const;

    /// Dates [begin, end) of this series; warmup is not carried over.
    AlphaSeries window(std::size_t begin, std::size_t end) const;

    /// Same shape, values replaced.
    AlphaSeries with_values(std::vector<double> values, std::string source) const;

    bool same_shape(const AlphaSeries& other) const {
        return tickers_ == other.tickers_ && dates_ == other.dates_;
    }

private:
    std::vector<std::string> tickers_;
    std::vector<Date> dates_;
    std::vector<double> values_;
    std::string source_;
    int warmup_ = 0;
};

/// CSV `date,ticker,value` ordered by date then ticker; missing is an empty value.
void write_series_csv(const AlphaSeries& series, std::ostream& out);
void write_series_csv(const AlphaSeries& series, const std::filesystem::path& path);
AlphaSeries read_series_csv(std::istream& in);
AlphaSeries read_series_csv(const std::filesystem::path& path);

}  // namespace alphaforge::eval
