#include "alphaforge/eval/alpha_series.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace alphaforge::eval {

AlphaSeries::AlphaSeries(std::vector<std::string> tickers, std::vector<Date> dates, std::vector<double> values,
                         std::string source, int warmup)
    : tickers_(std::move(tickers)),
      dates_(std::move(dates)),
      values_(std::move(values)),
      source_(std::move(source)),
      warmup_(warmup) {
    if (values_.size() != tickers_.size() * dates_.size()) {
        throw std::invalid_argument("AlphaSeries: value count does not match tickers x dates");
    }
}

std::vector<double> AlphaSeries::column(std::size_t date) const {
    std::vector<double> out(tickers_.size());
    for (std::size_t i = 0; i < tickers_.size(); ++i) out[i] = at(i, date);
    return out;
}

AlphaSeries AlphaSeries::window(std::size_t begin, std::size_t end) const {
    if (begin > end || end > dates_.size()) throw std::out_of_range("AlphaSeries::window outside series");
    const std::size_t n = end - begin;
    std::vector<double> vals(tickers_.size() * n);
    for (std::size_t i = 0; i < tickers_.size(); ++i) {
        auto r = row(i).subspan(begin, n);
        std::copy(r.begin(), r.end(), vals.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    return AlphaSeries(tickers_, std::vector<Date>(dates_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                   dates_.begin() + static_cast<std::ptrdiff_t>(end)),
                       std::move(vals), source_, 0);
}

AlphaSeries AlphaSeries::with_values(std::vector<double> values, std::string source) const {
    return AlphaSeries(tickers_, dates_, std::move(values), std::move(source), 0);
}

void write_series_csv(const AlphaSeries& series, std::ostream& out) {
    out << "date,ticker,value\n";
    for (std::size_t d = 0; d < series.n_dates(); ++d) {
        const std::string date = series.dates()[d].to_string();
        for (std::size_t t = 0; t < series.n_tickers(); ++t) {
            out << date << ',' << series.tickers()[t] << ',' << csv::format_double(series.at(t, d)) << '\n';
        }
    }
}

void write_series_csv(const AlphaSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_series_csv(series, out);
}

AlphaSeries read_series_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::map<std::pair<std::string, Date>, double> cells;
    std::set<std::string> tickers;
    std::set<Date> dates;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        if (line_no == 1) {
            if (csv::trim(line) != "date,ticker,value") {
                throw std::runtime_error("alpha series header must be date,ticker,value");
            }
            continue;
        }
        auto cols = csv::split(line);
        if (cols.size() != 3) throw std::runtime_error("line " + std::to_string(line_no) + ": expected 3 columns");
        try {
            Date d = Date::parse(csv::trim(cols[0]));
            std::string t(csv::trim(cols[1]));
            if (!cells.emplace(std::make_pair(t, d), csv::parse_double(cols[2])).second) {
                throw std::runtime_error("duplicate entry for " + t + " on " + d.to_string());
            }
            tickers.insert(t);
            dates.insert(d);
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::vector<std::string> tick(tickers.begin(), tickers.end());
    std::vector<Date> ds(dates.begin(), dates.end());
    std::vector<double> values(tick.size() * ds.size(), kMissing);
    for (const auto& [key, v] : cells) {
        auto ti = static_cast<std::size_t>(std::lower_bound(tick.begin(), tick.end(), key.first) - tick.begin());
        auto di = static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), key.second) - ds.begin());
        values[ti * ds.size() + di] = v;
    }
    return AlphaSeries(std::move(tick), std::move(ds), std::move(values));
}

AlphaSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_series_csv(in);
}

}  // namespace alphaforge::eval
