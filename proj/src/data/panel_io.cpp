#include "alphaforge/data/panel_io.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/common/missing.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

namespace alphaforge::data {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

std::string canonical_field(std::string_view raw, const FieldSchema& schema) {
    std::string key = upper(csv::trim(raw));
    for (const auto& [from, to] : schema.rename) {
        if (upper(from) == key) return upper(to);
    }
    return key;
}

struct Cell {
    double value;
    std::size_t line;
};

// (field, ticker, date) -> value, collected before the panel is assembled.
using CellMap = std::map<std::tuple<std::string, std::string, Date>, Cell>;

void put(CellMap& cells, std::string field, std::string ticker, Date date, double value, std::size_t line) {
    auto key = std::make_tuple(std::move(field), std::move(ticker), date);
    auto [it, inserted] = cells.emplace(key, Cell{value, line});
    if (!inserted) {
        throw PanelError("duplicate row for ticker " + std::get<1>(key) + " on " + date.to_string() +
                             " (field " + std::get<0>(key) + ", first seen on line " +
                             std::to_string(it->second.line) + ")",
                         line);
    }
}

}  // namespace

LoadResult read_panel(std::istream& in, const FieldSchema& schema) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!csv::trim(line).empty()) {
            for (auto col : csv::split(line)) header.push_back(upper(csv::trim(col)));
            break;
        }
    }
    if (header.size() < 3 || header[0] != "DATE" || header[1] != "TICKER") {
        throw PanelError("header must start with date,ticker", line_no);
    }
    const bool long_form = header.size() == 4 && header[2] == "FIELD" && header[3] == "VALUE";
    std::vector<std::string> wide_fields;
    if (!long_form) {
        for (std::size_t i = 2; i < header.size(); ++i) wide_fields.push_back(canonical_field(header[i], schema));
    }

    CellMap cells;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        auto cols = csv::split(line);
        if (cols.size() != header.size()) {
            throw PanelError("expected " + std::to_string(header.size()) + " columns, found " +
                                 std::to_string(cols.size()),
                             line_no);
        }
        try {
            Date date = Date::parse(csv::trim(cols[0]));
            std::string ticker(csv::trim(cols[1]));
            if (ticker.empty()) throw std::invalid_argument("empty ticker");
            if (long_form) {
                put(cells, canonical_field(cols[2], schema), ticker, date, csv::parse_double(cols[3]), line_no);
            } else {
                for (std::size_t i = 0; i < wide_fields.size(); ++i) {
                    put(cells, wide_fields[i], ticker, date, csv::parse_double(cols[i + 2]), line_no);
                }
            }
        } catch (const PanelError&) {
            throw;
        } catch (const std::exception& e) {
            throw PanelError(std::string("unparsable row: ") + e.what(), line_no);
        }
    }
    if (cells.empty()) throw PanelError("panel file contains no data rows");

    std::set<std::string> field_set, ticker_set;
    std::set<Date> date_set;
    for (const auto& [key, _] : cells) {
        field_set.insert(std::get<0>(key));
        ticker_set.insert(std::get<1>(key));
        date_set.insert(std::get<2>(key));
    }
    std::vector<Date> dates(date_set.begin(), date_set.end());
    std::vector<std::string> tickers(ticker_set.begin(), ticker_set.end());
    const std::size_t nd = dates.size();
    const std::size_t nt = tickers.size();
    auto date_pos = [&](Date d) { return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), d) - dates.begin()); };
    auto ticker_pos = [&](const std::string& t) {
        return static_cast<std::size_t>(std::lower_bound(tickers.begin(), tickers.end(), t) - tickers.begin());
    };

    MarketPanel::FieldMap fields;
    std::vector<std::size_t> first_line(nd * nt, 0);
    for (const auto& f : field_set) fields.emplace(f, std::vector<double>(nd * nt, kMissing));
    for (const auto& [key, cell] : cells) {
        std::size_t idx = ticker_pos(std::get<1>(key)) * nd + date_pos(std::get<2>(key));
        fields.find(std::get<0>(key))->second[idx] = cell.value;
        if (first_line[idx] == 0 || cell.line < first_line[idx]) first_line[idx] = cell.line;
    }

    LoadResult result;
    auto get = [&](std::string_view f) -> std::vector<double>* {
        auto it = fields.find(f);
        return it == fields.end() ? nullptr : &it->second;
    };
    auto* open = get(kOpen);
    auto* high = get(kHigh);
    auto* low = get(kLow);
    auto* close = get(kClose);
    auto* volume = get(kVolume);
    for (std::size_t idx = 0; idx < nd * nt; ++idx) {
        double hi = high ? (*high)[idx] : kMissing;
        double lo = low ? (*low)[idx] : kMissing;
        std::string problem;
        if (!is_missing(hi) && !is_missing(lo) && hi < lo) problem = "HIGH < LOW";
        for (auto [name, body] : {std::pair{kOpen, open}, std::pair{kClose, close}}) {
            if (!problem.empty() || !body || is_missing((*body)[idx])) continue;
            double v = (*body)[idx];
            if (!is_missing(lo) && lo > v) problem = "LOW > " + std::string(name);
            if (!is_missing(hi) && hi < v) problem = "HIGH < " + std::string(name);
        }
        if (problem.empty() && volume && !is_missing((*volume)[idx]) && (*volume)[idx] < 0) {
            problem = "negative VOLUME";
        }
        if (problem.empty()) continue;
        result.warnings.push_back(PanelWarning{first_line[idx], tickers[idx / nd], dates[idx % nd],
                                               problem + "; row marked missing"});
        for (auto& [_, values] : fields) values[idx] = kMissing;
    }

    if (schema.forward_fill_fundamentals) {
        for (auto& [name, values] : fields) {
            if (is_market_field(name)) continue;
            for (std::size_t t = 0; t < nt; ++t) {
                double last = kMissing;
                for (std::size_t d = 0; d < nd; ++d) {
                    double& v = values[t * nd + d];
                    if (is_missing(v)) v = last;
                    else last = v;
                }
            }
        }
    }

    result.panel = std::make_shared<const MarketPanel>(std::move(dates), std::move(tickers), std::move(fields));
    return result;
}

LoadResult load_panel(const std::filesystem::path& path, const FieldSchema& schema) {
    std::ifstream in(path);
    if (!in) throw PanelError("cannot open panel file " + path.string());
    return read_panel(in, schema);
}

void write_panel(const MarketPanel& panel, std::ostream& out) {
    out << "date,ticker,field,value\n";
    for (const auto& field : panel.field_names()) {
        for (std::size_t t = 0; t < panel.n_tickers(); ++t) {
            auto values = panel.series(field, t);
            for (std::size_t d = 0; d < panel.n_dates(); ++d) {
                out << panel.dates()[d].to_string() << ',' << panel.tickers()[t] << ',' << field << ','
                    << csv::format_double(values[d]) << '\n';
            }
        }
    }
}

void write_panel(const MarketPanel& panel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw PanelError("cannot write panel file " + path.string());
    write_panel(panel, out);
}

}  // namespace alphaforge::data
