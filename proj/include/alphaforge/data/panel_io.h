#pragma once

#include "alphaforge/data/panel.h"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace alphaforge::data {

/// How source columns/fields map onto canonical (upper-case) field names.
struct FieldSchema {
    /// Source name (case-insensitive) -> canonical name. Unlisted names are upper-cased.
    std::map<std::string, std::string> rename;
    /// Forward-fill every non-market field between report dates.
    bool forward_fill_fundamentals = true;
};

/// A price-invariant violation found at ingestion; the cell was set missing.
struct PanelWarning {
    std::size_t line = 0;
    std::string ticker;
    Date date;
    std::string message;
};

struct LoadResult {
    PanelPtr panel;
    std::vector<PanelWarning> warnings;
};

/// Reads long (`date,ticker,field,value`) or wide (`date,ticker,open,...`) CSV.
/// The layout is detected from the header.
LoadResult load_panel(const std::filesystem::path& path, const FieldSchema& schema = {});
LoadResult read_panel(std::istream& in, const FieldSchema& schema = {});

/// Long-form dump sorted by (field, ticker, date); missing values are empty.
void write_panel(const MarketPanel& panel, std::ostream& out);
void write_panel(const MarketPanel& panel, const std::filesystem::path& path);

}  // namespace alphaforge::data
