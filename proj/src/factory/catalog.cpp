#include "alphaforge/factory/catalog.h"

#include "alphaforge/common/csv.h"
#include "alphaforge/data/panel.h"
#include "alphaforge/dsl/parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace alphaforge::factory {

namespace {

constexpr std::array<std::string_view, 9> kCategories = {
    "Momentum", "Mean Reversion", "Volatility", "Fundamental", "Liquidity",
    "Quality",  "Growth",         "Technical",  "Macro Economics",
};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::string describe(const CatalogEntry& e) { return "'" + e.category + " | " + e.name + "'"; }

}  // namespace

std::span<const std::string_view> known_categories() { return kCategories; }

std::optional<std::string_view> canonical_category(std::string_view name) {
    for (auto c : kCategories) {
        if (iequals(c, name)) return c;
    }
    return std::nullopt;
}

std::size_t category_rank(std::string_view category) {
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
        if (kCategories[i] == category) return i;
    }
    return kCategories.size();
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Builtin: return "builtin";
        case Provenance::Llm: return "llm";
        case Provenance::User: return "user";
    }
    return "?";
}

std::optional<Provenance> parse_provenance(std::string_view text) {
    if (iequals(text, "builtin")) return Provenance::Builtin;
    if (iequals(text, "llm")) return Provenance::Llm;
    if (iequals(text, "user")) return Provenance::User;
    return std::nullopt;
}

AlphaCatalog::AlphaCatalog(std::vector<CatalogEntry> entries, int version)
    : entries_(std::move(entries)), version_(version) {
    std::vector<std::string> problems;
    std::set<std::string> seen;
    for (auto& e : entries_) {
        auto canon = canonical_category(e.category);
        if (!canon) {
            problems.push_back(describe(e) + ": unknown category");
            exprs_.emplace_back();
            metas_.emplace_back();
            continue;
        }
        e.category = std::string(*canon);
        if (e.name.empty() || e.name.find_first_of("|,\n") != std::string::npos) {
            problems.push_back(describe(e) + ": name must be non-empty and free of '|', ','");
        }
        if (!seen.insert(e.id()).second) problems.push_back(describe(e) + ": duplicate name in category");
        try {
            exprs_.push_back(dsl::parse(e.expression));
            metas_.push_back(dsl::analyze(exprs_.back()));
        } catch (const std::exception& ex) {
            exprs_.emplace_back();
            metas_.emplace_back();
            problems.push_back(describe(e) + ": " + ex.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid catalog entries:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw CatalogError(msg);
    }
    if (entries_.empty()) throw CatalogError("no categories");
    for (auto c : kCategories) {
        bool present = std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.category == c; });
        if (present) categories_.emplace_back(c);
    }
}

std::optional<std::size_t> AlphaCatalog::find(std::string_view id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].id() == id) return i;
    }
    return std::nullopt;
}

std::vector<std::string> AlphaCatalog::needs_fields(std::size_t i) const {
    std::vector<std::string> out;
    for (const auto& f : metas_[i].required_fields) {
        if (!data::is_market_field(f)) out.push_back(f);
    }
    return out;
}

AlphaCatalog AlphaCatalog::add_entries(std::vector<CatalogEntry> added) const {
    std::vector<CatalogEntry> all = entries_;
    for (auto& e : added) {
        e.added_version = version_ + 1;
        all.push_back(std::move(e));
    }
    return AlphaCatalog(std::move(all), version_ + 1);
}

std::vector<std::size_t> AlphaCatalog::indices_of(std::string_view category) const {
    auto canon = canonical_category(category);
    if (!canon || std::find(categories_.begin(), categories_.end(), *canon) == categories_.end()) {
        throw CatalogError("unknown category '" + std::string(category) + "'");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].category == *canon) out.push_back(i);
    }
    return out;
}

std::vector<CatalogEntry> AlphaCatalog::filter_by_category(std::string_view category) const {
    std::vector<CatalogEntry> out;
    for (auto i : indices_of(category)) out.push_back(entries_[i]);
    return out;
}

AlphaCatalog read_catalog(std::istream& in) {
    std::vector<CatalogEntry> entries;
    std::vector<std::string> problems;
    std::vector<std::size_t> entry_lines;
    int version = 1;
    Provenance default_provenance = Provenance::User;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = csv::trim(line);
        if (text.empty()) continue;
        if (text.starts_with("#@")) {
            std::istringstream directive{std::string(text.substr(2))};
            std::string key, value;
            directive >> key >> value;
            if (key == "version") {
                auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), version);
                if (ec != std::errc() || p != value.data() + value.size() || version < 1) {
                    problems.push_back("line " + std::to_string(line_no) + ": bad version '" + value + "'");
                }
            } else if (key == "provenance") {
                auto prov = parse_provenance(value);
                if (!prov) {
                    problems.push_back("line " + std::to_string(line_no) + ": bad provenance '" + value + "'");
                } else {
                    default_provenance = *prov;
                }
            } else {
                problems.push_back("line " + std::to_string(line_no) + ": unknown directive '" + key + "'");
            }
            continue;
        }
        if (text.starts_with('#')) continue;

        auto cols = csv::split(text, '|');
        if (cols.size() != 3 && cols.size() != 5) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 3 or 5 '|'-separated columns");
            continue;
        }
        CatalogEntry e;
        e.category = std::string(csv::trim(cols[0]));
        e.name = std::string(csv::trim(cols[1]));
        e.expression = std::string(csv::trim(cols[2]));
        e.provenance = default_provenance;
        e.added_version = version;
        if (cols.size() == 5) {
            auto prov = parse_provenance(csv::trim(cols[3]));
            auto ver = csv::trim(cols[4]);
            int v = 0;
            auto [p, ec] = std::from_chars(ver.data(), ver.data() + ver.size(), v);
            if (!prov || ec != std::errc() || p != ver.data() + ver.size() || v < 1) {
                problems.push_back("line " + std::to_string(line_no) + ": bad provenance or version");
                continue;
            }
            e.provenance = *prov;
            e.added_version = v;
        }
        if (!canonical_category(e.category)) {
            problems.push_back("line " + std::to_string(line_no) + ": unknown category '" + e.category + "'");
            continue;
        }
        try {
            (void)dsl::parse(e.expression);
        } catch (const dsl::ParseError& err) {
            problems.push_back("line " + std::to_string(line_no) + ", column " +
                               std::to_string(err.column()) + ": " + err.message());
            continue;
        }
        entries.push_back(std::move(e));
        entry_lines.push_back(line_no);
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto canon = std::string(*canonical_category(entries[i].category));
        if (!seen.insert(canon + "::" + entries[i].name).second) {
            problems.push_back("line " + std::to_string(entry_lines[i]) + ": duplicate name '" + entries[i].name +
                               "' in " + canon);
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid catalog manifest:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw CatalogError(msg);
    }
    if (entries.empty()) throw CatalogError("no categories");
    return AlphaCatalog(std::move(entries), version);
}

AlphaCatalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open " + path.string());
    return read_catalog(in);
}

void save_catalog(const AlphaCatalog& catalog, std::ostream& out) {
    out << "# category | name | expression | provenance | added_version\n";
    out << "#@ version " << catalog.version() << '\n';
    for (const auto& e : catalog.entries()) {
        out << e.category << " | " << e.name << " | " << e.expression << " | " << to_string(e.provenance) << " | "
            << e.added_version << '\n';
    }
}

void save_catalog(const AlphaCatalog& catalog, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CatalogError("cannot write " + path.string());
    save_catalog(catalog, out);
}

AlphaCatalog builtin_catalog() {
    std::istringstream in{std::string(builtin_manifest())};
    return read_catalog(in);
}

}  // namespace alphaforge::factory
