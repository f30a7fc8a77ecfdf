#pragma once

#include "alphaforge/dsl/analysis.h"
#include "alphaforge/dsl/ast.h"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alphaforge::factory {

/// The nine seed categories in their canonical order.
std::span<const std::string_view> known_categories();

/// Canonical spelling of a category name (case-insensitive match), or nullopt.
std::optional<std::string_view> canonical_category(std::string_view name);

/// Position of a category in the canonical order.
std::size_t category_rank(std::string_view category);

enum class Provenance { Builtin, Llm, User };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view text);

struct CatalogEntry {
    std::string category;
    std::string name;
    std::string expression;
    Provenance provenance = Provenance::User;
    int added_version = 0;

    /// "Category::Name", unique across a catalog.
    std::string id() const { return category + "::" + name; }

    friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable, versioned set of seed alphas. Every entry's expression parses and
/// analyzes; entries are unique per (category, name); every listed category is non-empty.
class AlphaCatalog {
public:
    /// Validates and builds a catalog; throws CatalogError listing every bad entry.
    AlphaCatalog(std::vector<CatalogEntry> entries, int version);

    int version() const { return version_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const CatalogEntry& entry(std::size_t i) const { return entries_[i]; }
    const dsl::AlphaExpr& expr(std::size_t i) const { return exprs_[i]; }
    const dsl::ExprMeta& meta(std::size_t i) const { return metas_[i]; }

    /// Categories that have entries, in canonical order.
    const std::vector<std::string>& categories() const { return categories_; }

    std::optional<std::size_t> find(std::string_view id) const;

    /// Required fields outside OPEN/HIGH/LOW/CLOSE/VOLUME/VWAP; non-empty means the
    /// entry can only be evaluated on a panel that supplies them.
    std::vector<std::string> needs_fields(std::size_t i) const;

    /// New catalog with `added` appended under version + 1; this catalog is untouched.
    /// Each added entry is stamped with the new version.
    AlphaCatalog add_entries(std::vector<CatalogEntry> added) const;

    /// Entries of one category in catalog order; throws on an unknown category.
    std::vector<CatalogEntry> filter_by_category(std::string_view category) const;

    /// Indices of the entries of one category, in catalog order.
    std::vector<std::size_t> indices_of(std::string_view category) const;

    friend bool operator==(const AlphaCatalog& a, const AlphaCatalog& b) {
        return a.version_ == b.version_ && a.entries_ == b.entries_;
    }

private:
    std::vector<CatalogEntry> entries_;
    std::vector<dsl::AlphaExpr> exprs_;
    std::vector<dsl::ExprMeta> metas_;
    std::vector<std::string> categories_;
    int version_;
};

/// Manifest: one `category | name | expression [| provenance | added_version]` per
/// line, `#` comments, and an optional `#@ version N` directive.
AlphaCatalog read_catalog(std::istream& in);
AlphaCatalog load_catalog(const std::filesystem::path& path);
void save_catalog(const AlphaCatalog& catalog, std::ostream& out);
void save_catalog(const AlphaCatalog& catalog, const std::filesystem::path& path);

/// The catalog compiled into the library from the seed manifest.
AlphaCatalog builtin_catalog();
std::string_view builtin_manifest();

}  // namespace alphaforge::factory
