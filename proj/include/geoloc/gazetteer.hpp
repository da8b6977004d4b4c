// Place-name knowledge base: a population-filtered city index plus the
// state/country nodes derived from the cities' hierarchies, and the
// abbreviation table used to disambiguate them.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/geo.hpp"

namespace geoloc::gaz {

enum class Resolution { none = 0, continent, country, state, county, city };

std::string_view resolution_name(Resolution r);
std::optional<Resolution> resolution_from_name(std::string_view s);

struct LocationHierarchy {
    std::string city;
    std::string county;
    std::string state;
    std::string country;    // always present for complete hierarchies
    std::string continent;  // always present for complete hierarchies

    Resolution resolution() const;
    bool empty() const { return resolution() == Resolution::none; }

    // Does this hierarchy agree with `coarser` on every level coarser has set?
    bool consistent_with(const LocationHierarchy& coarser) const;

    // Deepest chain shared with `other`, walking continent -> city.
    LocationHierarchy shared_prefix(const LocationHierarchy& other) const;

    // True when every set level of this hierarchy matches `finer`
    // (i.e. this is a coarse prefix of finer).
    bool is_prefix_of(const LocationHierarchy& finer) const;

    std::string display() const;  // "city/county/state/country/continent" with gaps

    bool operator==(const LocationHierarchy&) const = default;
    auto operator<=>(const LocationHierarchy&) const = default;
};

struct GazetteerEntry {
    std::string name;  // lowercase
    std::vector<std::string> alt_names;
    LocationHierarchy hierarchy;
    std::int64_t population = 0;
    geo::GeoPoint coords;
    std::string country_code;  // lowercased source column, used for tie-breaks

    Resolution level() const { return hierarchy.resolution(); }
};

struct LoadStats {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_below_population = 0;
    std::size_t rows_malformed = 0;
    std::vector<std::size_t> malformed_lines;  // 1-based line numbers
};

class Gazetteer;
struct FilterResult;

// Assembles a gazetteer from already-parsed city entries (used by tests
// and the synthetic generator).
Gazetteer build_gazetteer(std::vector<GazetteerEntry> cities, LoadStats stats = {});

// Removes every indexed name exactly matching a common word. Entries are
// kept for hierarchy/coordinate purposes; they just stop being matchable.
FilterResult filter_common_words(const Gazetteer& g,
                                 std::span<const std::string> common_words);

class Gazetteer {
public:
    Gazetteer() = default;

    const std::vector<GazetteerEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // All entries (cities and derived state/country nodes) whose name or
    // alt name equals the joined token sequence, population-descending.
    std::vector<const GazetteerEntry*> lookup(std::span<const std::string> tokens) const;
    std::vector<const GazetteerEntry*> lookup_name(std::string_view name) const;

    // lookup_name filtered to entries consistent with `constraint`.
    std::vector<const GazetteerEntry*> lookup_constrained(
        std::string_view name, const LocationHierarchy& constraint) const;

    bool has_name(std::string_view name) const;

    // parent name -> child names, for adjacency checks
    const std::map<std::string, std::set<std::string>>& hierarchy_index() const {
        return hierarchy_index_;
    }
    bool hierarchy_adjacent(std::string_view parent, std::string_view child) const;

    // Finest node matching the hierarchy (state node if state set, else
    // country node); nullptr when absent.
    const GazetteerEntry* node_for(const LocationHierarchy& h) const;

    const LoadStats& load_stats() const { return stats_; }
    const std::vector<std::string>& indexed_names() const { return names_; }

    friend Gazetteer build_gazetteer(std::vector<GazetteerEntry> cities, LoadStats stats);
    friend FilterResult filter_common_words(const Gazetteer& g,
                                            std::span<const std::string> common_words);

private:
    void rebuild_indices();

    std::vector<GazetteerEntry> entries_;  // cities first, derived nodes after
    std::map<std::string, std::vector<std::size_t>> name_index_;
    std::map<std::string, std::set<std::string>> hierarchy_index_;
    std::vector<std::string> names_;  // sorted keys of name_index_
    LoadStats stats_;
};

// Loads a tab-separated place file. Columns: geonameid, name,
// alternatenames (comma-joined), latitude, longitude, country, admin1,
// population, timezone. Unused columns ignored; malformed rows skipped
// and recorded in LoadStats. Entries below min_population are dropped.
Gazetteer load_gazetteer(const std::string& path, std::int64_t min_population = 15000,
                         bool index_alt_names = true);

struct FilterResult {
    Gazetteer gazetteer;
    std::vector<std::string> removed;  // indexed names that matched, sorted
};

struct AbbreviationTable {
    std::map<std::string, LocationHierarchy> entries;

    const LocationHierarchy* find(std::string_view key) const;
    std::size_t size() const { return entries.size(); }
};

// Two-column file `abbrev,city/state/country` (levels may be empty).
// Keys outside 2-4 characters are malformed; duplicate keys: last wins.
AbbreviationTable load_abbreviations(const std::string& path);

// One lowercase word per line.
std::vector<std::string> load_word_list(const std::string& path);

// Country metadata compiled into the library (ISO code -> name/continent).
struct CountryInfo {
    std::string_view code;
    std::string_view name;
    std::string_view continent;
};
const CountryInfo* country_by_code(std::string_view code);
const CountryInfo* country_by_name(std::string_view name);

// admin1 code normalization (US postal, CA numeric, GB constituents)
std::string normalize_admin1(std::string_view country_code, std::string_view admin1);

}  // namespace geoloc::gaz
