#include "geoloc/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "geoloc/strings.hpp"

namespace geoloc::gaz {

namespace {

// population desc, then country code, then finer level, then name
bool entry_order(const GazetteerEntry* a, const GazetteerEntry* b) {
    if (a->population != b->population) return a->population > b->population;
    if (a->country_code != b->country_code) return a->country_code < b->country_code;
    if (a->level() != b->level()) return a->level() > b->level();
    return a->name < b->name;
}

std::string continent_for_country(std::string_view country_name) {
    if (const CountryInfo* c = country_by_name(country_name)) {
        return std::string(c->continent);
    }
    return "other";
}

}  // namespace

std::string_view resolution_name(Resolution r) {
    switch (r) {
        case Resolution::city: return "city";
        case Resolution::county: return "county";
        case Resolution::state: return "state";
        case Resolution::country: return "country";
        case Resolution::continent: return "continent";
        case Resolution::none: break;
    }
    return "none";
}

std::optional<Resolution> resolution_from_name(std::string_view s) {
    if (s == "city") return Resolution::city;
    if (s == "county") return Resolution::county;
    if (s == "state") return Resolution::state;
    if (s == "country") return Resolution::country;
    if (s == "continent") return Resolution::continent;
    return std::nullopt;
}

Resolution LocationHierarchy::resolution() const {
    if (!city.empty()) return Resolution::city;
    if (!county.empty()) return Resolution::county;
    if (!state.empty()) return Resolution::state;
    if (!country.empty()) return Resolution::country;
    if (!continent.empty()) return Resolution::continent;
    return Resolution::none;
}

bool LocationHierarchy::consistent_with(const LocationHierarchy& coarser) const {
    if (!coarser.continent.empty() && coarser.continent != continent) return false;
    if (!coarser.country.empty() && coarser.country != country) return false;
    if (!coarser.state.empty() && coarser.state != state) return false;
    if (!coarser.county.empty() && coarser.county != county) return false;
    if (!coarser.city.empty() && coarser.city != city) return false;
    return true;
}

LocationHierarchy LocationHierarchy::shared_prefix(const LocationHierarchy& other) const {
    // levels empty on both sides pass through (cities directly under a
    // country have no state)
    LocationHierarchy out;
    if (continent.empty() || continent != other.continent) return out;
    out.continent = continent;
    if (country.empty() || country != other.country) return out;
    out.country = country;
    if (state != other.state) return out;
    out.state = state;
    if (county != other.county) return out;
    out.county = county;
    if (city.empty() || city != other.city) return out;
    out.city = city;
    return out;
}

bool LocationHierarchy::is_prefix_of(const LocationHierarchy& finer) const {
    return finer.consistent_with(*this);
}

std::string LocationHierarchy::display() const {
    std::string out;
    auto append = [&out](const std::string& level) {
        if (!out.empty()) out += "/";
        out += level.empty() ? "-" : level;
    };
    append(city);
    append(county);
    append(state);
    append(country);
    append(continent);
    return out;
}

void Gazetteer::rebuild_indices() {
    name_index_.clear();
    hierarchy_index_.clear();
    names_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const GazetteerEntry& e = entries_[i];
        name_index_[e.name].push_back(i);
        for (const std::string& alt : e.alt_names) {
            if (!alt.empty()) name_index_[alt].push_back(i);
        }
        const LocationHierarchy& h = e.hierarchy;
        if (!h.city.empty()) {
            if (!h.state.empty()) hierarchy_index_[h.state].insert(h.city);
            if (!h.country.empty()) hierarchy_index_[h.country].insert(h.city);
        }
        if (!h.state.empty() && !h.country.empty()) {
            hierarchy_index_[h.country].insert(h.state);
        }
        if (!h.country.empty() && !h.continent.empty()) {
            hierarchy_index_[h.continent].insert(h.country);
        }
    }
    names_.reserve(name_index_.size());
    for (const auto& [name, ids] : name_index_) names_.push_back(name);
}

std::vector<const GazetteerEntry*> Gazetteer::lookup(
    std::span<const std::string> tokens) const {
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) key.push_back(' ');
        key += tokens[i];
    }
    return lookup_name(key);
}

std::vector<const GazetteerEntry*> Gazetteer::lookup_name(std::string_view name) const {
    std::vector<const GazetteerEntry*> out;
    auto it = name_index_.find(std::string(name));
    if (it == name_index_.end()) return out;
    out.reserve(it->second.size());
    for (std::size_t id : it->second) out.push_back(&entries_[id]);
    std::sort(out.begin(), out.end(), entry_order);
    return out;
}

std::vector<const GazetteerEntry*> Gazetteer::lookup_constrained(
    std::string_view name, const LocationHierarchy& constraint) const {
    std::vector<const GazetteerEntry*> out = lookup_name(name);
    std::erase_if(out, [&](const GazetteerEntry* e) {
        return !e->hierarchy.consistent_with(constraint);
    });
    return out;
}

bool Gazetteer::has_name(std::string_view name) const {
    return name_index_.contains(std::string(name));
}

bool Gazetteer::hierarchy_adjacent(std::string_view parent, std::string_view child) const {
    auto it = hierarchy_index_.find(std::string(parent));
    if (it == hierarchy_index_.end()) return false;
    return it->second.contains(std::string(child));
}

const GazetteerEntry* Gazetteer::node_for(const LocationHierarchy& h) const {
    const std::string* name = nullptr;
    if (!h.city.empty()) name = &h.city;
    else if (!h.state.empty()) name = &h.state;
    else if (!h.country.empty()) name = &h.country;
    else return nullptr;
    for (const GazetteerEntry* e : lookup_constrained(*name, h)) {
        if (e->level() == h.resolution()) return e;
    }
    return nullptr;
}

Gazetteer build_gazetteer(std::vector<GazetteerEntry> cities, LoadStats stats) {
    Gazetteer g;
    g.entries_ = std::move(cities);
    g.stats_ = std::move(stats);

    // Derive state and country nodes from the city hierarchies. Node
    // population is the sum over member cities (ambiguity prior), its
    // coordinate the geodesic median of member city coordinates.
    std::map<std::pair<std::string, std::string>, std::vector<const GazetteerEntry*>> states;
    std::map<std::string, std::vector<const GazetteerEntry*>> countries;
    for (const GazetteerEntry& e : g.entries_) {
        if (e.hierarchy.city.empty()) continue;
        if (!e.hierarchy.state.empty()) {
            states[{e.hierarchy.state, e.hierarchy.country}].push_back(&e);
        }
        if (!e.hierarchy.country.empty()) {
            countries[e.hierarchy.country].push_back(&e);
        }
    }
    std::vector<GazetteerEntry> derived;
    for (const auto& [key, members] : states) {
        GazetteerEntry node;
        node.name = key.first;
        node.hierarchy.state = key.first;
        node.hierarchy.country = key.second;
        node.hierarchy.continent = members.front()->hierarchy.continent;
        node.country_code = members.front()->country_code;
        std::vector<geo::GeoPoint> pts;
        for (const GazetteerEntry* m : members) {
            node.population += m->population;
            pts.push_back(m->coords);
        }
        node.coords = geo::geodesic_median(pts);
        derived.push_back(std::move(node));
    }
    for (const auto& [country, members] : countries) {
        GazetteerEntry node;
        node.name = country;
        node.hierarchy.country = country;
        node.hierarchy.continent = members.front()->hierarchy.continent;
        node.country_code = members.front()->country_code;
        std::vector<geo::GeoPoint> pts;
        for (const GazetteerEntry* m : members) {
            node.population += m->population;
            pts.push_back(m->coords);
        }
        node.coords = geo::geodesic_median(pts);
        derived.push_back(std::move(node));
    }
    for (GazetteerEntry& d : derived) g.entries_.push_back(std::move(d));
    g.rebuild_indices();
    return g;
}

Gazetteer load_gazetteer(const std::string& path, std::int64_t min_population,
                         bool index_alt_names) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gazetteer file: " + path);

    std::vector<GazetteerEntry> cities;
    LoadStats stats;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++stats.rows_read;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() < 8) {
            ++stats.rows_malformed;
            stats.malformed_lines.push_back(line_no);
            continue;
        }
        GazetteerEntry e;
        try {
            e.name = to_lower(trim(cols[1]));
            e.coords = {std::stod(cols[3]), std::stod(cols[4])};
            e.population = std::stoll(cols[7]);
        } catch (const std::exception&) {
            ++stats.rows_malformed;
            stats.malformed_lines.push_back(line_no);
            continue;
        }
        if (e.name.empty() || trim(cols[5]).empty() || e.coords.lat < -90.0 ||
            e.coords.lat > 90.0 || e.coords.lon < -180.0 || e.coords.lon > 360.0 ||
            e.population < 0) {
            ++stats.rows_malformed;
            stats.malformed_lines.push_back(line_no);
            continue;
        }
        e.coords = geo::normalized(e.coords);
        if (e.population < min_population) {
            ++stats.rows_below_population;
            continue;
        }
        if (index_alt_names) {
            for (const std::string& alt : split(cols[2], ',')) {
                std::string a = to_lower(trim(alt));
                if (!a.empty() && a != e.name) e.alt_names.push_back(a);
            }
            std::sort(e.alt_names.begin(), e.alt_names.end());
            e.alt_names.erase(std::unique(e.alt_names.begin(), e.alt_names.end()),
                              e.alt_names.end());
        }
        e.country_code = to_lower(trim(cols[5]));
        std::string country_name = e.country_code;
        std::string continent = "other";
        std::string iso = e.country_code;
        if (const CountryInfo* c = country_by_code(e.country_code)) {
            country_name = std::string(c->name);
            continent = std::string(c->continent);
        } else if (const CountryInfo* byname = country_by_name(e.country_code)) {
            // column held a full country name instead of an ISO code
            country_name = std::string(byname->name);
            continent = std::string(byname->continent);
            iso = std::string(byname->code);
        }
        e.hierarchy.city = e.name;
        e.hierarchy.state = normalize_admin1(iso, to_lower(trim(cols[6])));
        e.hierarchy.country = country_name;
        e.hierarchy.continent = continent;
        ++stats.rows_kept;
        cities.push_back(std::move(e));
    }
    return build_gazetteer(std::move(cities), std::move(stats));
}

FilterResult filter_common_words(const Gazetteer& g,
                                 std::span<const std::string> common_words) {
    FilterResult result;
    result.gazetteer = g;
    std::set<std::string> removed;
    for (const std::string& w : common_words) {
        auto it = result.gazetteer.name_index_.find(w);
        if (it != result.gazetteer.name_index_.end()) {
            removed.insert(w);
            result.gazetteer.name_index_.erase(it);
        }
    }
    result.gazetteer.names_.clear();
    for (const auto& [name, ids] : result.gazetteer.name_index_) {
        result.gazetteer.names_.push_back(name);
    }
    result.removed.assign(removed.begin(), removed.end());
    return result;
}

const LocationHierarchy* AbbreviationTable::find(std::string_view key) const {
    auto it = entries.find(std::string(key));
    return it == entries.end() ? nullptr : &it->second;
}

AbbreviationTable load_abbreviations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open abbreviation file: " + path);
    AbbreviationTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto comma = t.find(',');
        if (comma == std::string::npos) {
            std::cerr << "abbreviations: skipping malformed line " << line_no << "\n";
            continue;
        }
        std::string key = to_lower(trim(t.substr(0, comma)));
        if (key.size() < 2 || key.size() > 4) {
            std::cerr << "abbreviations: key '" << key << "' outside 2-4 chars, line "
                      << line_no << "\n";
            continue;
        }
        std::vector<std::string> levels = split(t.substr(comma + 1), '/');
        LocationHierarchy h;
        if (levels.size() > 0) h.city = to_lower(trim(levels[0]));
        if (levels.size() > 1) h.state = to_lower(trim(levels[1]));
        if (levels.size() > 2) h.country = to_lower(trim(levels[2]));
        if (!h.country.empty()) {
            h.continent = continent_for_country(h.country);
        }
        if (table.entries.contains(key)) {
            std::cerr << "abbreviations: duplicate key '" << key << "', last wins (line "
                      << line_no << ")\n";
        }
        table.entries[key] = std::move(h);
    }
    return table;
}

std::vector<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = to_lower(trim(line));
        if (!w.empty()) words.push_back(std::move(w));
    }
    return words;
}

}  // namespace geoloc::gaz
