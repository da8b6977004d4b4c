// Shared fixtures: an in-memory test gazetteer, an abbreviation table,
// and a scratch-directory helper.

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "geoloc/gazetteer.hpp"

namespace geoloc::testing {

inline gaz::GazetteerEntry city(const std::string& name, const std::string& state,
                                const std::string& country, double lat, double lon,
                                std::int64_t pop) {
    gaz::GazetteerEntry e;
    e.name = name;
    e.hierarchy.city = name;
    e.hierarchy.state = state;
    e.hierarchy.country = country;
    if (const gaz::CountryInfo* c = gaz::country_by_name(country)) {
        e.hierarchy.continent = std::string(c->continent);
        e.country_code = std::string(c->code);
    } else {
        e.hierarchy.continent = "other";
        e.country_code = country;
    }
    e.population = pop;
    e.coords = {lat, lon};
    return e;
}

inline gaz::Gazetteer test_gazetteer() {
    std::vector<gaz::GazetteerEntry> cities = {
        city("boston", "massachusetts", "united states", 42.3601, -71.0589, 694583),
        city("springfield", "missouri", "united states", 37.2090, -93.2923, 169000),
        city("springfield", "massachusetts", "united states", 42.1015, -72.5898,
             155000),
        city("springfield", "illinois", "united states", 39.7817, -89.6501, 114000),
        city("kansas city", "missouri", "united states", 39.0997, -94.5786, 508090),
        city("kansas", "oklahoma", "united states", 36.2190, -94.7966, 15500),
        city("wichita", "kansas", "united states", 37.6872, -97.3301, 389255),
        city("liverpool", "england", "united kingdom", 53.4084, -2.9916, 864122),
        city("paris", "", "france", 48.8566, 2.3522, 2148000),
        city("paris", "texas", "united states", 33.6609, -95.5555, 24839),
        city("scarborough", "ontario", "canada", 43.7764, -79.2318, 632098),
        city("scarborough", "england", "united kingdom", 54.2797, -0.4055, 61000),
        city("toronto", "ontario", "canada", 43.6532, -79.3832, 2731571),
        city("austin", "texas", "united states", 30.2672, -97.7431, 961855),
        city("nice", "", "france", 43.7102, 7.2620, 342522),
    };
    // new york with an alternate name
    gaz::GazetteerEntry ny =
        city("new york", "new york", "united states", 40.7128, -74.0060, 8175133);
    ny.alt_names = {"nyc", "new york city"};
    cities.push_back(std::move(ny));
    return gaz::build_gazetteer(std::move(cities));
}

inline gaz::AbbreviationTable test_abbreviations() {
    gaz::AbbreviationTable t;
    auto add = [&t](const std::string& key, const std::string& state,
                    const std::string& country) {
        gaz::LocationHierarchy h;
        h.state = state;
        h.country = country;
        if (const gaz::CountryInfo* c = gaz::country_by_name(country)) {
            h.continent = std::string(c->continent);
        }
        t.entries[key] = h;
    };
    add("ma", "massachusetts", "united states");
    add("ks", "kansas", "united states");
    add("tx", "texas", "united states");
    add("ny", "new york", "united states");
    add("mo", "missouri", "united states");
    add("usa", "", "united states");
    add("uk", "", "united kingdom");
    add("bc", "british columbia", "canada");
    add("ot", "ontario", "canada");
    return t;
}

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("geoloc_test_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path path() const { return path_; }

    std::string write(const std::string& name, const std::string& content) const {
        const std::filesystem::path p = path_ / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }

private:
    std::filesystem::path path_;
};

}  // namespace geoloc::testing
