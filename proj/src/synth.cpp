#include "geoloc/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "geoloc/rng.hpp"
#include "geoloc/strings.hpp"

namespace geoloc::synth {

namespace {

struct CityRow {
    std::string_view name;
    std::string_view state;
    std::string_view country;
    double lat;
    double lon;
    long long population;
};

// western hemisphere group (split at -30 longitude)
constexpr std::array<CityRow, 16> kWest = {{
    {"boston", "massachusetts", "united states", 42.3601, -71.0589, 694583},
    {"seattle", "washington", "united states", 47.6062, -122.3321, 737015},
    {"austin", "texas", "united states", 30.2672, -97.7431, 961855},
    {"denver", "colorado", "united states", 39.7392, -104.9903, 715522},
    {"chicago", "illinois", "united states", 41.8781, -87.6298, 2716000},
    {"portland", "oregon", "united states", 45.5152, -122.6784, 652503},
    {"atlanta", "georgia", "united states", 33.7490, -84.3880, 498715},
    {"minneapolis", "minnesota", "united states", 44.9778, -93.2650, 429954},
    {"pittsburgh", "pennsylvania", "united states", 40.4406, -79.9959, 302971},
    {"toronto", "ontario", "canada", 43.6532, -79.3832, 2731571},
    {"vancouver", "british columbia", "canada", 49.2827, -123.1207, 631486},
    {"montreal", "quebec", "canada", 45.5017, -73.5673, 1704694},
    {"bogota", "", "colombia", 4.7110, -74.0721, 7181469},
    {"lima", "", "peru", -12.0464, -77.0428, 8852000},
    {"santiago", "", "chile", -33.4489, -70.6693, 5614000},
    {"sao paulo", "", "brazil", -23.5505, -46.6333, 12300000},
}};

constexpr std::array<CityRow, 16> kEast = {{
    {"london", "england", "united kingdom", 51.5074, -0.1278, 8982000},
    {"manchester", "england", "united kingdom", 53.4808, -2.2426, 547627},
    {"liverpool", "england", "united kingdom", 53.4084, -2.9916, 864122},
    {"glasgow", "scotland", "united kingdom", 55.8642, -4.2518, 626410},
    {"dublin", "", "ireland", 53.3498, -6.2603, 544107},
    {"berlin", "", "germany", 52.5200, 13.4050, 3769000},
    {"madrid", "", "spain", 40.4168, -3.7038, 3223000},
    {"amsterdam", "", "netherlands", 52.3676, 4.9041, 872680},
    {"stockholm", "", "sweden", 59.3293, 18.0686, 975551},
    {"helsinki", "", "finland", 60.1699, 24.9384, 655281},
    {"warsaw", "", "poland", 52.2297, 21.0122, 1790658},
    {"tokyo", "", "japan", 35.6762, 139.6503, 13960000},
    {"singapore", "", "singapore", 1.3521, 103.8198, 5686000},
    {"sydney", "new south wales", "australia", -33.8688, 151.2093, 5312000},
    {"melbourne", "victoria", "australia", -37.8136, 144.9631, 5078000},
    {"auckland", "", "new zealand", -36.8485, 174.7633, 1657000},
}};

constexpr std::array<std::string_view, 40> kStopwords = {
    "i",    "me",   "my",   "we",    "our",   "you",  "your", "he",
    "she",  "it",   "they", "them",  "what",  "this", "that", "these",
    "is",   "are",  "was",  "were",  "be",    "have", "has",  "had",
    "do",   "does", "a",    "an",    "the",   "and",  "but",  "if",
    "or",   "of",   "at",   "by",    "for",   "with", "about", "so"};

constexpr std::array<std::string_view, 6> kGenericSubs = {
    "askreddit", "funny", "pics", "news", "gaming", "movies"};

// reverse map onto the bundled abbreviation set
std::string state_abbrev(std::string_view state, std::string_view country) {
    static const std::array<std::pair<std::string_view, std::string_view>, 8> kMap = {{
        {"massachusetts", "ma"},
        {"washington", "wa"},
        {"texas", "tx"},
        {"colorado", "co"},
        {"illinois", "il"},
        {"oregon", "or"},
        {"georgia", "ga"},
        {"pennsylvania", "pa"},
    }};
    if (country != "united states") return "";
    for (const auto& [name, code] : kMap) {
        if (name == state) return std::string(code);
    }
    return "";
}

std::string city_subreddit(std::string_view city) {
    std::string out = "city";
    for (char c : city) {
        if (c != ' ') out.push_back(c);
    }
    return out;
}

gaz::GazetteerEntry to_entry(const CityRow& row) {
    gaz::GazetteerEntry e;
    e.name = std::string(row.name);
    e.hierarchy.city = e.name;
    e.hierarchy.state = std::string(row.state);
    e.hierarchy.country = std::string(row.country);
    if (const gaz::CountryInfo* c = gaz::country_by_name(row.country)) {
        e.hierarchy.continent = std::string(c->continent);
        e.country_code = std::string(c->code);
    } else {
        e.hierarchy.continent = "other";
        e.country_code = std::string(row.country);
    }
    e.population = row.population;
    e.coords = {row.lat, row.lon};
    return e;
}

gaz::AbbreviationTable standard_abbreviations() {
    gaz::AbbreviationTable table;
    auto add = [&table](const std::string& key, const std::string& state,
                        const std::string& country) {
        gaz::LocationHierarchy h;
        h.state = state;
        h.country = country;
        if (const gaz::CountryInfo* c = gaz::country_by_name(country)) {
            h.continent = std::string(c->continent);
        }
        table.entries[key] = h;
    };
    add("ma", "massachusetts", "united states");
    add("wa", "washington", "united states");
    add("tx", "texas", "united states");
    add("co", "colorado", "united states");
    add("il", "illinois", "united states");
    add("or", "oregon", "united states");
    add("ga", "georgia", "united states");
    add("pa", "pennsylvania", "united states");
    add("mn", "minnesota", "united states");
    add("usa", "", "united states");
    add("uk", "", "united kingdom");
    add("bc", "british columbia", "canada");
    add("ot", "ontario", "canada");
    return table;
}

std::string title_case(std::string s) {
    bool up = true;
    for (char& c : s) {
        if (up && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        up = (c == ' ');
    }
    return s;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_cities < 1 || spec.users_per_city < 1 || spec.vocab_size < 1) {
        throw std::invalid_argument("generate_synthetic: spec values must be positive");
    }
    SyntheticCorpus out;
    Rng rng(spec.seed);

    // interleave west/east so two-group splits span hemispheres
    std::vector<CityRow> cities;
    for (int i = 0; i < spec.n_cities; ++i) {
        const std::size_t half = static_cast<std::size_t>(i) / 2;
        if (i % 2 == 0) {
            cities.push_back(kWest[half % kWest.size()]);
        } else {
            cities.push_back(kEast[half % kEast.size()]);
        }
    }
    for (const CityRow& c : cities) out.gazetteer_cities.push_back(to_entry(c));
    out.abbreviations = standard_abbreviations();

    const int n_subs = std::max(3, spec.n_cities / 2);
    std::vector<std::string> seed_subs;
    for (int i = 0; i < n_subs; ++i) {
        seed_subs.push_back("sub_seed_" + std::to_string(i));
        out.seeds.insert(seed_subs.back());
    }

    constexpr std::int64_t kBaseUtc = 1500000000;
    const double west_peak = 18.0;  // UTC hour of peak activity, western group
    auto peak_hour = [&](double lon) {
        if (lon > -30.0) {
            double h = west_peak - spec.tau_shift_hours;
            while (h < 0) h += 24.0;
            return h;
        }
        return west_peak;
    };

    int user_idx = 0;
    int negative_idx = 0;
    char buf[32];
    for (int ci = 0; ci < spec.n_cities; ++ci) {
        const CityRow& city = cities[static_cast<std::size_t>(ci)];
        const gaz::GazetteerEntry entry = to_entry(city);
        const std::string city_name = std::string(city.name);
        const std::string city_sub = city_subreddit(city.name);
        const int vocab_group = spec.mirror_vocab ? ci / 2 : ci;

        for (int ui = 0; ui < spec.users_per_city; ++ui) {
            std::snprintf(buf, sizeof(buf), "u%05d", user_idx);
            const std::string user(buf);
            ++user_idx;
            const std::string& submission =
                seed_subs[rng.uniform_int(seed_subs.size())];
            const std::int64_t seed_time = kBaseUtc + user_idx * 37;

            // seed-submission self-identification
            corpus::CorpusRecord seed;
            seed.id = "c_seed_" + user;
            seed.user = user;
            seed.subreddit = rng.uniform() < 0.3 ? city_sub
                                                 : std::string(kGenericSubs[rng.uniform_int(
                                                       kGenericSubs.size())]);
            seed.parent_kind = "submission";
            seed.submission_id = submission;
            seed.created_utc = seed_time;

            const std::string display = title_case(city_name);
            const double roll = rng.uniform();
            if (roll >= spec.toponym_rate) {
                seed.body = "somewhere on this planet, not telling";
            } else if (rng.uniform() < spec.coarse_selfid_rate) {
                seed.body = city.state.empty() ? title_case(std::string(city.country))
                                               : title_case(std::string(city.state));
            } else if (rng.uniform() < spec.pattern_city_rate) {
                const std::string ab = state_abbrev(city.state, city.country);
                if (!ab.empty()) {
                    seed.body = "Smallville" + std::to_string(ci) + ", " +
                                title_case(ab) + ", USA";
                } else {
                    seed.body = "Smallville" + std::to_string(ci) + ", " +
                                title_case(std::string(city.country));
                }
            } else {
                const double form = rng.uniform();
                const std::string ab = state_abbrev(city.state, city.country);
                if (form < 0.30) {
                    seed.body = display + " here";
                } else if (form < 0.50) {
                    seed.body = "I live in " + display;
                } else if (form < 0.75 && !ab.empty()) {
                    seed.body = display + ", " + title_case(ab);
                } else if (form < 0.90 && !city.state.empty()) {
                    seed.body = display + ", " + title_case(std::string(city.state));
                } else {
                    seed.body = display + ", " + title_case(std::string(city.country));
                }
            }
            out.records.push_back(seed);

            // filtered negatives: replies and relocation mentions
            if (rng.uniform() < spec.reply_rate) {
                const CityRow& other =
                    cities[rng.uniform_int(cities.size())];
                corpus::CorpusRecord reply;
                reply.id = "c_neg_reply_" + std::to_string(negative_idx);
                reply.user = "neg_reply_" + std::to_string(negative_idx);
                ++negative_idx;
                reply.body = title_case(std::string(other.name)) + " is lovely this time of year";
                reply.subreddit = seed.subreddit;
                reply.parent_kind = "comment";
                reply.submission_id = submission;
                reply.created_utc = seed_time + 5;
                out.records.push_back(reply);
            }
            if (rng.uniform() < spec.relocation_rate) {
                const CityRow& other =
                    cities[rng.uniform_int(cities.size())];
                corpus::CorpusRecord mover;
                mover.id = "c_neg_mover_" + std::to_string(negative_idx);
                mover.user = "neg_mover_" + std::to_string(negative_idx);
                ++negative_idx;
                mover.body = "I was born in " + title_case(std::string(other.name)) +
                             " actually";
                mover.subreddit = seed.subreddit;
                mover.parent_kind = "submission";
                mover.submission_id = submission;
                mover.created_utc = seed_time + 9;
                out.records.push_back(mover);
            }

            // comment history
            const int n_hist =
                1 + rng.poisson(std::max(0.0, spec.history_comments_mean - 1.0));
            for (int hi = 0; hi < n_hist; ++hi) {
                corpus::CorpusRecord hist;
                hist.id = "c_hist_" + user + "_" + std::to_string(hi);
                hist.user = user;
                hist.subreddit = rng.uniform() < spec.subreddit_predictiveness
                                     ? city_sub
                                     : std::string(kGenericSubs[rng.uniform_int(
                                           kGenericSubs.size())]);
                hist.parent_kind = "submission";
                hist.submission_id = "sub_hist_" + std::to_string(
                                         rng.uniform_int(64));
                const bool late = rng.uniform() < spec.late_comment_rate;
                const std::int64_t day =
                    late ? 40 : static_cast<std::int64_t>(rng.uniform_int(29));
                int hour = static_cast<int>(
                    std::llround(rng.normal(peak_hour(city.lon), 2.5)));
                hour = ((hour % 24) + 24) % 24;
                hist.created_utc = seed_time + day * 86400 + hour * 3600 +
                                   static_cast<std::int64_t>(rng.uniform_int(3600));

                const int n_tokens = 8 + static_cast<int>(rng.uniform_int(9));
                std::string body;
                for (int t = 0; t < n_tokens; ++t) {
                    if (t > 0) body.push_back(' ');
                    const double tr = rng.uniform();
                    if (tr < spec.stopword_rate) {
                        body += kStopwords[rng.uniform_int(kStopwords.size())];
                    } else if (tr < spec.stopword_rate + spec.local_word_rate) {
                        body += "loc" + std::to_string(vocab_group) + "word" +
                                std::to_string(rng.uniform_int(6));
                    } else if (tr < spec.stopword_rate + spec.local_word_rate +
                                        spec.toponym_word_rate) {
                        body += city_name;
                    } else {
                        const double z = rng.uniform();
                        body += "common" + std::to_string(static_cast<int>(
                                    z * z * spec.vocab_size));
                    }
                }
                hist.body = body;
                out.records.push_back(hist);
            }

            label::UserLabel truth;
            truth.user = user;
            truth.hierarchy = entry.hierarchy;
            truth.resolution = gaz::Resolution::city;
            truth.coords = entry.coords;
            truth.label_utc = seed_time;
            truth.evidence.push_back({seed.id, {}, {}});
            out.truth.push_back(std::move(truth));
        }
    }
    return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        std::ofstream out(dir / "corpus.jsonl");
        if (!out) throw std::runtime_error("cannot write corpus.jsonl");
        for (const corpus::CorpusRecord& r : corpus.records) {
            nlohmann::json j{{"id", r.id},
                             {"user", r.user},
                             {"body", r.body},
                             {"subreddit", r.subreddit},
                             {"parent_kind", r.parent_kind},
                             {"submission_id", r.submission_id},
                             {"created_utc", r.created_utc}};
            out << j.dump() << "\n";
        }
    }
    corpus::write_labels(corpus.truth, (dir / "truth.jsonl").string());
    {
        std::ofstream out(dir / "gazetteer.tsv");
        if (!out) throw std::runtime_error("cannot write gazetteer.tsv");
        int id = 1;
        for (const gaz::GazetteerEntry& e : corpus.gazetteer_cities) {
            out << id++ << "\t" << e.name << "\t" << join(e.alt_names, ',') << "\t"
                << e.coords.lat << "\t" << e.coords.lon << "\t"
                << e.hierarchy.country << "\t" << e.hierarchy.state << "\t"
                << e.population << "\tutc\n";
        }
    }
    corpus::GazetteerBundle bundle;
    bundle.gazetteer = gaz::build_gazetteer(corpus.gazetteer_cities);
    bundle.abbreviations = corpus.abbreviations;
    corpus::save_gazetteer_bundle(bundle, (dir / "gazetteer_bundle.json").string());
    corpus::write_seeds(corpus.seeds, (dir / "seeds.txt").string());
}

SyntheticSpec spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synth spec: " + path);
    nlohmann::json j;
    in >> j;
    SyntheticSpec spec;
    spec.n_cities = j.value("n_cities", spec.n_cities);
    spec.users_per_city = j.value("users_per_city", spec.users_per_city);
    spec.vocab_size = j.value("vocab_size", spec.vocab_size);
    spec.toponym_rate = j.value("toponym_rate", spec.toponym_rate);
    spec.tau_shift_hours = j.value("tau_shift_hours", spec.tau_shift_hours);
    spec.subreddit_predictiveness =
        j.value("subreddit_predictiveness", spec.subreddit_predictiveness);
    spec.history_comments_mean =
        j.value("history_comments_mean", spec.history_comments_mean);
    spec.seed = j.value("seed", spec.seed);
    spec.mirror_vocab = j.value("mirror_vocab", spec.mirror_vocab);
    spec.reply_rate = j.value("reply_rate", spec.reply_rate);
    spec.relocation_rate = j.value("relocation_rate", spec.relocation_rate);
    spec.coarse_selfid_rate = j.value("coarse_selfid_rate", spec.coarse_selfid_rate);
    spec.pattern_city_rate = j.value("pattern_city_rate", spec.pattern_city_rate);
    spec.late_comment_rate = j.value("late_comment_rate", spec.late_comment_rate);
    spec.local_word_rate = j.value("local_word_rate", spec.local_word_rate);
    spec.stopword_rate = j.value("stopword_rate", spec.stopword_rate);
    spec.toponym_word_rate = j.value("toponym_word_rate", spec.toponym_word_rate);
    return spec;
}

}  // namespace geoloc::synth
