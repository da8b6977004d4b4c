// Seeded synthetic corpus generator: self-identification comments in
// seed submissions, history comments with city-specific vocabulary,
// city-correlated subreddits and longitude-consistent posting hours,
// plus the matching gazetteer and ground truth.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "geoloc/corpus.hpp"

namespace geoloc::synth {

struct SyntheticSpec {
    int n_cities = 5;
    int users_per_city = 200;
    int vocab_size = 200;      // shared (non-local) vocabulary size
    double toponym_rate = 1.0; // P(seed comment carries a usable toponym)
    double tau_shift_hours = 0.0;  // peak-hour shift applied to the eastern group
    double subreddit_predictiveness = 0.9;
    double history_comments_mean = 30.0;
    std::uint64_t seed = 1;

    // when set, longitude-mirrored city pairs share their local vocabulary,
    // so only the temporal signal separates them
    bool mirror_vocab = false;

    double reply_rate = 0.08;        // replies in seed submissions (filtered)
    double relocation_rate = 0.05;   // "born in X" users (filtered)
    double coarse_selfid_rate = 0.04;  // state/country-only self-ids
    double pattern_city_rate = 0.02;   // unknown city + known state self-ids
    double late_comment_rate = 0.03;   // history past the one-month cutoff
    double local_word_rate = 0.25;
    double stopword_rate = 0.40;
    double toponym_word_rate = 0.05;
};

struct SyntheticCorpus {
    std::vector<corpus::CorpusRecord> records;
    std::vector<label::UserLabel> truth;  // per real user, city resolution
    std::vector<gaz::GazetteerEntry> gazetteer_cities;
    gaz::AbbreviationTable abbreviations;
    std::set<std::string> seeds;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// corpus.jsonl, truth.jsonl, gazetteer.tsv, gazetteer_bundle.json, seeds.txt
void write_synthetic(const SyntheticCorpus& corpus, const std::string& out_dir);

SyntheticSpec spec_from_json_file(const std::string& path);

}  // namespace geoloc::synth
