// Turns raw comment text into candidate location mentions: tokenization,
// n-gram enumeration, gazetteer/abbreviation matching, hierarchy merging
// and the City-State-Country syntactic fallback rule.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geoloc/gazetteer.hpp"

namespace geoloc::extract {

struct Comment {
    std::string id;
    std::string user;
    std::string body;
    std::string subreddit;
    std::int64_t created_utc = 0;
    bool is_reply = false;
    std::string submission_id;
};

enum class SourceRule { gazetteer, abbreviation_merge, pattern };

std::string_view source_rule_name(SourceRule r);

struct LocationMention {
    std::vector<std::string> tokens;  // matched token span
    std::size_t begin = 0;            // token indices, [begin, end)
    std::size_t end = 0;
    gaz::LocationHierarchy hierarchy;  // committed (best-candidate) hierarchy
    SourceRule source_rule = SourceRule::gazetteer;

    // resolution support: the finest component's surface name, the
    // textually-evidenced coarse constraint, and whether the finest
    // component matched the gazetteer on its own
    std::string name;
    gaz::LocationHierarchy constraint;
    bool city_verified = true;
};

// Lowercase, contraction expansion (fixed 40-entry table), URL and
// pure-number removal, punctuation stripping. Commas become standalone
// tokens; `keep_commas = false` drops them (feature counting uses this).
std::vector<std::string> tokenize(const std::string& text, bool keep_commas = true);

std::size_t contraction_table_size();

struct Ngram {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string joined;  // tokens joined by single spaces
};

// Every contiguous n-gram for n in [1, max_n], position-major order.
std::vector<Ngram> candidate_ngrams(std::span<const std::string> tokens,
                                    std::size_t max_n = 4);

// Gazetteer matches, abbreviation attachment, hierarchy-consistent
// adjacency merging, and substring pruning.
std::vector<LocationMention> extract_mentions(std::span<const std::string> tokens,
                                              const gaz::Gazetteer& g,
                                              const gaz::AbbreviationTable& a);

// `X , Y` / `X , Y , Z` shapes whose coarse components resolve; emits
// mentions only over spans extract_mentions left uncovered.
std::vector<LocationMention> pattern_rule(std::span<const std::string> tokens,
                                          const gaz::Gazetteer& g,
                                          const gaz::AbbreviationTable& a);

// extract_mentions plus pattern_rule, sorted by span start.
std::vector<LocationMention> extract_all(std::span<const std::string> tokens,
                                         const gaz::Gazetteer& g,
                                         const gaz::AbbreviationTable& a);

// Seed-comment filter: drops replies and relocation/birthplace phrasing.
bool filter_comment(const Comment& c);

}  // namespace geoloc::extract
