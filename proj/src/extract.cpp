#include "geoloc/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "geoloc/strings.hpp"

namespace geoloc::extract {

namespace {

struct ContractionEntry {
    std::string_view from;
    std::string_view to;
};

constexpr std::array<ContractionEntry, 40> kContractions = {{
    {"i'm", "i am"},           {"i've", "i have"},
    {"i'll", "i will"},        {"i'd", "i would"},
    {"you're", "you are"},     {"you've", "you have"},
    {"you'll", "you will"},    {"you'd", "you would"},
    {"he's", "he is"},         {"he'll", "he will"},
    {"she's", "she is"},       {"she'll", "she will"},
    {"it's", "it is"},         {"it'll", "it will"},
    {"we're", "we are"},       {"we've", "we have"},
    {"we'll", "we will"},      {"we'd", "we would"},
    {"they're", "they are"},   {"they've", "they have"},
    {"they'll", "they will"},  {"they'd", "they would"},
    {"that's", "that is"},     {"there's", "there is"},
    {"here's", "here is"},     {"what's", "what is"},
    {"who's", "who is"},       {"where's", "where is"},
    {"let's", "let us"},       {"isn't", "is not"},
    {"aren't", "are not"},     {"wasn't", "was not"},
    {"weren't", "were not"},   {"don't", "do not"},
    {"doesn't", "does not"},   {"didn't", "did not"},
    {"can't", "can not"},      {"won't", "will not"},
    {"couldn't", "could not"}, {"wouldn't", "would not"},
}};

bool is_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_url(std::string_view s) {
    return s.find("://") != std::string_view::npos || s.starts_with("www.");
}

// has at least one digit and no letters ("2019", "3.5", "1,200" pieces)
bool is_pure_number(std::string_view s) {
    bool digit = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
        if (std::isalpha(static_cast<unsigned char>(c))) return false;
    }
    return digit;
}

const std::string_view* contraction_expansion(std::string_view core) {
    for (const ContractionEntry& e : kContractions) {
        if (e.from == core) return &e.to;
    }
    return nullptr;
}

void emit_core(const std::string& core, std::vector<std::string>& out) {
    if (core.empty()) return;
    if (const std::string_view* exp = contraction_expansion(core)) {
        for (const std::string& part : split(*exp, ' ')) out.push_back(part);
        return;
    }
    if (is_pure_number(core)) return;
    out.push_back(core);
}

// match candidate used while assembling mentions
struct Match {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string name;  // finest component surface name
    std::vector<const gaz::GazetteerEntry*> candidates;
    gaz::LocationHierarchy constraint;
    SourceRule source = SourceRule::gazetteer;
    bool city_verified = true;
    gaz::LocationHierarchy unverified;  // set when candidates empty
};

gaz::LocationHierarchy committed_hierarchy(const Match& m) {
    if (!m.candidates.empty()) return m.candidates.front()->hierarchy;
    return m.unverified;
}

LocationMention to_mention(const Match& m, std::span<const std::string> tokens) {
    LocationMention out;
    out.begin = m.begin;
    out.end = m.end;
    out.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(m.begin),
                      tokens.begin() + static_cast<std::ptrdiff_t>(m.end));
    out.hierarchy = committed_hierarchy(m);
    out.source_rule = m.source;
    out.name = m.name;
    out.constraint = m.constraint;
    out.city_verified = m.city_verified;
    return out;
}

bool span_contains(std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2) {
    // [b2, e2) strictly inside [b1, e1)
    return b1 <= b2 && e2 <= e1 && (e1 - b1) > (e2 - b2);
}

// function-word prefix trimmed from unverified pattern-rule city runs
const std::set<std::string>& junk_prefix_words() {
    static const std::set<std::string> words = {
        "i",    "am",   "an",  "a",    "the",  "in",   "from", "of",
        "to",   "at",   "im",  "live", "lives", "living", "here", "now",
        "currently", "is", "was", "be", "my", "me", "we", "you", "and",
        "but", "hi", "hello", "hey", "yes", "no"};
    return words;
}

}  // namespace

std::string_view source_rule_name(SourceRule r) {
    switch (r) {
        case SourceRule::gazetteer: return "gazetteer";
        case SourceRule::abbreviation_merge: return "abbreviation-merge";
        case SourceRule::pattern: return "pattern";
    }
    return "gazetteer";
}

std::size_t contraction_table_size() { return kContractions.size(); }

std::vector<std::string> tokenize(const std::string& text, bool keep_commas) {
    std::vector<std::string> out;
    const std::string lower = to_lower(text);
    std::size_t i = 0;
    const std::size_t n = lower.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(lower[i]))) ++i;
        if (i == start) continue;
        std::string_view raw(lower.data() + start, i - start);
        if (is_url(raw)) continue;

        // split on commas, keeping each as its own token
        std::size_t p = 0;
        while (p <= raw.size()) {
            std::size_t comma = raw.find(',', p);
            std::string_view piece =
                raw.substr(p, comma == std::string_view::npos ? raw.size() - p
                                                              : comma - p);
            // strip leading/trailing punctuation; internal chars survive,
            // so contractions still reach the expansion table intact
            std::size_t b = 0, e = piece.size();
            while (b < e && is_punct(piece[b])) ++b;
            while (e > b && is_punct(piece[e - 1])) --e;
            emit_core(std::string(piece.substr(b, e - b)), out);
            if (comma == std::string_view::npos) break;
            if (keep_commas) out.push_back(",");
            p = comma + 1;
        }
    }
    return out;
}

std::vector<Ngram> candidate_ngrams(std::span<const std::string> tokens,
                                    std::size_t max_n) {
    std::vector<Ngram> out;
    if (max_n == 0) return out;
    const std::size_t t = tokens.size();
    for (std::size_t begin = 0; begin < t; ++begin) {
        std::string joined;
        for (std::size_t n = 1; n <= max_n && begin + n <= t; ++n) {
            if (n > 1) joined.push_back(' ');
            joined += tokens[begin + n - 1];
            out.push_back({begin, begin + n, joined});
        }
    }
    return out;
}

namespace {

// abbreviation fragment or coarser gazetteer candidate applied to a match:
// returns the narrowed candidate set (empty when inconsistent)
std::vector<const gaz::GazetteerEntry*> narrow_candidates(
    const std::vector<const gaz::GazetteerEntry*>& cands,
    const gaz::LocationHierarchy& coarser) {
    std::vector<const gaz::GazetteerEntry*> out;
    for (const gaz::GazetteerEntry* c : cands) {
        if (c->hierarchy.consistent_with(coarser)) out.push_back(c);
    }
    return out;
}

gaz::LocationHierarchy merge_constraint(const gaz::LocationHierarchy& fine,
                                        const gaz::LocationHierarchy& coarse) {
    gaz::LocationHierarchy out = fine;
    if (out.county.empty()) out.county = coarse.county;
    if (out.state.empty()) out.state = coarse.state;
    if (out.country.empty()) out.country = coarse.country;
    if (out.continent.empty()) out.continent = coarse.continent;
    return out;
}

// levels set on both sides must agree
bool compatible(const gaz::LocationHierarchy& a, const gaz::LocationHierarchy& b) {
    auto clash = [](const std::string& x, const std::string& y) {
        return !x.empty() && !y.empty() && x != y;
    };
    return !clash(a.city, b.city) && !clash(a.county, b.county) &&
           !clash(a.state, b.state) && !clash(a.country, b.country) &&
           !clash(a.continent, b.continent);
}

std::vector<Match> gather_matches(std::span<const std::string> tokens,
                                  const gaz::Gazetteer& g,
                                  const gaz::AbbreviationTable& a) {
    std::vector<Match> matches;
    for (const Ngram& ng : candidate_ngrams(tokens, 4)) {
        if (ng.joined.find(',') != std::string::npos) continue;
        std::vector<const gaz::GazetteerEntry*> cands = g.lookup_name(ng.joined);
        if (cands.empty()) continue;
        Match m;
        m.begin = ng.begin;
        m.end = ng.end;
        m.name = ng.joined;
        m.candidates = std::move(cands);
        matches.push_back(std::move(m));
    }

    // abbreviation attachment and hierarchy merges, to fixpoint
    auto exists = [&matches](const Match& m) {
        return std::any_of(matches.begin(), matches.end(), [&](const Match& o) {
            return o.begin == m.begin && o.end == m.end && o.source == m.source &&
                   o.name == m.name && o.constraint == m.constraint;
        });
    };
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 8) {
        changed = false;
        const std::size_t count = matches.size();
        for (std::size_t mi = 0; mi < count; ++mi) {
            Match m = matches[mi];
            std::size_t next = m.end;
            if (next < tokens.size() && tokens[next] == ",") ++next;
            if (next >= tokens.size()) continue;

            // abbreviation directly following (one comma tolerated)
            const gaz::LocationHierarchy* frag = a.find(tokens[next]);
            if (frag && compatible(m.constraint, *frag)) {
                Match merged = m;
                merged.end = next + 1;
                merged.source = SourceRule::abbreviation_merge;
                merged.constraint = merge_constraint(m.constraint, *frag);
                std::vector<const gaz::GazetteerEntry*> narrowed =
                    narrow_candidates(m.candidates, *frag);
                if (!narrowed.empty()) {
                    merged.candidates = std::move(narrowed);
                } else {
                    // no candidate agrees with the abbreviation; keep the
                    // surface form as an unverified fine level
                    gaz::LocationHierarchy surface =
                        m.candidates.empty() ? m.unverified : gaz::LocationHierarchy{};
                    if (surface.city.empty()) surface.city = m.name;
                    merged.candidates.clear();
                    merged.city_verified = false;
                    merged.unverified = merge_constraint(surface, *frag);
                    if (merged.unverified.continent.empty() &&
                        !merged.unverified.country.empty()) {
                        if (const gaz::CountryInfo* ci =
                                gaz::country_by_name(merged.unverified.country)) {
                            merged.unverified.continent = std::string(ci->continent);
                        }
                    }
                }
                if (!exists(merged)) {
                    matches.push_back(std::move(merged));
                    changed = true;
                }
            }

            // adjacent coarser gazetteer match, fine -> coarse order only
            for (std::size_t oi = 0; oi < count; ++oi) {
                const Match& o = matches[oi];
                if (o.begin != next || o.candidates.empty() || m.candidates.empty())
                    continue;
                // pick the coarser side's best consistent pairing
                std::vector<const gaz::GazetteerEntry*> narrowed;
                gaz::LocationHierarchy coarse_constraint;
                for (const gaz::GazetteerEntry* oc : o.candidates) {
                    if (oc->level() >= m.candidates.front()->level()) continue;
                    std::vector<const gaz::GazetteerEntry*> n2 =
                        narrow_candidates(m.candidates, oc->hierarchy);
                    if (!n2.empty()) {
                        narrowed = std::move(n2);
                        coarse_constraint = oc->hierarchy;
                        break;  // candidates are population-ordered
                    }
                }
                if (narrowed.empty()) continue;
                Match merged = m;
                merged.end = o.end;
                merged.candidates = std::move(narrowed);
                merged.constraint = merge_constraint(m.constraint, coarse_constraint);
                if (!exists(merged)) {
                    matches.push_back(std::move(merged));
                    changed = true;
                }
            }
        }
    }
    return matches;
}

std::vector<LocationMention> prune_and_emit(std::vector<Match> matches,
                                            std::span<const std::string> tokens) {
    // drop any match strictly contained in another surviving match
    std::vector<bool> dead(matches.size(), false);
    for (std::size_t i = 0; i < matches.size(); ++i) {
        for (std::size_t j = 0; j < matches.size(); ++j) {
            if (i == j || dead[j]) continue;
            if (span_contains(matches[j].begin, matches[j].end, matches[i].begin,
                              matches[i].end)) {
                dead[i] = true;
                break;
            }
        }
    }
    std::vector<LocationMention> out;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        if (!dead[i]) out.push_back(to_mention(matches[i], tokens));
    }
    std::sort(out.begin(), out.end(), [](const LocationMention& a,
                                         const LocationMention& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.end != b.end) return a.end > b.end;
        return a.hierarchy < b.hierarchy;
    });
    // identical spans with identical hierarchies can arise from merge paths
    out.erase(std::unique(out.begin(), out.end(),
                          [](const LocationMention& a, const LocationMention& b) {
                              return a.begin == b.begin && a.end == b.end &&
                                     a.hierarchy == b.hierarchy;
                          }),
              out.end());
    return out;
}

}  // namespace

std::vector<LocationMention> extract_mentions(std::span<const std::string> tokens,
                                              const gaz::Gazetteer& g,
                                              const gaz::AbbreviationTable& a) {
    return prune_and_emit(gather_matches(tokens, g, a), tokens);
}

std::vector<LocationMention> pattern_rule(std::span<const std::string> tokens,
                                          const gaz::Gazetteer& g,
                                          const gaz::AbbreviationTable& a) {
    const std::vector<LocationMention> covered = extract_mentions(tokens, g, a);
    auto overlaps_covered = [&covered](std::size_t b, std::size_t e) {
        for (const LocationMention& m : covered) {
            if (b < m.end && m.begin < e) return true;
        }
        return false;
    };

    // comma-separated runs of 1..3 tokens
    struct Run {
        std::size_t begin, end;
    };
    std::vector<Run> runs;
    std::size_t pos = 0;
    while (pos < tokens.size()) {
        if (tokens[pos] == ",") {
            ++pos;
            continue;
        }
        std::size_t start = pos;
        while (pos < tokens.size() && tokens[pos] != ",") ++pos;
        runs.push_back({start, pos});
    }

    // resolve a run as a coarse (state or above) component
    auto resolve_coarse = [&](const Run& r) -> std::optional<gaz::LocationHierarchy> {
        if (r.end - r.begin > 3) return std::nullopt;
        std::string name = join(std::vector<std::string>(
                                    tokens.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(r.end)),
                                ' ');
        if (r.end - r.begin == 1) {
            if (const gaz::LocationHierarchy* frag = a.find(name)) {
                gaz::LocationHierarchy h = *frag;
                if (h.continent.empty() && !h.country.empty()) {
                    if (const gaz::CountryInfo* ci = gaz::country_by_name(h.country))
                        h.continent = std::string(ci->continent);
                }
                if (h.resolution() <= gaz::Resolution::state) return h;
            }
        }
        for (const gaz::GazetteerEntry* e : g.lookup_name(name)) {
            if (e->level() <= gaz::Resolution::state) return e->hierarchy;
        }
        return std::nullopt;
    };

    std::vector<LocationMention> out;
    std::vector<std::pair<std::size_t, std::size_t>> taken;
    auto overlaps_taken = [&taken](std::size_t b, std::size_t e) {
        for (auto [tb, te] : taken) {
            if (b < te && tb < e) return true;
        }
        return false;
    };

    // longest windows first: X , Y , Z then X , Y
    for (int parts = 3; parts >= 2; --parts) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(parts) <= runs.size(); ++i) {
            const Run& rx = runs[i];
            const Run& last = runs[i + static_cast<std::size_t>(parts) - 1];
            if (last.end - last.begin > 3 || rx.end - rx.begin == 0) continue;

            // adjacent runs must be separated by exactly one comma
            bool contiguous = true;
            for (int k = 0; k + 1 < parts; ++k) {
                const Run& cur = runs[i + static_cast<std::size_t>(k)];
                const Run& nxt = runs[i + static_cast<std::size_t>(k) + 1];
                if (nxt.begin != cur.end + 1) contiguous = false;
            }
            if (!contiguous) continue;

            std::optional<gaz::LocationHierarchy> coarse = resolve_coarse(last);
            if (!coarse) continue;

            gaz::LocationHierarchy constraint = *coarse;
            gaz::LocationHierarchy hierarchy = *coarse;
            if (parts == 3) {
                const Run& mid = runs[i + 1];
                if (mid.end - mid.begin > 3) continue;
                std::optional<gaz::LocationHierarchy> midres = resolve_coarse(mid);
                if (midres) {
                    if (!midres->consistent_with(constraint)) continue;
                    constraint = merge_constraint(*midres, constraint);
                    hierarchy = constraint;
                } else if (hierarchy.state.empty()) {
                    hierarchy.state = join(
                        std::vector<std::string>(
                            tokens.begin() + static_cast<std::ptrdiff_t>(mid.begin),
                            tokens.begin() + static_cast<std::ptrdiff_t>(mid.end)),
                        ' ');
                }
            }

            // X: trailing 1-3 tokens of the first run, sans function words
            std::size_t xb = rx.end > rx.begin + 3 ? rx.end - 3 : rx.begin;
            while (xb < rx.end && junk_prefix_words().contains(tokens[xb])) ++xb;
            if (xb == rx.end) continue;
            const std::size_t span_begin = xb;
            const std::size_t span_end = last.end;
            if (overlaps_covered(span_begin, span_end) ||
                overlaps_taken(span_begin, span_end))
                continue;

            std::string city = join(
                std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(xb),
                                         tokens.begin() + static_cast<std::ptrdiff_t>(rx.end)),
                ' ');
            hierarchy.city = city;

            LocationMention m;
            m.begin = span_begin;
            m.end = span_end;
            m.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(span_begin),
                            tokens.begin() + static_cast<std::ptrdiff_t>(span_end));
            m.hierarchy = hierarchy;
            m.source_rule = SourceRule::pattern;
            m.name = city;
            m.constraint = constraint;
            m.city_verified = false;
            taken.emplace_back(span_begin, span_end);
            out.push_back(std::move(m));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const LocationMention& a, const LocationMention& b) {
                  return a.begin < b.begin;
              });
    return out;
}

std::vector<LocationMention> extract_all(std::span<const std::string> tokens,
                                         const gaz::Gazetteer& g,
                                         const gaz::AbbreviationTable& a) {
    std::vector<LocationMention> out = extract_mentions(tokens, g, a);
    std::vector<LocationMention> extra = pattern_rule(tokens, g, a);
    out.insert(out.end(), extra.begin(), extra.end());
    std::sort(out.begin(), out.end(),
              [](const LocationMention& a, const LocationMention& b) {
                  if (a.begin != b.begin) return a.begin < b.begin;
                  return a.end > b.end;
              });
    return out;
}

bool filter_comment(const Comment& c) {
    if (c.is_reply) return false;
    static const std::set<std::string> kExcluded = {"move", "moving", "born",
                                                    "raised"};
    for (const std::string& tok : tokenize(c.body)) {
        if (kExcluded.contains(tok)) return false;
    }
    return true;
}

}  // namespace geoloc::extract
