#include "geoloc/label.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "geoloc/parallel.hpp"
#include "geoloc/strings.hpp"

namespace geoloc::label {

namespace {

bool in_scope(const gaz::LocationHierarchy& h, const std::string& scope) {
    return h.country == scope || h.state == scope || h.continent == scope;
}

std::vector<const gaz::GazetteerEntry*> apply_bias(
    const std::vector<const gaz::GazetteerEntry*>& cands, const std::string* scope) {
    if (scope == nullptr || scope->empty()) return cands;
    std::vector<const gaz::GazetteerEntry*> filtered;
    for (const gaz::GazetteerEntry* c : cands) {
        if (in_scope(c->hierarchy, *scope)) filtered.push_back(c);
    }
    // a bias only applies when at least one candidate survives it
    return filtered.empty() ? cands : filtered;
}

}  // namespace

const std::string* RegionBias::scope_for(std::string_view subreddit) const {
    auto it = scopes.find(to_lower(subreddit));
    return it == scopes.end() ? nullptr : &it->second;
}

RegionBias load_region_bias(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open region-bias file: " + path);
    RegionBias bias;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto comma = t.find(',');
        if (comma == std::string::npos) continue;
        std::string sub = to_lower(trim(t.substr(0, comma)));
        std::string scope = to_lower(trim(t.substr(comma + 1)));
        if (!sub.empty() && !scope.empty()) bias.scopes[sub] = scope;
    }
    return bias;
}

ResolvedLocation resolve(const extract::LocationMention& m,
                         const std::string* bias_scope, const gaz::Gazetteer& g) {
    // finest component first
    std::vector<const gaz::GazetteerEntry*> ranked =
        g.lookup_constrained(m.name, m.constraint);
    std::vector<const gaz::GazetteerEntry*> biased = apply_bias(ranked, bias_scope);
    if (!biased.empty()) {
        const gaz::GazetteerEntry* best = biased.front();
        int rank = 1;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            if (ranked[i] == best) {
                rank = static_cast<int>(i) + 1;
                break;
            }
        }
        return {best->hierarchy, best->coords, rank};
    }

    // the surface name did not resolve; back off to the textually
    // evidenced coarse levels
    gaz::LocationHierarchy coarse = m.constraint;
    coarse.city.clear();
    coarse.county.clear();
    if (!coarse.state.empty()) {
        gaz::LocationHierarchy probe = coarse;
        if (const gaz::GazetteerEntry* node = g.node_for(probe)) {
            return {node->hierarchy, node->coords, 1};
        }
        coarse.state.clear();
    }
    if (!coarse.country.empty()) {
        if (const gaz::GazetteerEntry* node = g.node_for(coarse)) {
            return {node->hierarchy, node->coords, 1};
        }
    }
    throw std::runtime_error("unresolvable mention: " + m.name);
}

ResolvedLocation GazetteerGeocoder::resolve(const extract::LocationMention& mention,
                                            const std::string* bias_scope) const {
    return label::resolve(mention, bias_scope, g_);
}

std::optional<UserLabel> aggregate_user(std::span<const Extraction> extractions,
                                        const gaz::Gazetteer* g) {
    if (extractions.empty()) throw std::invalid_argument("no extractions for user");

    gaz::LocationHierarchy shared = extractions.front().resolved.hierarchy;
    for (const Extraction& e : extractions) {
        shared = shared.shared_prefix(e.resolved.hierarchy);
    }
    if (shared.resolution() == gaz::Resolution::none) return std::nullopt;

    UserLabel out;
    out.user = extractions.front().comment.user;
    out.hierarchy = shared;
    out.resolution = shared.resolution();
    for (const Extraction& e : extractions) {
        out.label_utc = std::max(out.label_utc, e.comment.created_utc);
        out.evidence.push_back({e.comment.id, e.mention, e.resolved});
    }

    if (out.resolution == gaz::Resolution::city) {
        // all evidence agrees on the city; its coordinates are exact
        for (const Extraction& e : extractions) {
            if (e.resolved.hierarchy == shared) {
                out.coords = e.resolved.coords;
                break;
            }
        }
    } else if (g != nullptr) {
        if (const gaz::GazetteerEntry* node = g->node_for(shared)) {
            out.coords = node->coords;
        }
    }
    return out;
}

void assign_coordinates(std::vector<UserLabel>& labels) {
    std::vector<const UserLabel*> city_users;
    for (const UserLabel& l : labels) {
        if (l.resolution == gaz::Resolution::city) city_users.push_back(&l);
    }
    for (UserLabel& l : labels) {
        if (l.resolution == gaz::Resolution::city) continue;
        std::vector<geo::GeoPoint> members;
        for (const UserLabel* c : city_users) {
            if (l.hierarchy.is_prefix_of(c->hierarchy)) members.push_back(c->coords);
        }
        if (!members.empty()) {
            l.coords = geo::geodesic_median(members);
        }
        // no city members: the provisional gazetteer node point stands
    }
}

LabelResult label_corpus(std::span<const extract::Comment> comments,
                         const std::set<std::string>& seeds,
                         const gaz::Gazetteer& g, const gaz::AbbreviationTable& a,
                         const RegionBias& bias, int threads) {
    LabelResult result;
    LabelStats& stats = result.stats;
    stats.comments_total = comments.size();

    std::vector<const extract::Comment*> kept;
    for (const extract::Comment& c : comments) {
        if (!seeds.contains(c.submission_id)) continue;
        ++stats.comments_in_seeds;
        if (!extract::filter_comment(c)) continue;
        ++stats.comments_kept;
        kept.push_back(&c);
    }

    // extraction and resolution are independent per comment
    struct CommentResult {
        std::vector<Extraction> extractions;
        std::size_t mentions = 0;
        std::size_t unresolvable = 0;
    };
    std::vector<CommentResult> per_comment(kept.size());
    parallel_for(kept.size(), threads, [&](std::size_t i) {
        const extract::Comment& c = *kept[i];
        CommentResult& r = per_comment[i];
        const std::vector<std::string> tokens = extract::tokenize(c.body);
        const std::string* scope = bias.scope_for(c.subreddit);
        for (extract::LocationMention& m : extract::extract_all(tokens, g, a)) {
            ++r.mentions;
            try {
                ResolvedLocation res = resolve(m, scope, g);
                r.extractions.push_back({c, std::move(m), std::move(res)});
            } catch (const std::runtime_error&) {
                ++r.unresolvable;
            }
        }
    });

    std::map<std::string, std::vector<Extraction>> by_user;
    for (CommentResult& r : per_comment) {
        stats.mentions_found += r.mentions;
        stats.mentions_unresolvable += r.unresolvable;
        for (Extraction& e : r.extractions) {
            by_user[e.comment.user].push_back(std::move(e));
        }
    }

    std::set<std::string> seen_users;
    for (const extract::Comment* c : kept) seen_users.insert(c->user);
    stats.users_seen = seen_users.size();

    for (auto& [user, extractions] : by_user) {
        std::optional<UserLabel> label = aggregate_user(extractions, &g);
        if (!label) {
            ++stats.users_dropped_inconsistent;
            continue;
        }
        result.labels.push_back(std::move(*label));
    }
    stats.users_labeled = result.labels.size();
    stats.users_dropped_no_mentions = stats.users_seen - by_user.size();

    assign_coordinates(result.labels);
    return result;
}

}  // namespace geoloc::label
