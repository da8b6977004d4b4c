#include "geoloc/features.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "geoloc/parallel.hpp"
#include "geoloc/strings.hpp"

namespace geoloc::feat {

namespace {

std::string state_key(const gaz::LocationHierarchy& h) {
    return "state=" + h.state + "|country=" + h.country + "|continent=" + h.continent;
}
std::string country_key(const gaz::LocationHierarchy& h) {
    return "country=" + h.country + "|continent=" + h.continent;
}
std::string continent_key(const gaz::LocationHierarchy& h) {
    return "continent=" + h.continent;
}

std::string natural_key(const gaz::LocationHierarchy& h) {
    if (!h.state.empty()) return state_key(h);
    if (!h.country.empty()) return country_key(h);
    return continent_key(h);
}

// one rollup step: state cell -> country cell -> continent cell
std::string parent_key(const std::string& key, const gaz::LocationHierarchy& h) {
    if (key.rfind("state=", 0) == 0) return country_key(h);
    if (key.rfind("country=", 0) == 0) return continent_key(h);
    return key;
}

std::vector<double> smoothed(std::span<const double> counts, double epsilon) {
    double total = 0.0;
    for (double c : counts) total += c + epsilon;
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = (counts[i] + epsilon) / total;
    }
    return out;
}

}  // namespace

std::int64_t UserFeatures::tau_total() const {
    std::int64_t total = 0;
    for (std::int64_t v : tau) total += v;
    return total;
}

UserFeatures featurize_user(std::span<const extract::Comment> comments,
                            std::size_t max_comments, std::int64_t cutoff_utc,
                            const std::set<std::string>& exclude_ids) {
    std::vector<const extract::Comment*> usable;
    for (const extract::Comment& c : comments) {
        if (exclude_ids.contains(c.id)) continue;
        if (c.created_utc > cutoff_utc) continue;
        usable.push_back(&c);
    }
    std::sort(usable.begin(), usable.end(),
              [](const extract::Comment* a, const extract::Comment* b) {
                  if (a->created_utc != b->created_utc)
                      return a->created_utc < b->created_utc;
                  return a->id < b->id;
              });
    if (usable.size() > max_comments) usable.resize(max_comments);

    UserFeatures out;
    if (!comments.empty()) out.user = comments.front().user;
    for (const extract::Comment* c : usable) {
        for (const std::string& tok : extract::tokenize(c->body, /*keep_commas=*/false)) {
            out.w[tok] += 1.0;
        }
        if (!c->subreddit.empty()) out.s[to_lower(c->subreddit)] += 1.0;
        out.tau[static_cast<std::size_t>((c->created_utc / 3600) % 24)] += 1;
    }
    return out;
}

std::optional<std::size_t> LocationPartition::cell_of(
    const gaz::LocationHierarchy& h) const {
    // follow the training-time rollup first, then coarser fallbacks
    for (std::string key : {natural_key(h), country_key(h), continent_key(h)}) {
        auto rolled = rollup_.find(key);
        if (rolled != rollup_.end()) {
            auto it = final_cells_.find(rolled->second);
            if (it != final_cells_.end()) return it->second;
        }
        auto direct = final_cells_.find(key);
        if (direct != final_cells_.end()) return direct->second;
    }
    return std::nullopt;
}

LocationPartition build_partition(std::span<const label::UserLabel> labels,
                                  std::size_t min_users) {
    // raw key -> (count, representative hierarchy for parent lookup)
    std::map<std::string, std::pair<std::size_t, gaz::LocationHierarchy>> cells;
    for (const label::UserLabel& l : labels) {
        std::string key = natural_key(l.hierarchy);
        auto& slot = cells[key];
        ++slot.first;
        slot.second = l.hierarchy;
    }

    std::map<std::string, std::string> rollup;  // raw -> final
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = cells.begin(); it != cells.end();) {
            const std::string& key = it->first;
            const bool top_level = key.rfind("continent=", 0) == 0;
            if (top_level || it->second.first >= min_users) {
                ++it;
                continue;
            }
            std::string parent = parent_key(key, it->second.second);
            auto& dst = cells[parent];
            dst.first += it->second.first;
            if (dst.second.continent.empty()) dst.second = it->second.second;
            rollup[key] = parent;
            it = cells.erase(it);
            changed = true;
        }
    }

    // path-compress rollups (state may have hopped to continent via country)
    for (auto& [raw, fin] : rollup) {
        std::string cur = fin;
        while (rollup.contains(cur)) cur = rollup.at(cur);
        fin = cur;
    }

    LocationPartition p;
    p.min_users_ = min_users;
    p.rollup_ = std::move(rollup);
    for (const auto& [key, cell] : cells) p.cell_ids_.push_back(key);
    std::sort(p.cell_ids_.begin(), p.cell_ids_.end());
    for (std::size_t i = 0; i < p.cell_ids_.size(); ++i) {
        p.final_cells_[p.cell_ids_[i]] = i;
    }
    return p;
}

CellCounts word_cell_counts(std::span<const UserFeatures> features,
                            std::span<const std::size_t> user_cells,
                            std::size_t n_cells) {
    CellCounts counts;
    for (std::size_t u = 0; u < features.size(); ++u) {
        for (const auto& [token, c] : features[u].w) {
            auto& vec = counts[token];
            if (vec.empty()) vec.assign(n_cells, 0.0);
            vec[user_cells[u]] += c;
        }
    }
    return counts;
}

CellCounts subreddit_cell_counts(std::span<const UserFeatures> features,
                                 std::span<const std::size_t> user_cells,
                                 std::size_t n_cells) {
    CellCounts counts;
    for (std::size_t u = 0; u < features.size(); ++u) {
        for (const auto& [sub, c] : features[u].s) {
            auto& vec = counts[sub];
            if (vec.empty()) vec.assign(n_cells, 0.0);
            vec[user_cells[u]] += c;
        }
    }
    return counts;
}

double symmetric_kl(std::span<const double> p, std::span<const double> q,
                    double epsilon) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("symmetric_kl: dimension mismatch");
    }
    const std::vector<double> ps = smoothed(p, epsilon);
    const std::vector<double> qs = smoothed(q, epsilon);
    double total = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        total += (ps[i] - qs[i]) * std::log(ps[i] / qs[i]);
    }
    return total;
}

double non_localness(
    std::span<const double> feature_counts,
    const std::vector<std::pair<std::string, std::vector<double>>>& stopword_counts,
    double epsilon) {
    if (stopword_counts.empty()) {
        throw std::invalid_argument("non_localness: empty stopword set");
    }
    double weight_total = 0.0;
    for (const auto& [name, counts] : stopword_counts) {
        for (double c : counts) weight_total += c;
    }
    if (weight_total <= 0.0) {
        throw std::invalid_argument("non_localness: stopword set has no occurrences");
    }
    double score = 0.0;
    for (const auto& [name, counts] : stopword_counts) {
        double count_s = 0.0;
        for (double c : counts) count_s += c;
        if (count_s <= 0.0) continue;
        score += symmetric_kl(feature_counts, counts, epsilon) * (count_s / weight_total);
    }
    return score;
}

namespace {

NLRanking rank_features(const CellCounts& counts,
                        const std::vector<std::string>& stop_names,
                        double epsilon, int threads) {
    std::vector<std::pair<std::string, std::vector<double>>> stop_counts;
    for (const std::string& s : stop_names) {
        auto it = counts.find(s);
        if (it != counts.end()) stop_counts.emplace_back(s, it->second);
    }
    if (stop_counts.empty()) {
        throw std::invalid_argument("non_localness: no stopword-like feature occurs");
    }

    std::vector<const std::string*> names;
    std::vector<const std::vector<double>*> vecs;
    names.reserve(counts.size());
    for (const auto& [name, vec] : counts) {
        names.push_back(&name);
        vecs.push_back(&vec);
    }
    std::vector<double> scores(names.size(), 0.0);
    parallel_for(names.size(), threads, [&](std::size_t i) {
        scores[i] = non_localness(*vecs[i], stop_counts, epsilon);
    });

    std::vector<double> totals(names.size(), 0.0);
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (double c : *vecs[i]) totals[i] += c;
    }
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (totals[a] != totals[b]) return totals[a] > totals[b];
        return *names[a] < *names[b];
    });

    NLRanking ranking;
    ranking.stopwords_used = stop_names;
    ranking.ranked.reserve(order.size());
    for (std::size_t i : order) ranking.ranked.emplace_back(*names[i], scores[i]);
    return ranking;
}

std::vector<std::string> take_top(const NLRanking& ranking, std::size_t k) {
    std::vector<std::string> out;
    if (k == 0 || k >= ranking.ranked.size()) {
        if (k != 0 && k > ranking.ranked.size()) {
            std::cerr << "select_features: k=" << k << " exceeds feature count "
                      << ranking.ranked.size() << ", keeping all\n";
        }
        for (const auto& [name, score] : ranking.ranked) out.push_back(name);
        return out;
    }
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranking.ranked[i].first);
    return out;
}

}  // namespace

SelectionResult select_features(std::span<const UserFeatures> features,
                                std::span<const label::UserLabel> labels,
                                const SelectionConfig& config) {
    if (features.size() != labels.size()) {
        throw std::invalid_argument("select_features: features/labels length mismatch");
    }
    LocationPartition partition = build_partition(labels, config.min_cell_users);
    std::vector<std::size_t> user_cells(features.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::optional<std::size_t> cell = partition.cell_of(labels[i].hierarchy);
        if (!cell) {
            throw std::runtime_error("select_features: unmapped training user " +
                                     labels[i].user);
        }
        user_cells[i] = *cell;
    }

    const CellCounts w_counts = word_cell_counts(features, user_cells, partition.n_cells());
    const CellCounts s_counts =
        subreddit_cell_counts(features, user_cells, partition.n_cells());

    SelectionResult out;
    if (!w_counts.empty()) {
        out.word_ranking =
            rank_features(w_counts, config.stopwords, config.epsilon, config.threads);
        out.words = take_top(out.word_ranking, config.k_words);
    }

    if (!s_counts.empty()) {
        std::vector<std::string> stop_subs = config.stop_subreddits;
        if (stop_subs.empty()) {
            // most active subreddits stand in for stopwords
            std::vector<std::pair<double, std::string>> by_activity;
            for (const auto& [sub, vec] : s_counts) {
                double total = 0.0;
                for (double c : vec) total += c;
                by_activity.emplace_back(total, sub);
            }
            std::sort(by_activity.begin(), by_activity.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
            for (std::size_t i = 0; i < by_activity.size() && i < config.top_subreddits;
                 ++i) {
                stop_subs.push_back(by_activity[i].second);
            }
        }
        out.subreddit_ranking =
            rank_features(s_counts, stop_subs, config.epsilon, config.threads);
        out.subreddits = take_top(out.subreddit_ranking, config.k_subreddits);
    }
    return out;
}

}  // namespace geoloc::feat
