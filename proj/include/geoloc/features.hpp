// Per-user feature vectors (word counts, subreddit counts, UTC posting
// histogram) and non-localness feature selection over a rolled-up
// State/Country/Continent partition.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geoloc/extract.hpp"
#include "geoloc/label.hpp"

namespace geoloc::feat {

struct UserFeatures {
    std::string user;
    std::map<std::string, double> w;  // token -> count
    std::map<std::string, double> s;  // subreddit -> count
    std::array<std::int64_t, 24> tau{};

    std::int64_t tau_total() const;
    bool empty() const { return w.empty() && s.empty() && tau_total() == 0; }
};

// Counts one user's history into features. Comments used for labeling
// are excluded, anything past the cutoff is dropped, and at most
// max_comments (earliest first) are consumed.
UserFeatures featurize_user(std::span<const extract::Comment> comments,
                            std::size_t max_comments, std::int64_t cutoff_utc,
                            const std::set<std::string>& exclude_ids);

// "State, Country, Continent" cells; cells under min_users roll up
// state -> country -> continent until the threshold holds.
class LocationPartition {
public:
    std::size_t n_cells() const { return cell_ids_.size(); }
    const std::vector<std::string>& cell_ids() const { return cell_ids_; }

    // final cell for a hierarchy (walks the rollup chain; hierarchies
    // never seen in training land in the nearest coarser cell)
    std::optional<std::size_t> cell_of(const gaz::LocationHierarchy& h) const;

    friend LocationPartition build_partition(
        std::span<const label::UserLabel> labels, std::size_t min_users);

    std::size_t min_users() const { return min_users_; }

private:
    std::vector<std::string> cell_ids_;                 // sorted
    std::map<std::string, std::size_t> final_cells_;    // id -> index
    std::map<std::string, std::string> rollup_;         // raw key -> final id
    std::size_t min_users_ = 0;
};

LocationPartition build_partition(std::span<const label::UserLabel> labels,
                                  std::size_t min_users = 50);

// per-feature counts over partition cells
using CellCounts = std::map<std::string, std::vector<double>>;

CellCounts word_cell_counts(std::span<const UserFeatures> features,
                            std::span<const std::size_t> user_cells,
                            std::size_t n_cells);
CellCounts subreddit_cell_counts(std::span<const UserFeatures> features,
                                 std::span<const std::size_t> user_cells,
                                 std::size_t n_cells);

// KL(p||q) + KL(q||p) after epsilon smoothing and renormalization over
// all cells; always finite. Throws on dimension mismatch.
double symmetric_kl(std::span<const double> p, std::span<const double> q,
                    double epsilon = 1e-9);

// Eq-style non-localness: the count-weighted mean symmetric KL between
// a feature's cell distribution and each stopword-like feature's.
// Throws when S is empty or has zero total count.
double non_localness(std::span<const double> feature_counts,
                     const std::vector<std::pair<std::string, std::vector<double>>>& stopword_counts,
                     double epsilon = 1e-9);

struct NLRanking {
    std::vector<std::pair<std::string, double>> ranked;  // score descending
    std::vector<std::string> stopwords_used;
};

struct SelectionConfig {
    std::size_t k_words = 0;       // 0 = keep all
    std::size_t k_subreddits = 0;  // 0 = keep all
    std::vector<std::string> stopwords;       // word-side S (130 expected)
    std::vector<std::string> stop_subreddits; // empty = top 30 by activity
    std::size_t top_subreddits = 30;
    std::size_t min_cell_users = 50;
    double epsilon = 1e-9;
    int threads = 0;
};

struct SelectionResult {
    std::vector<std::string> words;
    std::vector<std::string> subreddits;
    NLRanking word_ranking;
    NLRanking subreddit_ranking;
};

// Non-localness applied to words and subreddits separately; top-k of
// each by score. k larger than the vocabulary keeps everything.
SelectionResult select_features(std::span<const UserFeatures> features,
                                std::span<const label::UserLabel> labels,
                                const SelectionConfig& config);

}  // namespace geoloc::feat
