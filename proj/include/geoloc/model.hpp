// Generative location estimation: per-feature mixture densities (DPMM by
// variational inference, GMM by EM), the temporal longitude-bin factor,
// and the candidate-set argmax scorer.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geoloc/features.hpp"
#include "geoloc/geo.hpp"
#include "geoloc/label.hpp"

namespace geoloc::model {

inline constexpr double kVarianceFloor = 1e-4;  // deg^2

enum class MixtureKind { dpmm, gmm };
enum class CovarianceKind { diagonal, spherical };

struct MixtureDensity {
    std::vector<double> weights;                // simplex within 1e-9
    std::vector<std::array<double, 2>> means;   // (lat, lon) degrees
    std::vector<std::array<double, 2>> vars;    // diagonal, >= floor
    MixtureKind kind = MixtureKind::dpmm;
    CovarianceKind covariance = CovarianceKind::diagonal;

    std::size_t components() const { return weights.size(); }
};

struct FitOptions {
    MixtureKind kind = MixtureKind::dpmm;
    int max_components = 5;
    CovarianceKind covariance = CovarianceKind::diagonal;
    std::uint64_t seed = 0;
    int max_iterations = 200;
    double tol = 1e-4;
    double alpha = 1.0;  // DP concentration, dpmm only
};

struct FitTrace {
    std::vector<double> objective;  // ELBO (dpmm) / log-likelihood (gmm)
};

// Truncated stick-breaking variational inference, k-means++ init.
MixtureDensity fit_dpmm(std::span<const geo::GeoPoint> points, const FitOptions& opts,
                        FitTrace* trace = nullptr);

// EM with the same initialization and stopping conventions.
MixtureDensity fit_gmm(std::span<const geo::GeoPoint> points, const FitOptions& opts,
                       FitTrace* trace = nullptr);

// dispatch on opts.kind
MixtureDensity fit_mixture(std::span<const geo::GeoPoint> points,
                           const FitOptions& opts, FitTrace* trace = nullptr);

// log of the mixture density at c
double density_at(const MixtureDensity& m, const geo::GeoPoint& c);

struct FeatureDensities {
    std::map<std::string, MixtureDensity> densities;  // namespaced feature -> density
    std::map<std::string, double> prior;              // P(u), sums to 1 over vocab
    std::set<std::string> fallback;                   // vocab without enough support
    std::vector<std::string> vocab_words;
    std::vector<std::string> vocab_subreddits;
};

inline std::string word_key(const std::string& token) { return "w:" + token; }
inline std::string subreddit_key(const std::string& sub) { return "s:" + sub; }

// One density per vocabulary feature over the coordinates of the users
// exhibiting it (each user counted once). Features with fewer than
// min_support users are marked fallback and excluded from scoring.
FeatureDensities fit_feature_densities(std::span<const feat::UserFeatures> features,
                                       std::span<const label::UserLabel> labels,
                                       std::span<const std::string> vocab_words,
                                       std::span<const std::string> vocab_subreddits,
                                       const FitOptions& opts, int min_support = 3,
                                       int threads = 0);

struct TemporalModel {
    std::vector<double> bin_edges;                // |L|-1 longitudes, increasing
    std::vector<std::vector<double>> coefficients;  // |L| x 25 (24 freqs + bias)
    double l2_strength = 0.0;

    std::size_t n_bins() const {
        return coefficients.empty() ? 1 : coefficients.size();
    }
    // predicted P(l | tau), sums to 1
    std::vector<double> predict_bins(std::span<const std::int64_t, 24> tau) const;
    int bin_of(double lon) const;  // count of edges strictly below lon
};

// posting histogram normalized to frequencies; zero activity -> uniform
std::array<double, 24> normalize_tau(std::span<const std::int64_t, 24> tau);

struct TemporalFitOptions {
    std::vector<int> n_bins_grid = {2, 4, 6, 8};
    std::vector<double> l2_grid = {0.01, 0.1, 1.0};
    int cv_folds = 5;
    std::uint64_t seed = 0;
    int gd_iterations = 300;
    double gd_learning_rate = 2.0;
    int threads = 0;
};

// Percentile longitude bins + L2 multinomial logistic regression on the
// normalized posting histogram. The bin count is chosen by k-fold CV on
// a temporal-only inference error; L2 by CV classification accuracy
// within each bin count.
TemporalModel fit_temporal(std::span<const feat::UserFeatures> features,
                           std::span<const label::UserLabel> labels,
                           const TemporalFitOptions& opts);

struct Candidate {
    geo::GeoPoint point;
    int bin = 0;
    double weight = 0.0;  // supporting-user count
};

struct CandidateSet {
    std::vector<Candidate> candidates;

    std::size_t size() const { return candidates.size(); }
    void assign_bins(const TemporalModel& tm);
};

// Training coordinates deduplicated on a 0.1 degree grid.
CandidateSet build_candidates(std::span<const label::UserLabel> labels);

// log P(c | tau) per candidate (candidates sharing a bin share a value)
std::vector<double> temporal_factor(const TemporalModel& tm,
                                    std::span<const std::int64_t, 24> tau,
                                    const CandidateSet& candidates);

struct Modalities {
    bool words = true;
    bool subreddits = true;
    bool temporal = true;
};

struct GeoModel {
    FeatureDensities densities;
    std::optional<TemporalModel> temporal;
    CandidateSet candidates;
    geo::GeoPoint fallback;  // MAP of the training density
    Modalities modalities;
    std::uint64_t seed = 0;
};

struct Prediction {
    geo::GeoPoint point;
    double log_score = 0.0;
    bool used_fallback = false;
    int candidate_index = -1;
};

// Candidate-set argmax of the temporal-weighted feature-density sum.
// Users with no usable vocabulary overlap get the MAP fallback.
Prediction predict(const GeoModel& model, const feat::UserFeatures& user,
                   bool use_temporal = true);

std::vector<Prediction> predict_many(const GeoModel& model,
                                     std::span<const feat::UserFeatures> users,
                                     bool use_temporal = true, int threads = 0);

// MAP baseline: densest candidate point of a mixture over all training
// coordinates.
geo::GeoPoint baseline_map(std::span<const label::UserLabel> labels,
                           const CandidateSet& candidates, const FitOptions& opts);
geo::GeoPoint baseline_map(std::span<const label::UserLabel> labels,
                           std::uint64_t seed = 0);

struct PreselectedVocab {
    std::vector<std::string> words;
    std::vector<std::string> subreddits;
};

struct TrainConfig {
    Modalities modalities;
    std::size_t k_words = 0;       // 0 = keep all
    std::size_t k_subreddits = 0;
    std::vector<std::string> stopwords;
    std::vector<std::string> stop_subreddits;
    std::size_t min_cell_users = 50;
    int min_feature_support = 3;
    MixtureKind density_kind = MixtureKind::dpmm;
    FitOptions density_fit;
    TemporalFitOptions temporal_fit;
    std::uint64_t seed = 0;
    int threads = 0;

    // skips in-training feature selection (vocabulary file workflow)
    std::optional<PreselectedVocab> preselected;
};

GeoModel train_geo_model(std::span<const feat::UserFeatures> features,
                         std::span<const label::UserLabel> labels,
                         const TrainConfig& config);

}  // namespace geoloc::model
