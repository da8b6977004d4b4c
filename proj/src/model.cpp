#include "geoloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geoloc/mathutil.hpp"
#include "geoloc/parallel.hpp"
#include "geoloc/rng.hpp"

namespace geoloc::model {

namespace {

// users supporting a feature, one coordinate per user
std::vector<geo::GeoPoint> support_points(
    std::span<const feat::UserFeatures> features,
    std::span<const label::UserLabel> labels,
    const std::map<std::string, double> feat::UserFeatures::*field,
    const std::string& name) {
    std::vector<geo::GeoPoint> points;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& counts = features[i].*field;
        auto it = counts.find(name);
        if (it != counts.end() && it->second > 0.0) {
            points.push_back(labels[i].coords);
        }
    }
    return points;
}

}  // namespace

FeatureDensities fit_feature_densities(std::span<const feat::UserFeatures> features,
                                       std::span<const label::UserLabel> labels,
                                       std::span<const std::string> vocab_words,
                                       std::span<const std::string> vocab_subreddits,
                                       const FitOptions& opts, int min_support,
                                       int threads) {
    if (vocab_words.empty() && vocab_subreddits.empty()) {
        throw std::invalid_argument("fit_feature_densities: empty vocabulary");
    }
    if (features.size() != labels.size()) {
        throw std::invalid_argument("fit_feature_densities: features/labels mismatch");
    }

    FeatureDensities out;
    out.vocab_words.assign(vocab_words.begin(), vocab_words.end());
    out.vocab_subreddits.assign(vocab_subreddits.begin(), vocab_subreddits.end());

    struct Job {
        std::string key;
        std::string raw;
        bool is_word;
    };
    std::vector<Job> jobs;
    jobs.reserve(vocab_words.size() + vocab_subreddits.size());
    for (const std::string& w : vocab_words) jobs.push_back({word_key(w), w, true});
    for (const std::string& s : vocab_subreddits) {
        jobs.push_back({subreddit_key(s), s, false});
    }

    // P(u): relative corpus frequency over the selected vocabulary
    double total_count = 0.0;
    std::map<std::string, double> counts;
    for (const Job& j : jobs) {
        double c = 0.0;
        for (const feat::UserFeatures& f : features) {
            const auto& m = j.is_word ? f.w : f.s;
            auto it = m.find(j.raw);
            if (it != m.end()) c += it->second;
        }
        counts[j.key] = c;
        total_count += c;
    }
    if (total_count <= 0.0) total_count = 1.0;
    for (const Job& j : jobs) out.prior[j.key] = counts[j.key] / total_count;

    std::vector<std::optional<MixtureDensity>> fitted(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        std::vector<geo::GeoPoint> points = support_points(
            features, labels, j.is_word ? &feat::UserFeatures::w : &feat::UserFeatures::s,
            j.raw);
        if (points.size() < static_cast<std::size_t>(min_support)) return;
        FitOptions feature_opts = opts;
        feature_opts.seed = derive_seed(opts.seed, j.key);
        fitted[i] = fit_mixture(points, feature_opts);
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (fitted[i]) {
            out.densities.emplace(jobs[i].key, std::move(*fitted[i]));
        } else {
            out.fallback.insert(jobs[i].key);
        }
    }
    return out;
}

std::array<double, 24> normalize_tau(std::span<const std::int64_t, 24> tau) {
    std::array<double, 24> out{};
    double total = 0.0;
    for (std::int64_t v : tau) total += static_cast<double>(v);
    if (total <= 0.0) {
        out.fill(1.0 / 24.0);
        return out;
    }
    for (std::size_t i = 0; i < 24; ++i) out[i] = static_cast<double>(tau[i]) / total;
    return out;
}

std::vector<double> TemporalModel::predict_bins(
    std::span<const std::int64_t, 24> tau) const {
    if (coefficients.empty()) return {1.0};
    const std::array<double, 24> x = normalize_tau(tau);
    std::vector<double> logits(coefficients.size(), 0.0);
    for (std::size_t b = 0; b < coefficients.size(); ++b) {
        const std::vector<double>& w = coefficients[b];
        double z = w[24];  // bias
        for (std::size_t i = 0; i < 24; ++i) z += w[i] * x[i];
        logits[b] = z;
    }
    const double lse = log_sum_exp(logits);
    std::vector<double> p(logits.size());
    for (std::size_t b = 0; b < logits.size(); ++b) p[b] = std::exp(logits[b] - lse);
    return p;
}

int TemporalModel::bin_of(double lon) const {
    int bin = 0;
    for (double e : bin_edges) {
        if (e < lon) ++bin;
    }
    return bin;
}

namespace {

std::vector<double> percentile_edges(std::vector<double> lons, int n_bins) {
    std::sort(lons.begin(), lons.end());
    std::vector<double> edges;
    const std::size_t n = lons.size();
    for (int k = 1; k < n_bins; ++k) {
        const std::size_t idx = std::min(
            n - 1, static_cast<std::size_t>(
                       static_cast<double>(n) * static_cast<double>(k) /
                       static_cast<double>(n_bins)));
        edges.push_back(lons[idx]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

struct LogisticProblem {
    std::vector<std::array<double, 25>> x;  // normalized tau + bias
    std::vector<int> y;                     // bin index
    int n_classes = 1;
};

std::vector<std::vector<double>> train_softmax(const LogisticProblem& prob, double l2,
                                               int iterations, double lr) {
    const std::size_t n = prob.x.size();
    const std::size_t C = static_cast<std::size_t>(prob.n_classes);
    std::vector<std::vector<double>> w(C, std::vector<double>(25, 0.0));
    if (n == 0 || C < 2) return w;
    std::vector<std::vector<double>> grad(C, std::vector<double>(25, 0.0));
    std::vector<double> logits(C), p(C);
    for (int it = 0; it < iterations; ++it) {
        for (auto& g : grad) std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < C; ++c) {
                double z = w[c][24];
                for (std::size_t d = 0; d < 24; ++d) z += w[c][d] * prob.x[i][d];
                logits[c] = z;
            }
            const double lse = log_sum_exp(logits);
            for (std::size_t c = 0; c < C; ++c) {
                p[c] = std::exp(logits[c] - lse);
                const double err = p[c] - (prob.y[i] == static_cast<int>(c) ? 1.0 : 0.0);
                for (std::size_t d = 0; d < 25; ++d) {
                    grad[c][d] += err * prob.x[i][d];
                }
            }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t d = 0; d < 25; ++d) {
                double g = grad[c][d] * inv_n;
                if (d < 24) g += l2 * w[c][d] * inv_n;  // bias unpenalized
                w[c][d] -= lr * g;
            }
        }
    }
    return w;
}

LogisticProblem make_problem(std::span<const feat::UserFeatures> features,
                             std::span<const label::UserLabel> labels,
                             std::span<const std::size_t> idx,
                             const std::vector<double>& edges) {
    LogisticProblem prob;
    prob.n_classes = static_cast<int>(edges.size()) + 1;
    prob.x.reserve(idx.size());
    prob.y.reserve(idx.size());
    for (std::size_t i : idx) {
        const std::array<double, 24> f = normalize_tau(features[i].tau);
        std::array<double, 25> xi{};
        std::copy(f.begin(), f.end(), xi.begin());
        xi[24] = 1.0;
        prob.x.push_back(xi);
        int bin = 0;
        for (double e : edges) {
            if (e < labels[i].coords.lon) ++bin;
        }
        prob.y.push_back(bin);
    }
    return prob;
}

std::vector<std::vector<std::size_t>> seeded_folds(std::size_t n, int k,
                                                   std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < static_cast<std::size_t>(k); ++f) {
        std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return folds;
}

}  // namespace

TemporalModel fit_temporal(std::span<const feat::UserFeatures> features,
                           std::span<const label::UserLabel> labels,
                           const TemporalFitOptions& opts) {
    if (features.size() != labels.size()) {
        throw std::invalid_argument("fit_temporal: features/labels mismatch");
    }
    const std::size_t n = features.size();
    TemporalModel degenerate;  // 1-bin model: constant temporal factor

    std::vector<double> lons;
    lons.reserve(n);
    for (const label::UserLabel& l : labels) lons.push_back(l.coords.lon);
    std::vector<double> distinct = lons;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (n < 4 || distinct.size() < 2) return degenerate;

    const int folds = std::max(2, std::min<int>(opts.cv_folds, static_cast<int>(n)));
    std::vector<std::vector<std::size_t>> fold_idx = seeded_folds(n, folds, opts.seed);
    std::vector<std::vector<std::size_t>> train_sets(fold_idx.size());
    for (std::size_t f = 0; f < fold_idx.size(); ++f) {
        for (std::size_t g = 0; g < fold_idx.size(); ++g) {
            if (g == f) continue;
            train_sets[f].insert(train_sets[f].end(), fold_idx[g].begin(),
                                 fold_idx[g].end());
        }
    }

    std::vector<int> bins_grid;
    for (int b : opts.n_bins_grid) {
        if (b >= 2 && static_cast<std::size_t>(b) <= n) bins_grid.push_back(b);
    }
    double best_aed = std::numeric_limits<double>::infinity();
    int best_bins = 1;
    double best_l2 = opts.l2_grid.empty() ? 0.1 : opts.l2_grid.front();
    if (bins_grid.empty()) return degenerate;

    // Stage 1, L2 by CV classification accuracy: every (bins, l2, fold)
    // cell is independent, so run them as one flat parallel job list
    // with slot-indexed results (thread-count invariant).
    struct AccCell {
        std::size_t correct = 0;
        std::size_t total = 0;
    };
    const std::size_t n_l2 = std::max<std::size_t>(1, opts.l2_grid.size());
    std::vector<AccCell> acc_cells(bins_grid.size() * n_l2 * fold_idx.size());
    parallel_for(acc_cells.size(), opts.threads, [&](std::size_t job) {
        const std::size_t f = job % fold_idx.size();
        const std::size_t li = (job / fold_idx.size()) % n_l2;
        const std::size_t bi = job / (fold_idx.size() * n_l2);
        const int n_bins = bins_grid[bi];
        const double l2 = opts.l2_grid.empty() ? best_l2 : opts.l2_grid[li];

        std::vector<double> train_lons;
        for (std::size_t i : train_sets[f]) train_lons.push_back(lons[i]);
        const std::vector<double> edges = percentile_edges(train_lons, n_bins);
        if (edges.empty()) return;
        LogisticProblem prob = make_problem(features, labels, train_sets[f], edges);
        TemporalModel tm;
        tm.bin_edges = edges;
        tm.coefficients =
            train_softmax(prob, l2, opts.gd_iterations, opts.gd_learning_rate);
        AccCell& cell = acc_cells[job];
        for (std::size_t i : fold_idx[f]) {
            const std::vector<double> p = tm.predict_bins(features[i].tau);
            const std::size_t argmax = static_cast<std::size_t>(
                std::max_element(p.begin(), p.end()) - p.begin());
            if (static_cast<int>(argmax) == tm.bin_of(labels[i].coords.lon)) {
                ++cell.correct;
            }
            ++cell.total;
        }
    });
    std::vector<double> l2_for_bins(bins_grid.size(), best_l2);
    for (std::size_t bi = 0; bi < bins_grid.size(); ++bi) {
        double cell_best_acc = -1.0;
        for (std::size_t li = 0; li < n_l2; ++li) {
            std::size_t correct = 0, total = 0;
            for (std::size_t f = 0; f < fold_idx.size(); ++f) {
                const AccCell& cell =
                    acc_cells[bi * n_l2 * fold_idx.size() + li * fold_idx.size() + f];
                correct += cell.correct;
                total += cell.total;
            }
            const double acc = total == 0 ? 0.0
                                          : static_cast<double>(correct) /
                                                static_cast<double>(total);
            if (acc > cell_best_acc) {
                cell_best_acc = acc;
                l2_for_bins[bi] = opts.l2_grid.empty() ? best_l2 : opts.l2_grid[li];
            }
        }
    }

    // Stage 2, bin count by downstream inference error: the temporal
    // factor alone over a candidate prior built from the training folds.
    struct ErrCell {
        double err_total = 0.0;
        std::size_t err_n = 0;
    };
    std::vector<ErrCell> err_cells(bins_grid.size() * fold_idx.size());
    parallel_for(err_cells.size(), opts.threads, [&](std::size_t job) {
        const std::size_t f = job % fold_idx.size();
        const std::size_t bi = job / fold_idx.size();
        const int n_bins = bins_grid[bi];

        std::vector<double> train_lons;
        std::vector<label::UserLabel> train_labels;
        for (std::size_t i : train_sets[f]) {
            train_lons.push_back(lons[i]);
            train_labels.push_back(labels[i]);
        }
        const std::vector<double> edges = percentile_edges(train_lons, n_bins);
        LogisticProblem prob = make_problem(features, labels, train_sets[f], edges);
        TemporalModel tm;
        tm.bin_edges = edges;
        tm.coefficients = train_softmax(prob, l2_for_bins[bi], opts.gd_iterations,
                                        opts.gd_learning_rate);
        CandidateSet cands = build_candidates(train_labels);
        cands.assign_bins(tm);
        ErrCell& cell = err_cells[job];
        for (std::size_t i : fold_idx[f]) {
            const std::vector<double> p = tm.predict_bins(features[i].tau);
            double best_score = -std::numeric_limits<double>::infinity();
            const Candidate* best_c = nullptr;
            for (const Candidate& cand : cands.candidates) {
                const double s =
                    std::log(std::max(p[static_cast<std::size_t>(cand.bin)], 1e-300)) +
                    std::log(std::max(cand.weight, 1e-300));
                if (s > best_score ||
                    (s == best_score && best_c != nullptr &&
                     cand.weight > best_c->weight)) {
                    best_score = s;
                    best_c = &cand;
                }
            }
            if (best_c != nullptr) {
                cell.err_total += geo::haversine_miles(best_c->point, labels[i].coords);
                ++cell.err_n;
            }
        }
    });
    for (std::size_t bi = 0; bi < bins_grid.size(); ++bi) {
        double err_total = 0.0;
        std::size_t err_n = 0;
        for (std::size_t f = 0; f < fold_idx.size(); ++f) {
            err_total += err_cells[bi * fold_idx.size() + f].err_total;
            err_n += err_cells[bi * fold_idx.size() + f].err_n;
        }
        const double aed = err_n == 0 ? std::numeric_limits<double>::infinity()
                                      : err_total / static_cast<double>(err_n);
        if (aed < best_aed) {
            best_aed = aed;
            best_bins = bins_grid[bi];
            best_l2 = l2_for_bins[bi];
        }
    }

    if (best_bins < 2) return degenerate;
    const std::vector<double> edges = percentile_edges(lons, best_bins);
    if (edges.empty()) return degenerate;
    std::vector<std::size_t> all_idx(n);
    for (std::size_t i = 0; i < n; ++i) all_idx[i] = i;
    LogisticProblem prob = make_problem(features, labels, all_idx, edges);
    TemporalModel tm;
    tm.bin_edges = edges;
    tm.l2_strength = best_l2;
    tm.coefficients =
        train_softmax(prob, best_l2, opts.gd_iterations, opts.gd_learning_rate);
    return tm;
}

void CandidateSet::assign_bins(const TemporalModel& tm) {
    for (Candidate& c : candidates) c.bin = tm.bin_of(c.point.lon);
}

CandidateSet build_candidates(std::span<const label::UserLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("build_candidates: no labels");
    struct Cell {
        double lat_sum = 0.0;
        double lon_sum = 0.0;
        double count = 0.0;
    };
    std::map<std::pair<long long, long long>, Cell> cells;
    for (const label::UserLabel& l : labels) {
        const std::pair<long long, long long> key = {std::llround(l.coords.lat * 10.0),
                                                     std::llround(l.coords.lon * 10.0)};
        Cell& c = cells[key];
        c.lat_sum += l.coords.lat;
        c.lon_sum += l.coords.lon;
        c.count += 1.0;
    }
    CandidateSet out;
    out.candidates.reserve(cells.size());
    for (const auto& [key, c] : cells) {
        Candidate cand;
        cand.point = {c.lat_sum / c.count, c.lon_sum / c.count};
        cand.weight = c.count;
        out.candidates.push_back(cand);
    }
    return out;
}

std::vector<double> temporal_factor(const TemporalModel& tm,
                                    std::span<const std::int64_t, 24> tau,
                                    const CandidateSet& candidates) {
    const std::vector<double> p = tm.predict_bins(tau);
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const Candidate& c : candidates.candidates) {
        const std::size_t bin =
            std::min(static_cast<std::size_t>(c.bin), p.size() - 1);
        out.push_back(std::log(std::max(p[bin], 1e-300)));
    }
    return out;
}

Prediction predict(const GeoModel& model, const feat::UserFeatures& user,
                   bool use_temporal) {
    struct Term {
        const MixtureDensity* density;
        double log_count_prior;  // ln ||u|| + ln P(u)
    };
    std::vector<Term> terms;
    auto gather = [&](const std::map<std::string, double>& counts, bool words) {
        for (const auto& [raw, count] : counts) {
            if (count <= 0.0) continue;
            const std::string key = words ? word_key(raw) : subreddit_key(raw);
            auto it = model.densities.densities.find(key);
            if (it == model.densities.densities.end()) continue;
            auto pit = model.densities.prior.find(key);
            const double prior = pit == model.densities.prior.end() ? 0.0 : pit->second;
            if (prior <= 0.0) continue;
            terms.push_back({&it->second, std::log(count) + std::log(prior)});
        }
    };
    gather(user.w, true);
    gather(user.s, false);

    Prediction out;
    if (terms.empty() || model.candidates.size() == 0) {
        out.point = model.fallback;
        out.used_fallback = true;
        return out;
    }

    std::vector<double> tlog;
    const bool temporal_on =
        use_temporal && model.temporal.has_value() && model.temporal->n_bins() > 1;
    if (temporal_on) {
        tlog = temporal_factor(*model.temporal, user.tau, model.candidates);
    }

    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    double best_weight = -1.0;
    std::vector<double> feature_logs(terms.size());
    for (std::size_t ci = 0; ci < model.candidates.size(); ++ci) {
        const Candidate& c = model.candidates.candidates[ci];
        for (std::size_t t = 0; t < terms.size(); ++t) {
            feature_logs[t] =
                terms[t].log_count_prior + density_at(*terms[t].density, c.point);
        }
        double score = log_sum_exp(feature_logs);
        if (temporal_on) score += tlog[ci];
        if (score > best_score || (score == best_score && c.weight > best_weight)) {
            best_score = score;
            best_idx = ci;
            best_weight = c.weight;
        }
    }
    out.point = model.candidates.candidates[best_idx].point;
    out.log_score = best_score;
    out.candidate_index = static_cast<int>(best_idx);
    return out;
}

std::vector<Prediction> predict_many(const GeoModel& model,
                                     std::span<const feat::UserFeatures> users,
                                     bool use_temporal, int threads) {
    std::vector<Prediction> out(users.size());
    parallel_for(users.size(), threads, [&](std::size_t i) {
        out[i] = predict(model, users[i], use_temporal);
    });
    return out;
}

geo::GeoPoint baseline_map(std::span<const label::UserLabel> labels,
                           const CandidateSet& candidates, const FitOptions& opts) {
    std::vector<geo::GeoPoint> points;
    points.reserve(labels.size());
    for (const label::UserLabel& l : labels) points.push_back(l.coords);
    FitOptions map_opts = opts;
    map_opts.kind = MixtureKind::dpmm;  // the baseline is a DPMM MAP
    const MixtureDensity density = fit_dpmm(points, map_opts);
    double best = -std::numeric_limits<double>::infinity();
    double best_weight = -1.0;
    geo::GeoPoint best_point = candidates.candidates.front().point;
    for (const Candidate& c : candidates.candidates) {
        const double d = density_at(density, c.point);
        if (d > best || (d == best && c.weight > best_weight)) {
            best = d;
            best_weight = c.weight;
            best_point = c.point;
        }
    }
    return best_point;
}

geo::GeoPoint baseline_map(std::span<const label::UserLabel> labels,
                           std::uint64_t seed) {
    FitOptions opts;
    opts.seed = seed;
    return baseline_map(labels, build_candidates(labels), opts);
}

GeoModel train_geo_model(std::span<const feat::UserFeatures> features,
                         std::span<const label::UserLabel> labels,
                         const TrainConfig& config) {
    if (labels.empty()) throw std::invalid_argument("train_geo_model: no labels");

    GeoModel model;
    model.modalities = config.modalities;
    model.seed = config.seed;

    std::vector<std::string> vocab_w;
    std::vector<std::string> vocab_s;
    if (config.preselected.has_value()) {
        if (config.modalities.words) vocab_w = config.preselected->words;
        if (config.modalities.subreddits) vocab_s = config.preselected->subreddits;
    } else if (config.modalities.words || config.modalities.subreddits) {
        feat::SelectionConfig sel;
        sel.k_words = config.k_words;
        sel.k_subreddits = config.k_subreddits;
        sel.stopwords = config.stopwords;
        sel.stop_subreddits = config.stop_subreddits;
        sel.min_cell_users = config.min_cell_users;
        sel.threads = config.threads;
        feat::SelectionResult selected = feat::select_features(features, labels, sel);
        if (config.modalities.words) vocab_w = std::move(selected.words);
        if (config.modalities.subreddits) vocab_s = std::move(selected.subreddits);
    }
    if (vocab_w.empty() && vocab_s.empty()) {
        throw std::invalid_argument("train_geo_model: no usable modality vocabulary");
    }

    FitOptions fit = config.density_fit;
    fit.kind = config.density_kind;
    fit.seed = config.seed;
    model.densities = fit_feature_densities(features, labels, vocab_w, vocab_s, fit,
                                            config.min_feature_support, config.threads);

    if (config.modalities.temporal) {
        TemporalFitOptions topts = config.temporal_fit;
        topts.seed = derive_seed(config.seed, "temporal");
        topts.threads = config.threads;
        model.temporal = fit_temporal(features, labels, topts);
    }

    model.candidates = build_candidates(labels);
    if (model.temporal) model.candidates.assign_bins(*model.temporal);
    model.fallback = baseline_map(labels, model.candidates, fit);
    return model;
}

}  // namespace geoloc::model
