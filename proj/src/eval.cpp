#include "geoloc/eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "geoloc/rng.hpp"
#include "geoloc/strings.hpp"

namespace geoloc::eval {

MetricReport metrics_from_errors(std::span<const double> errors_miles) {
    if (errors_miles.empty()) throw std::invalid_argument("metrics: empty input");
    MetricReport r;
    r.n_users = errors_miles.size();
    std::vector<double> sorted(errors_miles.begin(), errors_miles.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t hits = 0;
    for (double e : sorted) {
        total += e;
        if (e < 100.0) ++hits;
    }
    r.aed = total / static_cast<double>(sorted.size());
    const std::size_t n = sorted.size();
    r.med = (n % 2 == 1) ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    r.acc_at_100 = static_cast<double>(hits) / static_cast<double>(n);
    return r;
}

MetricReport metrics(std::span<const geo::GeoPoint> pred,
                     std::span<const geo::GeoPoint> truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("metrics: prediction/truth length mismatch");
    }
    std::vector<double> errors;
    errors.reserve(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        errors.push_back(geo::haversine_miles(pred[i], truth[i]));
    }
    return metrics_from_errors(errors);
}

std::vector<std::vector<std::size_t>> kfold(std::size_t n, int k, std::uint64_t seed) {
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("kfold: k out of range");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return folds;
}

Corpus filter_scope(const Corpus& corpus, const std::string& scope) {
    if (scope != "us") return corpus;
    Corpus out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const gaz::LocationHierarchy& h = corpus.labels[i].hierarchy;
        if (h.country != "united states") continue;
        // contiguous US: drop the detached states
        if (h.state == "alaska" || h.state == "hawaii") continue;
        out.features.push_back(corpus.features[i]);
        out.labels.push_back(corpus.labels[i]);
    }
    return out;
}

namespace {

model::TrainConfig fold_config(const model::TrainConfig& base,
                               const model::Modalities& modalities,
                               std::uint64_t seed) {
    model::TrainConfig cfg = base;
    cfg.modalities = modalities;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

CvResult run_cv(const Corpus& corpus, const ExperimentSpec& spec,
                const model::TrainConfig& base_config) {
    if (spec.folds < 2) throw std::invalid_argument("run_cv: folds must be >= 2");
    const std::vector<std::vector<std::size_t>> folds =
        kfold(corpus.size(), spec.folds, spec.seed);

    CvResult result;
    std::vector<double> pooled;
    std::size_t pooled_fallback = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        Corpus train;
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            for (std::size_t i : folds[g]) {
                train.features.push_back(corpus.features[i]);
                train.labels.push_back(corpus.labels[i]);
            }
        }
        model::TrainConfig cfg =
            fold_config(base_config, spec.modalities, spec.seed);
        model::GeoModel m;
        try {
            m = model::train_geo_model(train.features, train.labels, cfg);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_cv: fold " + std::to_string(f) +
                                     " training failed: " + e.what());
        }

        FoldReport fr;
        std::vector<feat::UserFeatures> test_features;
        std::vector<geo::GeoPoint> truth;
        for (std::size_t i : folds[f]) {
            test_features.push_back(corpus.features[i]);
            truth.push_back(corpus.labels[i].coords);
        }
        const std::vector<model::Prediction> preds = model::predict_many(
            m, test_features, spec.modalities.temporal, base_config.threads);
        std::size_t fallback = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            fr.errors.push_back(geo::haversine_miles(preds[i].point, truth[i]));
            if (preds[i].used_fallback) ++fallback;
        }
        fr.report = metrics_from_errors(fr.errors);
        fr.report.n_fallback = fallback;
        pooled_fallback += fallback;
        pooled.insert(pooled.end(), fr.errors.begin(), fr.errors.end());
        result.folds.push_back(std::move(fr));
    }
    result.aggregate = metrics_from_errors(pooled);
    result.aggregate.n_fallback = pooled_fallback;
    return result;
}

TransferResult run_transfer(const Corpus& train, const Corpus& test,
                            const model::TrainConfig& base_config,
                            const model::Modalities& modalities) {
    model::TrainConfig cfg = fold_config(base_config, modalities, base_config.seed);
    const model::GeoModel m = model::train_geo_model(train.features, train.labels, cfg);

    // fraction of source vocabulary present in the target corpus
    std::set<std::string> target_vocab;
    for (const feat::UserFeatures& f : test.features) {
        for (const auto& [tok, c] : f.w) target_vocab.insert(model::word_key(tok));
        for (const auto& [sub, c] : f.s) target_vocab.insert(model::subreddit_key(sub));
    }
    std::size_t present = 0;
    std::size_t vocab_size = 0;
    for (const std::string& w : m.densities.vocab_words) {
        ++vocab_size;
        if (target_vocab.contains(model::word_key(w))) ++present;
    }
    for (const std::string& s : m.densities.vocab_subreddits) {
        ++vocab_size;
        if (target_vocab.contains(model::subreddit_key(s))) ++present;
    }

    TransferResult out;
    out.map_point = m.fallback;
    out.feature_overlap = vocab_size == 0 ? 0.0
                                          : static_cast<double>(present) /
                                                static_cast<double>(vocab_size);
    const std::vector<model::Prediction> preds = model::predict_many(
        m, test.features, modalities.temporal, base_config.threads);
    std::size_t fallback = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        out.errors.push_back(
            geo::haversine_miles(preds[i].point, test.labels[i].coords));
        if (preds[i].used_fallback) ++fallback;
    }
    out.report = metrics_from_errors(out.errors);
    out.report.n_fallback = fallback;
    return out;
}

std::vector<AuditRow> audit_sample(std::span<const label::UserLabel> labels,
                                   std::span<const extract::Comment> comments,
                                   std::size_t n, std::uint64_t seed) {
    std::map<std::string, const extract::Comment*> by_id;
    for (const extract::Comment& c : comments) by_id[c.id] = &c;

    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    if (order.size() > n) order.resize(n);
    std::sort(order.begin(), order.end());

    std::vector<AuditRow> rows;
    rows.reserve(order.size());
    for (std::size_t i : order) {
        const label::UserLabel& l = labels[i];
        AuditRow row;
        row.user = l.user;
        if (!l.evidence.empty()) {
            row.comment_id = l.evidence.front().comment_id;
            auto it = by_id.find(row.comment_id);
            if (it != by_id.end()) row.comment_text = it->second->body;
        }
        row.extracted = l.hierarchy.display();
        row.resolution = std::string(gaz::resolution_name(l.resolution));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

bool verdict_true(const std::string& v) {
    const std::string s = to_lower(trim(v));
    return s == "y" || s == "yes" || s == "1" || s == "true";
}

bool verdict_set(const std::string& v) { return !trim(v).empty(); }

}  // namespace

AuditScore score_audit(std::span<const AuditRow> rows) {
    AuditScore score;
    score.n_rows = rows.size();
    for (const AuditRow& r : rows) {
        if (!verdict_set(r.correct)) continue;
        ++score.n_scored;
        if (verdict_true(r.correct)) {
            ++score.n_correct;
            if (verdict_true(r.correct_resolution)) ++score.n_correct_resolution;
        }
    }
    if (score.n_scored > 0) {
        score.precision = static_cast<double>(score.n_correct) /
                          static_cast<double>(score.n_scored);
    }
    if (score.n_correct > 0) {
        score.resolution_accuracy = static_cast<double>(score.n_correct_resolution) /
                                    static_cast<double>(score.n_correct);
    }
    return score;
}

}  // namespace geoloc::eval
