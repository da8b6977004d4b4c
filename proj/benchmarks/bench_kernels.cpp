// Kernel benchmark: times the OpenMP paths against the single-threaded
// path (and the brute-force reference scorer where one exists), and
// verifies the outputs agree while it is at it.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include "geoloc/corpus.hpp"
#include "geoloc/parallel.hpp"
#include "geoloc/synth.hpp"
#include "support/reference.hpp"

using namespace geoloc;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_ms(F&& fn) {
    const double start = now_ms();
    fn();
    return now_ms() - start;
}

void report(const std::string& kernel, double serial_ms, double parallel_ms,
            double max_delta) {
    std::cout << std::left << std::setw(26) << kernel << std::right << std::fixed
              << std::setprecision(1) << std::setw(12) << serial_ms << std::setw(12)
              << parallel_ms << std::setw(10) << std::setprecision(2)
              << (parallel_ms > 0 ? serial_ms / parallel_ms : 0.0) << std::setw(14)
              << std::scientific << std::setprecision(1) << max_delta << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    int threads = effective_threads(0);
    if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
    std::cout << "threads: " << threads << "\n\n";
    std::cout << std::left << std::setw(26) << "kernel" << std::right
              << std::setw(12) << "serial(ms)" << std::setw(12) << "parallel"
              << std::setw(10) << "speedup" << std::setw(14) << "max|delta|\n";

    synth::SyntheticSpec spec;
    spec.n_cities = 8;
    spec.users_per_city = 120;
    spec.history_comments_mean = 25;
    spec.tau_shift_hours = 8.0;
    spec.seed = 515151;
    const synth::SyntheticCorpus raw = synth::generate_synthetic(spec);
    const gaz::Gazetteer g = gaz::build_gazetteer(raw.gazetteer_cities);
    const std::vector<extract::Comment> comments = corpus::to_comments(raw.records);

    // ---- corpus labeling (extraction + resolution per comment) ----
    label::LabelResult labels_serial, labels_parallel;
    const double label_s = time_ms([&] {
        labels_serial =
            label::label_corpus(comments, raw.seeds, g, raw.abbreviations, {}, 1);
    });
    const double label_p = time_ms([&] {
        labels_parallel = label::label_corpus(comments, raw.seeds, g,
                                              raw.abbreviations, {}, threads);
    });
    double label_delta = 0.0;
    for (std::size_t i = 0; i < labels_serial.labels.size(); ++i) {
        label_delta = std::max(
            label_delta,
            geo::haversine_miles(labels_serial.labels[i].coords,
                                 labels_parallel.labels[i].coords));
    }
    report("label_corpus", label_s, label_p, label_delta);

    // featurize once for the model kernels
    std::map<std::string, std::vector<extract::Comment>> by_user;
    for (const extract::Comment& c : comments) by_user[c.user].push_back(c);
    std::vector<feat::UserFeatures> features;
    std::vector<label::UserLabel> labels;
    for (const label::UserLabel& l : labels_serial.labels) {
        std::set<std::string> exclude;
        for (const label::Evidence& e : l.evidence) exclude.insert(e.comment_id);
        feat::UserFeatures f = feat::featurize_user(by_user.at(l.user), 1000,
                                                    l.label_utc + 31 * 86400, exclude);
        f.user = l.user;
        if (f.empty()) continue;
        features.push_back(std::move(f));
        labels.push_back(l);
    }

    // ---- non-localness scoring ----
    feat::SelectionConfig sel;
    sel.stopwords = {"i", "me", "my", "we", "our", "you", "your", "the", "and",
                     "is", "are", "was", "of", "at", "by", "for", "with", "about",
                     "so", "a"};
    sel.min_cell_users = 50;
    feat::SelectionResult sel_serial, sel_parallel;
    sel.threads = 1;
    const double nl_s =
        time_ms([&] { sel_serial = feat::select_features(features, labels, sel); });
    sel.threads = threads;
    const double nl_p =
        time_ms([&] { sel_parallel = feat::select_features(features, labels, sel); });
    double nl_delta = 0.0;
    for (std::size_t i = 0; i < sel_serial.word_ranking.ranked.size(); ++i) {
        nl_delta = std::max(nl_delta,
                            std::abs(sel_serial.word_ranking.ranked[i].second -
                                     sel_parallel.word_ranking.ranked[i].second));
    }
    report("non_localness_ranking", nl_s, nl_p, nl_delta);

    // ---- per-feature density fitting (the hot training kernel) ----
    std::vector<std::string> vocab_w;
    for (const auto& [name, score] : sel_serial.word_ranking.ranked) {
        vocab_w.push_back(name);
    }
    std::vector<std::string> vocab_s;
    for (const auto& [name, score] : sel_serial.subreddit_ranking.ranked) {
        vocab_s.push_back(name);
    }
    model::FitOptions fit_opts;
    fit_opts.seed = 9;
    model::FeatureDensities dens_serial, dens_parallel;
    const double fit_s = time_ms([&] {
        dens_serial = model::fit_feature_densities(features, labels, vocab_w,
                                                   vocab_s, fit_opts, 3, 1);
    });
    const double fit_p = time_ms([&] {
        dens_parallel = model::fit_feature_densities(features, labels, vocab_w,
                                                     vocab_s, fit_opts, 3, threads);
    });
    double fit_delta = 0.0;
    for (const auto& [key, d] : dens_serial.densities) {
        const model::MixtureDensity& pd = dens_parallel.densities.at(key);
        for (std::size_t k = 0; k < d.components(); ++k) {
            fit_delta = std::max(fit_delta, std::abs(d.weights[k] - pd.weights[k]));
        }
    }
    report("feature_density_fit", fit_s, fit_p, fit_delta);

    // ---- full training (includes the serial temporal CV) ----
    model::TrainConfig cfg;
    cfg.modalities = {true, true, true};
    cfg.stopwords = sel.stopwords;
    cfg.min_cell_users = 50;
    cfg.seed = 9;
    model::GeoModel m_serial, m_parallel;
    cfg.threads = 1;
    const double train_s =
        time_ms([&] { m_serial = model::train_geo_model(features, labels, cfg); });
    cfg.threads = threads;
    const double train_p =
        time_ms([&] { m_parallel = model::train_geo_model(features, labels, cfg); });
    report("train_geo_model", train_s, train_p, 0.0);

    // ---- prediction ----
    std::vector<model::Prediction> pred_serial, pred_parallel;
    const double pred_s = time_ms(
        [&] { pred_serial = model::predict_many(m_serial, features, true, 1); });
    const double pred_p = time_ms([&] {
        pred_parallel = model::predict_many(m_parallel, features, true, threads);
    });
    double pred_delta = 0.0;
    for (std::size_t i = 0; i < pred_serial.size(); ++i) {
        pred_delta = std::max(pred_delta,
                              std::abs(pred_serial[i].log_score -
                                       pred_parallel[i].log_score));
    }
    report("predict_many", pred_s, pred_p, pred_delta);

    // ---- production scorer vs the brute-force reference ----
    ref::Eq1Instance instance;
    for (const model::Candidate& c : m_serial.candidates.candidates) {
        instance.candidates.push_back(c.point);
        instance.candidate_weights.push_back(c.weight);
    }
    instance.priors = m_serial.densities.prior;
    for (const auto& [k, d] : m_serial.densities.densities) {
        instance.densities[k] = d;
    }
    double ref_delta = 0.0;
    const double ref_ms = time_ms([&] {
        for (std::size_t i = 0; i < features.size(); ++i) {
            std::map<std::string, double> counts;
            for (const auto& [k, v] : features[i].w) {
                counts[model::word_key(k)] = v;
            }
            for (const auto& [k, v] : features[i].s) {
                counts[model::subreddit_key(k)] = v;
            }
            const ref::Eq1Result r = ref::predict_bruteforce(instance, counts);
            if (r.argmax >= 0 && !pred_serial[i].used_fallback) {
                // temporal factors shift both paths identically; compare
                // the content term by re-scoring without temporal
                const model::Prediction p =
                    model::predict(m_serial, features[i], false);
                ref_delta = std::max(ref_delta, std::abs(r.log_score - p.log_score));
            }
        }
    });
    report("bruteforce_reference", ref_ms, pred_s, ref_delta);

    std::cout << "\nlabels: " << labels.size() << ", vocabulary: "
              << m_serial.densities.densities.size() << " densities, candidates: "
              << m_serial.candidates.size() << "\n";
    return 0;
}
