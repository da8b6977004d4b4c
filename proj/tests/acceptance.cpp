// Acceptance suite: ten end-to-end criteria, each printed as a single
// pass/fail line. Returns nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "geoloc/corpus.hpp"
#include "geoloc/model_io.hpp"
#include "geoloc/rng.hpp"
#include "geoloc/synth.hpp"
#include "support/reference.hpp"

using namespace geoloc;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string name)
        : number_(number), name_(std::move(name)),
          start_(std::chrono::steady_clock::now()) {}

    void check(bool ok, const std::string& detail) {
        if (!ok) {
            ok_ = false;
            details_.push_back(detail);
        }
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

    ~Criterion() {
        std::ostringstream line;
        line << (ok_ ? "[PASS]" : "[FAIL]") << " criterion " << number_ << ": "
             << name_ << " (" << std::fixed << std::setprecision(1) << seconds()
             << "s)";
        std::cout << line.str() << "\n";
        for (const std::string& d : details_) {
            std::cout << "       - " << d << "\n";
        }
        if (!ok_) ++g_failures;
    }

private:
    int number_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    bool ok_ = true;
    std::vector<std::string> details_;
};

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("geoloc_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// label + featurize a synthetic corpus through the library pipeline
struct PipelineCorpus {
    eval::Corpus corpus;                  // featurized + pipeline labels
    std::vector<label::UserLabel> truth;  // generator ground truth
    label::LabelStats label_stats;
    std::size_t n_comments = 0;
    std::vector<label::UserLabel> labels_all;  // pipeline labels, incl. empties
};

PipelineCorpus run_pipeline(const synth::SyntheticSpec& spec) {
    const synth::SyntheticCorpus raw = synth::generate_synthetic(spec);
    PipelineCorpus out;
    out.truth = raw.truth;
    out.n_comments = raw.records.size();
    gaz::Gazetteer g = gaz::build_gazetteer(raw.gazetteer_cities);
    const std::vector<extract::Comment> comments = corpus::to_comments(raw.records);
    label::LabelResult labeled =
        label::label_corpus(comments, raw.seeds, g, raw.abbreviations, {});
    out.label_stats = labeled.stats;
    out.labels_all = labeled.labels;

    std::map<std::string, std::vector<extract::Comment>> by_user;
    for (const extract::Comment& c : comments) by_user[c.user].push_back(c);
    for (const label::UserLabel& l : labeled.labels) {
        auto it = by_user.find(l.user);
        if (it == by_user.end()) continue;
        std::set<std::string> exclude;
        for (const label::Evidence& e : l.evidence) exclude.insert(e.comment_id);
        feat::UserFeatures f = feat::featurize_user(it->second, 1000,
                                                    l.label_utc + 31 * 86400, exclude);
        f.user = l.user;
        if (f.empty()) continue;
        out.corpus.features.push_back(std::move(f));
        out.corpus.labels.push_back(l);
    }
    return out;
}

std::vector<std::string> synth_stopwords() {
    return {"i", "me", "my", "we", "our", "you", "your", "the", "and", "is",
            "are", "was", "of", "at", "by", "for", "with", "about", "so", "a"};
}

// ---- criteria -------------------------------------------------------------

void criterion_1_labeling_precision() {
    Criterion c(1, "labeling precision on the bundled synthetic corpus");
    synth::SyntheticSpec spec;
    spec.n_cities = 10;
    spec.users_per_city = 6;
    spec.history_comments_mean = 2.0;
    spec.seed = 11;
    const synth::SyntheticCorpus raw = synth::generate_synthetic(spec);
    c.check(raw.records.size() >= 150 && raw.records.size() <= 260,
            "corpus size " + std::to_string(raw.records.size()) +
                " outside the ~200-comment target");

    gaz::Gazetteer g = gaz::build_gazetteer(raw.gazetteer_cities);
    label::LabelResult labeled = label::label_corpus(
        corpus::to_comments(raw.records), raw.seeds, g, raw.abbreviations, {});

    std::map<std::string, const label::UserLabel*> truth;
    for (const label::UserLabel& t : raw.truth) truth[t.user] = &t;

    std::size_t correct = 0;
    std::size_t correct_resolution = 0;
    for (const label::UserLabel& l : labeled.labels) {
        auto it = truth.find(l.user);
        const bool ok =
            it != truth.end() && l.hierarchy.is_prefix_of(it->second->hierarchy);
        if (ok) {
            ++correct;
            if (l.resolution == it->second->resolution) ++correct_resolution;
        }
    }
    const double precision = labeled.labels.empty()
                                 ? 0.0
                                 : static_cast<double>(correct) /
                                       static_cast<double>(labeled.labels.size());
    const double res_acc = correct == 0 ? 0.0
                                        : static_cast<double>(correct_resolution) /
                                              static_cast<double>(correct);
    c.check(labeled.labels.size() >= 50,
            "only " + std::to_string(labeled.labels.size()) + " users labeled");
    c.check(precision >= 0.95, "precision " + fmt(precision) + " < 0.95");
    c.check(res_acc >= 0.90, "resolution accuracy " + fmt(res_acc) + " < 0.90");
    c.check(c.seconds() < 10.0, "runtime exceeded 10 s");
}

void criterion_2_eq1_oracle() {
    Criterion c(2, "scorer matches brute-force enumeration on 1000 instances");
    Rng rng(20260811);
    std::size_t argmax_mismatch = 0;
    std::size_t score_mismatch = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        model::GeoModel m;
        ref::Eq1Instance instance;
        const int n_cands = 2 + static_cast<int>(rng.uniform_int(9));  // <= 10
        for (int i = 0; i < n_cands; ++i) {
            const geo::GeoPoint pt{rng.uniform(-55, 55), rng.uniform(-150, 150)};
            const double w = 1.0 + static_cast<double>(rng.uniform_int(7));
            m.candidates.candidates.push_back({pt, 0, w});
            instance.candidates.push_back(pt);
            instance.candidate_weights.push_back(w);
        }
        m.fallback = m.candidates.candidates.front().point;

        const bool with_temporal = rng.uniform() < 0.5;
        feat::UserFeatures user;
        if (with_temporal) {
            model::TemporalModel tm;
            const int bins = 2 + static_cast<int>(rng.uniform_int(3));
            for (int b = 1; b < bins; ++b) {
                tm.bin_edges.push_back(rng.uniform(-120, 120));
            }
            std::sort(tm.bin_edges.begin(), tm.bin_edges.end());
            tm.bin_edges.erase(
                std::unique(tm.bin_edges.begin(), tm.bin_edges.end()),
                tm.bin_edges.end());
            tm.coefficients.assign(tm.bin_edges.size() + 1,
                                   std::vector<double>(25, 0.0));
            for (auto& row : tm.coefficients) {
                for (double& v : row) v = rng.uniform(-1.0, 1.0);
            }
            for (std::size_t t = 0; t < 24; ++t) {
                user.tau[t] = static_cast<std::int64_t>(rng.uniform_int(6));
            }
            m.temporal = tm;
            m.candidates.assign_bins(tm);
            const std::vector<double> p = tm.predict_bins(user.tau);
            for (const model::Candidate& cand : m.candidates.candidates) {
                instance.temporal_probs.push_back(
                    p[static_cast<std::size_t>(cand.bin)]);
            }
        }

        const int n_feats = 1 + static_cast<int>(rng.uniform_int(5));  // <= 5
        for (int f = 0; f < n_feats; ++f) {
            const std::string key = model::word_key("f" + std::to_string(f));
            model::MixtureDensity d;
            const int k = 1 + static_cast<int>(rng.uniform_int(3));
            double tw = 0.0;
            for (int i = 0; i < k; ++i) {
                const double w = rng.uniform() + 0.05;
                d.weights.push_back(w);
                tw += w;
                d.means.push_back({rng.uniform(-55, 55), rng.uniform(-150, 150)});
                d.vars.push_back({rng.uniform(0.5, 40.0), rng.uniform(0.5, 40.0)});
            }
            for (double& w : d.weights) w /= tw;
            m.densities.densities[key] = d;
            m.densities.prior[key] = rng.uniform() + 0.01;
            instance.densities[key] = d;
            instance.priors[key] = m.densities.prior[key];
            user.w["f" + std::to_string(f)] =
                1.0 + static_cast<double>(rng.uniform_int(5));
        }
        std::map<std::string, double> counts;
        for (const auto& [k, v] : user.w) counts[model::word_key(k)] = v;

        const model::Prediction ours = model::predict(m, user, with_temporal);
        const ref::Eq1Result oracle = ref::predict_bruteforce(instance, counts);
        if (ours.candidate_index != oracle.argmax) ++argmax_mismatch;
        if (std::abs(ours.log_score - oracle.log_score) > 1e-9) ++score_mismatch;
    }
    c.check(argmax_mismatch == 0,
            std::to_string(argmax_mismatch) + " argmax mismatches");
    c.check(score_mismatch == 0,
            std::to_string(score_mismatch) + " scores beyond 1e-9");
    c.check(c.seconds() < 30.0, "runtime exceeded 30 s");
}

void criterion_3_dpmm_vs_gmm() {
    Criterion c(3, "DPMM densities do not lose to fixed-5 GMM end to end");
    const int trials = 50;
    int dpmm_wins = 0;
    double aed_dpmm_total = 0.0;
    double aed_gmm_total = 0.0;

    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(7000, "dpmm_gmm_" + std::to_string(trial)));
        // six cities; each word feature is active in 1-4 of them
        const std::vector<geo::GeoPoint> cities{
            {40.0, -75.0}, {34.0, -118.0}, {41.9, -87.6},
            {51.5, -0.1},  {35.7, 139.7},  {-33.9, 151.2}};
        const int n_features = 12;
        std::vector<std::vector<int>> active(n_features);
        for (int f = 0; f < n_features; ++f) {
            const int k = 1 + static_cast<int>(rng.uniform_int(4));
            std::vector<int> all{0, 1, 2, 3, 4, 5};
            rng.shuffle(all);
            active[f].assign(all.begin(), all.begin() + k);
        }
        eval::Corpus train, test;
        const int n_users = 240;
        for (int u = 0; u < n_users; ++u) {
            const int home = static_cast<int>(rng.uniform_int(6));
            feat::UserFeatures f;
            f.user = "u" + std::to_string(u);
            for (int w = 0; w < n_features; ++w) {
                const bool is_active =
                    std::find(active[w].begin(), active[w].end(), home) !=
                    active[w].end();
                const double p = is_active ? 0.8 : 0.05;
                if (rng.uniform() < p) {
                    f.w["w" + std::to_string(w)] =
                        1.0 + static_cast<double>(rng.uniform_int(3));
                }
            }
            label::UserLabel l;
            l.user = f.user;
            l.hierarchy.city = "c" + std::to_string(home);
            l.hierarchy.state = "s" + std::to_string(home);
            l.hierarchy.country = "x";
            l.hierarchy.continent = "y";
            l.resolution = gaz::Resolution::city;
            l.coords = {cities[home].lat + rng.normal() * 0.08,
                        cities[home].lon + rng.normal() * 0.08};
            if (u % 10 < 3) {
                test.features.push_back(std::move(f));
                test.labels.push_back(std::move(l));
            } else {
                train.features.push_back(std::move(f));
                train.labels.push_back(std::move(l));
            }
        }

        model::TrainConfig cfg;
        cfg.modalities = {true, false, false};
        model::PreselectedVocab vocab;
        for (int w = 0; w < n_features; ++w) {
            vocab.words.push_back("w" + std::to_string(w));
        }
        cfg.preselected = vocab;
        cfg.seed = static_cast<std::uint64_t>(trial) + 1;
        cfg.density_fit.max_components = 5;

        cfg.density_kind = model::MixtureKind::dpmm;
        const model::GeoModel m_dpmm =
            model::train_geo_model(train.features, train.labels, cfg);
        cfg.density_kind = model::MixtureKind::gmm;
        const model::GeoModel m_gmm =
            model::train_geo_model(train.features, train.labels, cfg);

        auto aed_of = [&test](const model::GeoModel& m) {
            const auto preds = model::predict_many(m, test.features, false);
            double total = 0.0;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                total += geo::haversine_miles(preds[i].point, test.labels[i].coords);
            }
            return total / static_cast<double>(preds.size());
        };
        const double aed_d = aed_of(m_dpmm);
        const double aed_g = aed_of(m_gmm);
        aed_dpmm_total += aed_d;
        aed_gmm_total += aed_g;
        if (aed_d <= aed_g) ++dpmm_wins;
    }
    const double win_rate = static_cast<double>(dpmm_wins) / trials;
    c.check(win_rate >= 0.6, "DPMM won only " + fmt(win_rate * 100) + "% of trials");
    c.check(aed_dpmm_total <= 1.10 * aed_gmm_total,
            "aggregate DPMM AED " + fmt(aed_dpmm_total / trials) +
                " exceeds 1.1x GMM AED " + fmt(aed_gmm_total / trials));
    c.check(c.seconds() < 300.0, "runtime exceeded 5 min");
}

void criterion_4_temporal_modality() {
    Criterion c(4, "temporal features help across continents and stay null within");

    // two-continent corpus: mirrored vocabulary, 8-hour posting shift
    synth::SyntheticSpec mirrored;
    mirrored.n_cities = 6;
    mirrored.users_per_city = 70;
    mirrored.history_comments_mean = 25;
    mirrored.tau_shift_hours = 8.0;
    mirrored.mirror_vocab = true;
    mirrored.toponym_word_rate = 0.0;       // no city-name leakage
    mirrored.subreddit_predictiveness = 0;  // subs carry no signal
    mirrored.toponym_rate = 1.0;
    mirrored.coarse_selfid_rate = 0.0;
    mirrored.pattern_city_rate = 0.0;
    mirrored.seed = 31337;
    PipelineCorpus two_continent = run_pipeline(mirrored);

    model::TrainConfig cfg;
    cfg.stopwords = synth_stopwords();
    cfg.min_cell_users = 50;

    eval::ExperimentSpec words_only;
    words_only.modalities = {true, false, false};
    words_only.folds = 5;
    words_only.seed = 5;
    eval::ExperimentSpec with_temporal = words_only;
    with_temporal.modalities = {true, false, true};

    const eval::CvResult off = eval::run_cv(two_continent.corpus, words_only, cfg);
    const eval::CvResult on = eval::run_cv(two_continent.corpus, with_temporal, cfg);
    c.check(on.aggregate.aed < off.aggregate.aed,
            "temporal did not reduce AED (" + fmt(on.aggregate.aed) + " vs " +
                fmt(off.aggregate.aed) + ")");

    // single-timezone corpus: no posting shift, distinct vocabularies;
    // word evidence kept weak enough that the metric has room to move
    synth::SyntheticSpec flat = mirrored;
    flat.mirror_vocab = false;
    flat.tau_shift_hours = 0.0;
    flat.toponym_word_rate = 0.05;
    flat.history_comments_mean = 4;
    flat.local_word_rate = 0.10;
    flat.seed = 4242;
    PipelineCorpus single_tz = run_pipeline(flat);
    const eval::CvResult off2 = eval::run_cv(single_tz.corpus, words_only, cfg);
    const eval::CvResult on2 = eval::run_cv(single_tz.corpus, with_temporal, cfg);
    const double delta = std::abs(on2.aggregate.acc_at_100 - off2.aggregate.acc_at_100);
    c.check(delta < 0.02, "single-timezone Acc@100 moved by " + fmt(delta));
}

void criterion_5_non_localness() {
    Criterion c(5, "injected features rank at the right ends of the NL scale");
    const int n_states = 30;
    const int users_per_state = 60;
    std::vector<feat::UserFeatures> features;
    std::vector<label::UserLabel> labels;
    int idx = 0;
    for (int s = 0; s < n_states; ++s) {
        for (int u = 0; u < users_per_state; ++u) {
            feat::UserFeatures f;
            f.user = "u" + std::to_string(idx);
            f.w["the"] = 5;
            f.w["and"] = 4;
            f.w["local_" + std::to_string(s)] = 2;
            f.w["uniform_injected"] = 1;
            if (s == 0) f.w["peaked_injected"] = 3;
            features.push_back(std::move(f));
            label::UserLabel l;
            l.user = "u" + std::to_string(idx);
            l.hierarchy.state = "state" + std::to_string(s);
            l.hierarchy.country = "country";
            l.hierarchy.continent = "continent";
            l.resolution = gaz::Resolution::state;
            l.coords = {10.0 + s, 10.0};
            labels.push_back(std::move(l));
            ++idx;
        }
    }
    feat::SelectionConfig cfg;
    cfg.stopwords = {"the", "and"};
    const feat::SelectionResult a = feat::select_features(features, labels, cfg);
    const feat::SelectionResult b = feat::select_features(features, labels, cfg);

    auto rank_of = [&a](const std::string& name) {
        for (std::size_t i = 0; i < a.word_ranking.ranked.size(); ++i) {
            if (a.word_ranking.ranked[i].first == name) return i;
        }
        return a.word_ranking.ranked.size();
    };
    const std::size_t n = a.word_ranking.ranked.size();
    c.check(rank_of("peaked_injected") < n / 10,
            "peaked feature rank " + std::to_string(rank_of("peaked_injected")) +
                " of " + std::to_string(n) + " not in the top decile");
    c.check(rank_of("uniform_injected") >= n - n / 10 - 1,
            "uniform feature rank " + std::to_string(rank_of("uniform_injected")) +
                " of " + std::to_string(n) + " not in the bottom decile");
    c.check(a.word_ranking.ranked == b.word_ranking.ranked,
            "two identical runs produced different rankings");
}

void criterion_6_median_oracle() {
    Criterion c(6, "geodesic median matches grid search; objective never regresses");
    Rng rng(606060);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double lat0 = rng.uniform(-55.0, 55.0);
        const double lon0 = rng.uniform(-150.0, 150.0);
        const double sigma = rng.uniform(0.3, 0.6);
        const int n = 5 + static_cast<int>(rng.uniform_int(21));
        std::vector<geo::GeoPoint> pts;
        for (int i = 0; i < n; ++i) {
            pts.push_back({lat0 + rng.normal() * sigma, lon0 + rng.normal() * sigma});
        }
        const geo::GeoPoint ours = geo::geodesic_median(pts);
        const geo::GeoPoint oracle = ref::geodesic_median_grid(pts, 0.01);
        worst = std::max(worst, geo::haversine_miles(ours, oracle));

        const double obj = geo::summed_distance_miles(ours, pts);
        for (const geo::GeoPoint& p : pts) {
            if (obj > geo::summed_distance_miles(p, pts) + 1e-6) {
                c.check(false, "objective regressed on trial " + std::to_string(trial));
                break;
            }
        }
    }
    c.check(worst < 5.0, "worst grid-oracle gap " + fmt(worst) + " mi >= 5 mi");
}

void criterion_7_transfer_fallback() {
    Criterion c(7, "disjoint-vocabulary transfer falls back to the MAP everywhere");
    synth::SyntheticSpec spec;
    spec.n_cities = 5;
    spec.users_per_city = 60;
    spec.history_comments_mean = 12;
    spec.seed = 777;
    PipelineCorpus source = run_pipeline(spec);

    eval::Corpus target = source.corpus;
    for (feat::UserFeatures& f : target.features) {
        std::map<std::string, double> w2, s2;
        for (const auto& [k, v] : f.w) w2["zz_" + k] = v;
        for (const auto& [k, v] : f.s) s2["zz_" + k] = v;
        f.w = std::move(w2);
        f.s = std::move(s2);
    }

    model::TrainConfig cfg;
    cfg.stopwords = synth_stopwords();
    cfg.min_cell_users = 50;
    const eval::TransferResult r =
        eval::run_transfer(source.corpus, target, cfg, {true, true, false});
    c.check(r.report.n_fallback == target.size(),
            std::to_string(r.report.n_fallback) + " of " +
                std::to_string(target.size()) + " users used the fallback");
    c.check(r.feature_overlap == 0.0,
            "expected zero feature overlap, got " + fmt(r.feature_overlap));
    // every prediction sits exactly at the baseline MAP point
    std::vector<double> expected;
    for (const label::UserLabel& l : target.labels) {
        expected.push_back(geo::haversine_miles(r.map_point, l.coords));
    }
    c.check(r.errors == expected, "predictions deviate from the MAP point");
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(GEOLOC_CLI_PATH) + " " + args + " >> " +
                            log.string() + " 2>&1";
    return std::system(cmd.c_str());
}

void criterion_8_end_to_end() {
    Criterion c(8, "CLI pipeline reaches Acc@100 >= 0.9 and reruns bit-identically");
    const fs::path base = scratch_dir();
    const fs::path log = base / "cli.log";

    nlohmann::json spec{{"n_cities", 5},
                        {"users_per_city", 200},
                        {"history_comments_mean", 30},
                        {"tau_shift_hours", 8.0},
                        {"subreddit_predictiveness", 0.9},
                        {"seed", 20250404}};
    const fs::path spec_path = base / "spec.json";
    {
        std::ofstream out(spec_path);
        out << spec.dump(2) << "\n";
    }

    auto run_chain = [&](const fs::path& dir) -> bool {
        fs::create_directories(dir);
        const std::string d = dir.string();
        const std::string data = GEOLOC_DATA_DIR;
        const std::vector<std::string> commands{
            "synth --spec " + spec_path.string() + " --out-dir " + d,
            "label --comments " + d + "/corpus.jsonl --seeds " + d +
                "/seeds.txt --gazetteer " + d + "/gazetteer_bundle.json --out " + d +
                "/labels.jsonl",
            "featurize --comments " + d + "/corpus.jsonl --labels " + d +
                "/labels.jsonl --max-comments 1000 --cutoff-days 31 "
                "--exclude-seed-comments --out " +
                d + "/features.jsonl",
            "select-features --features " + d + "/features.jsonl --labels " + d +
                "/labels.jsonl --k-words 150 --k-subreddits 20 --stopwords " + data +
                "/stopwords_130.txt --out " + d + "/vocab.tsv",
            "train --features " + d + "/features.jsonl --labels " + d +
                "/labels.jsonl --vocab " + d +
                "/vocab.tsv --modalities words,subreddits,temporal --seed 7 --out " +
                d + "/model.json",
            "predict --model " + d + "/model.json --features " + d +
                "/features.jsonl --out " + d + "/predictions.jsonl",
            "evaluate --pred " + d + "/predictions.jsonl --truth " + d +
                "/truth.jsonl --out " + d + "/report.json",
        };
        for (const std::string& cmd : commands) {
            if (run_cli(cmd, log) != 0) {
                c.check(false, "command failed: geoloc " + cmd.substr(0, 60) + "...");
                return false;
            }
        }
        return true;
    };

    const fs::path run1 = base / "e2e_run1";
    const fs::path run2 = base / "e2e_run2";
    if (!run_chain(run1)) return;

    nlohmann::json report;
    {
        std::ifstream in(run1 / "report.json");
        in >> report;
    }
    const double acc = report.at("aggregate").at("acc_at_100").get<double>();
    c.check(acc >= 0.9, "Acc@100 " + fmt(acc) + " < 0.9");

    if (!run_chain(run2)) return;
    for (const char* name : {"labels.jsonl", "features.jsonl", "vocab.tsv",
                             "model.json", "predictions.jsonl", "report.json"}) {
        if (read_file(run1 / name) != read_file(run2 / name)) {
            c.check(false, std::string(name) + " differs between identical runs");
        }
    }
    c.check(c.seconds() < 600.0, "runtime exceeded 10 min");
}

void criterion_9_metric_exactness() {
    Criterion c(9, "hand-constructed error multiset reports exact metrics");
    const eval::MetricReport r =
        eval::metrics_from_errors(std::vector<double>{0.0, 50.0, 150.0, 400.0});
    c.check(r.aed == 150.0, "AED " + fmt(r.aed) + " != 150");
    c.check(r.med == 100.0, "MED " + fmt(r.med) + " != 100");
    c.check(r.acc_at_100 == 0.5, "Acc@100 " + fmt(r.acc_at_100) + " != 0.5");
}

void criterion_10_persistence() {
    Criterion c(10, "save/load round-trip reproduces predictions on all fixtures");
    synth::SyntheticSpec spec;
    spec.n_cities = 6;
    spec.users_per_city = 40;
    spec.history_comments_mean = 12;
    spec.tau_shift_hours = 8.0;
    spec.seed = 1001;
    PipelineCorpus p = run_pipeline(spec);

    model::TrainConfig cfg;
    cfg.modalities = {true, true, true};
    cfg.stopwords = synth_stopwords();
    cfg.min_cell_users = 50;
    cfg.seed = 5;
    const model::GeoModel trained =
        model::train_geo_model(p.corpus.features, p.corpus.labels, cfg);

    const fs::path path = scratch_dir() / "persist_model.json";
    model_io::save_model(trained, path.string());
    const model::GeoModel loaded = model_io::load_model(path.string());

    for (bool temporal : {true, false}) {
        const auto before = model::predict_many(trained, p.corpus.features, temporal);
        const auto after = model::predict_many(loaded, p.corpus.features, temporal);
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (before[i].point.lat != after[i].point.lat ||
                before[i].point.lon != after[i].point.lon ||
                before[i].log_score != after[i].log_score ||
                before[i].used_fallback != after[i].used_fallback) {
                c.check(false, "prediction " + std::to_string(i) +
                                   " changed after round-trip");
                return;
            }
        }
    }
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";
    criterion_1_labeling_precision();
    criterion_2_eq1_oracle();
    criterion_3_dpmm_vs_gmm();
    criterion_4_temporal_modality();
    criterion_5_non_localness();
    criterion_6_median_oracle();
    criterion_7_transfer_fallback();
    criterion_8_end_to_end();
    criterion_9_metric_exactness();
    criterion_10_persistence();
    std::error_code ec;
    fs::remove_all(scratch_dir(), ec);
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
