// geoloc: end-to-end command surface for the geolocation pipeline.
// Commands compose through files only; every seeded command is
// reproducible. Exit codes: 0 success, 2 validation error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoloc/corpus.hpp"
#include "geoloc/strings.hpp"
#include "geoloc/eval.hpp"
#include "geoloc/model_io.hpp"
#include "geoloc/synth.hpp"

namespace {

using namespace geoloc;

int log_level() {
    const char* env = std::getenv("GEOLOC_LOG");
    if (env == nullptr) return 1;
    const std::string v = to_lower(env);
    if (v == "quiet" || v == "off" || v == "0") return 0;
    if (v == "debug" || v == "2") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[geoloc] " << msg << "\n";
}

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

model::Modalities parse_modalities(const std::string& csv) {
    model::Modalities m{false, false, false};
    for (const std::string& part : split(csv, ',')) {
        const std::string p = to_lower(trim(part));
        if (p == "words") m.words = true;
        else if (p == "subreddits") m.subreddits = true;
        else if (p == "temporal") m.temporal = true;
        else if (!p.empty()) throw ValidationError("unknown modality: " + p);
    }
    if (!m.words && !m.subreddits && !m.temporal) {
        throw ValidationError("modalities must not be empty");
    }
    return m;
}

// join features and labels on user id, label order
eval::Corpus align_corpus(const eval::Corpus& in) {
    std::map<std::string, const feat::UserFeatures*> by_user;
    for (const feat::UserFeatures& f : in.features) by_user[f.user] = &f;
    eval::Corpus out;
    for (const label::UserLabel& l : in.labels) {
        auto it = by_user.find(l.user);
        if (it == by_user.end()) continue;
        out.features.push_back(*it->second);
        out.labels.push_back(l);
    }
    return out;
}

// corpus bundle argument: a directory holding features.jsonl/labels.jsonl
// or a JSON manifest {"features": ..., "labels": ...}
eval::Corpus load_corpus_arg(const std::string& path) {
    namespace fs = std::filesystem;
    std::string features_path;
    std::string labels_path;
    if (fs::is_directory(path)) {
        features_path = (fs::path(path) / "features.jsonl").string();
        labels_path = (fs::path(path) / "labels.jsonl").string();
    } else {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open corpus manifest: " + path);
        nlohmann::json j;
        in >> j;
        features_path = j.at("features").get<std::string>();
        labels_path = j.at("labels").get<std::string>();
    }
    eval::Corpus corpus;
    corpus.features = corpus::read_features(features_path);
    corpus.labels = corpus::read_labels(labels_path);
    return align_corpus(corpus);
}

struct CommonTrainFlags {
    std::string kind = "dpmm";
    std::string covariance = "diagonal";
    int components = 5;
    int min_support = 3;
    std::size_t min_cell_users = 50;
    int threads = 0;
};

void apply_train_flags(model::TrainConfig& cfg, const CommonTrainFlags& flags) {
    if (flags.kind == "gmm") cfg.density_kind = model::MixtureKind::gmm;
    else if (flags.kind == "dpmm") cfg.density_kind = model::MixtureKind::dpmm;
    else throw ValidationError("unknown density kind: " + flags.kind);
    if (flags.covariance == "spherical") {
        cfg.density_fit.covariance = model::CovarianceKind::spherical;
    } else if (flags.covariance == "diagonal") {
        cfg.density_fit.covariance = model::CovarianceKind::diagonal;
    } else {
        throw ValidationError("unknown covariance kind: " + flags.covariance);
    }
    cfg.density_fit.max_components = flags.components;
    cfg.min_feature_support = flags.min_support;
    cfg.min_cell_users = flags.min_cell_users;
    cfg.threads = flags.threads;
}

int run(int argc, char** argv) {
    CLI::App app{"gazetteer-based user geolocation pipeline"};
    app.require_subcommand(1);

    // ---- gazetteer build -------------------------------------------------
    auto* gazetteer_cmd = app.add_subcommand("gazetteer", "gazetteer utilities");
    gazetteer_cmd->require_subcommand(1);
    auto* build = gazetteer_cmd->add_subcommand(
        "build", "compile a place file into a gazetteer bundle");
    std::string b_geonames, b_common, b_abbrevs, b_out;
    std::int64_t b_minpop = 15000;
    bool b_no_alt = false;
    build->add_option("--geonames", b_geonames, "tab-separated place file")->required();
    build->add_option("--common-words", b_common, "common-word exclusion list")
        ->required();
    build->add_option("--abbrevs", b_abbrevs, "abbreviation table csv")->required();
    build->add_option("--min-pop", b_minpop, "population threshold");
    build->add_option("--out", b_out, "output bundle path")->required();
    build->add_flag("--no-alt-names", b_no_alt, "ignore alternate names");
    build->callback([&]() {
        gaz::Gazetteer g = gaz::load_gazetteer(b_geonames, b_minpop, !b_no_alt);
        const gaz::LoadStats& stats = g.load_stats();
        log_info("loaded " + std::to_string(stats.rows_kept) + " places (" +
                 std::to_string(stats.rows_below_population) + " under threshold, " +
                 std::to_string(stats.rows_malformed) + " malformed)");
        std::vector<std::string> common = gaz::load_word_list(b_common);
        gaz::FilterResult filtered = gaz::filter_common_words(g, common);
        log_info("removed " + std::to_string(filtered.removed.size()) +
                 " common-word place names");
        corpus::GazetteerBundle bundle;
        bundle.gazetteer = std::move(filtered.gazetteer);
        bundle.abbreviations = gaz::load_abbreviations(b_abbrevs);
        bundle.removed_words = std::move(filtered.removed);
        corpus::save_gazetteer_bundle(bundle, b_out);
        log_info("bundle written to " + b_out);
    });

    // ---- label -----------------------------------------------------------
    auto* label_cmd = app.add_subcommand("label", "label users from seed comments");
    std::string l_comments, l_seeds, l_gazetteer, l_bias, l_out, l_audit_out;
    std::size_t l_audit_n = 0;
    std::uint64_t l_seed = 0;
    int l_threads = 0;
    label_cmd->add_option("--comments", l_comments)->required();
    label_cmd->add_option("--seeds", l_seeds)->required();
    label_cmd->add_option("--gazetteer", l_gazetteer, "gazetteer bundle")->required();
    label_cmd->add_option("--region-bias", l_bias, "subreddit,scope csv");
    label_cmd->add_option("--out", l_out)->required();
    label_cmd->add_option("--audit-sample", l_audit_n, "write an audit worksheet");
    label_cmd->add_option("--seed", l_seed, "audit sample seed");
    label_cmd->add_option("--audit-out", l_audit_out, "worksheet path");
    label_cmd->add_option("--threads", l_threads);
    label_cmd->callback([&]() {
        corpus::IngestResult ingested = corpus::ingest(l_comments);
        if (!ingested.skipped_lines.empty()) {
            const std::string sidecar = l_comments + ".skipped";
            std::ofstream side(sidecar);
            for (std::size_t line : ingested.skipped_lines) side << line << "\n";
            log_info(std::to_string(ingested.skipped_lines.size()) +
                     " malformed lines skipped (see " + sidecar + ")");
        }
        const std::vector<extract::Comment> comments =
            corpus::to_comments(ingested.records);
        const std::set<std::string> seeds = corpus::read_seeds(l_seeds);
        const corpus::GazetteerBundle bundle =
            corpus::load_gazetteer_bundle(l_gazetteer);
        label::RegionBias bias;
        if (!l_bias.empty()) bias = label::load_region_bias(l_bias);
        label::LabelResult result =
            label::label_corpus(comments, seeds, bundle.gazetteer,
                                bundle.abbreviations, bias, l_threads);
        corpus::write_labels(result.labels, l_out);
        const label::LabelStats& s = result.stats;
        log_info("comments: " + std::to_string(s.comments_total) + " total, " +
                 std::to_string(s.comments_in_seeds) + " in seeds, " +
                 std::to_string(s.comments_kept) + " kept");
        log_info("mentions: " + std::to_string(s.mentions_found) + " found, " +
                 std::to_string(s.mentions_unresolvable) + " unresolvable");
        log_info("users: " + std::to_string(s.users_labeled) + " labeled, " +
                 std::to_string(s.users_dropped_inconsistent) +
                 " dropped (inconsistent), " +
                 std::to_string(s.users_dropped_no_mentions) +
                 " dropped (no mentions)");
        if (l_audit_n > 0) {
            const std::string path =
                l_audit_out.empty() ? l_out + ".audit.csv" : l_audit_out;
            std::vector<eval::AuditRow> rows =
                eval::audit_sample(result.labels, comments, l_audit_n, l_seed);
            corpus::write_audit_csv(rows, path);
            log_info("audit worksheet (" + std::to_string(rows.size()) +
                     " rows) written to " + path);
        }
    });

    // ---- featurize ---------------------------------------------------------
    auto* feat_cmd = app.add_subcommand("featurize", "build per-user features");
    std::string f_comments, f_labels, f_out;
    std::size_t f_max = 1000;
    int f_cutoff_days = 31;
    bool f_exclude_seeds = false;
    feat_cmd->add_option("--comments", f_comments)->required();
    feat_cmd->add_option("--labels", f_labels)->required();
    feat_cmd->add_option("--max-comments", f_max);
    feat_cmd->add_option("--cutoff-days", f_cutoff_days);
    feat_cmd->add_flag("--exclude-seed-comments", f_exclude_seeds);
    feat_cmd->add_option("--out", f_out)->required();
    feat_cmd->callback([&]() {
        corpus::IngestResult ingested = corpus::ingest(f_comments);
        const std::vector<label::UserLabel> labels = corpus::read_labels(f_labels);
        std::map<std::string, std::vector<extract::Comment>> by_user;
        for (const corpus::CorpusRecord& r : ingested.records) {
            by_user[r.user].push_back(corpus::to_comment(r));
        }
        std::vector<feat::UserFeatures> features;
        std::size_t empty_users = 0;
        for (const label::UserLabel& l : labels) {
            auto it = by_user.find(l.user);
            if (it == by_user.end()) {
                ++empty_users;
                continue;
            }
            std::set<std::string> exclude;
            if (f_exclude_seeds) {
                for (const label::Evidence& e : l.evidence) {
                    exclude.insert(e.comment_id);
                }
            }
            const std::int64_t cutoff =
                l.label_utc + static_cast<std::int64_t>(f_cutoff_days) * 86400;
            feat::UserFeatures f =
                feat::featurize_user(it->second, f_max, cutoff, exclude);
            f.user = l.user;
            if (f.empty()) {
                ++empty_users;
                continue;
            }
            features.push_back(std::move(f));
        }
        corpus::write_features(features, f_out);
        log_info(std::to_string(features.size()) + " users featurized, " +
                 std::to_string(empty_users) + " empty after filtering");
    });

    // ---- select-features -----------------------------------------------------
    auto* sel_cmd = app.add_subcommand("select-features",
                                       "rank features by non-localness");
    std::string s_features, s_labels, s_stopwords, s_out;
    std::size_t s_kw = 0, s_ks = 0, s_min_cell = 50;
    int s_threads = 0;
    sel_cmd->add_option("--features", s_features)->required();
    sel_cmd->add_option("--labels", s_labels)->required();
    sel_cmd->add_option("--k-words", s_kw)->required();
    sel_cmd->add_option("--k-subreddits", s_ks)->required();
    sel_cmd->add_option("--stopwords", s_stopwords)->required();
    sel_cmd->add_option("--min-cell-users", s_min_cell);
    sel_cmd->add_option("--threads", s_threads);
    sel_cmd->add_option("--out", s_out)->required();
    sel_cmd->callback([&]() {
        eval::Corpus corpus_data;
        corpus_data.features = corpus::read_features(s_features);
        corpus_data.labels = corpus::read_labels(s_labels);
        corpus_data = align_corpus(corpus_data);
        feat::SelectionConfig cfg;
        cfg.k_words = s_kw;
        cfg.k_subreddits = s_ks;
        cfg.stopwords = gaz::load_word_list(s_stopwords);
        cfg.min_cell_users = s_min_cell;
        cfg.threads = s_threads;
        feat::SelectionResult sel =
            feat::select_features(corpus_data.features, corpus_data.labels, cfg);
        std::map<std::string, double> scores;
        for (const auto& [name, score] : sel.word_ranking.ranked) {
            scores[model::word_key(name)] = score;
        }
        for (const auto& [name, score] : sel.subreddit_ranking.ranked) {
            scores[model::subreddit_key(name)] = score;
        }
        std::vector<corpus::VocabEntry> entries;
        for (const std::string& w : sel.words) {
            entries.push_back({model::word_key(w), scores[model::word_key(w)]});
        }
        for (const std::string& s : sel.subreddits) {
            entries.push_back(
                {model::subreddit_key(s), scores[model::subreddit_key(s)]});
        }
        corpus::write_vocab(entries, s_out);
        log_info(std::to_string(sel.words.size()) + " words + " +
                 std::to_string(sel.subreddits.size()) + " subreddits selected");
    });

    // ---- train -------------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "fit the location model");
    std::string t_features, t_labels, t_vocab, t_modalities = "words,subreddits,temporal";
    std::string t_out;
    std::uint64_t t_seed = 0;
    CommonTrainFlags t_flags;
    train_cmd->add_option("--features", t_features)->required();
    train_cmd->add_option("--labels", t_labels)->required();
    train_cmd->add_option("--vocab", t_vocab)->required();
    train_cmd->add_option("--modalities", t_modalities);
    train_cmd->add_option("--seed", t_seed);
    train_cmd->add_option("--out", t_out)->required();
    train_cmd->add_option("--kind", t_flags.kind, "dpmm|gmm");
    train_cmd->add_option("--covariance", t_flags.covariance, "diagonal|spherical");
    train_cmd->add_option("--components", t_flags.components);
    train_cmd->add_option("--min-support", t_flags.min_support);
    train_cmd->add_option("--threads", t_flags.threads);
    train_cmd->callback([&]() {
        model::TrainConfig cfg;
        cfg.modalities = parse_modalities(t_modalities);
        cfg.seed = t_seed;
        apply_train_flags(cfg, t_flags);
        eval::Corpus corpus_data;
        corpus_data.features = corpus::read_features(t_features);
        corpus_data.labels = corpus::read_labels(t_labels);
        corpus_data = align_corpus(corpus_data);
        model::PreselectedVocab vocab;
        for (const corpus::VocabEntry& e : corpus::read_vocab(t_vocab)) {
            if (e.key.rfind("w:", 0) == 0) vocab.words.push_back(e.key.substr(2));
            else if (e.key.rfind("s:", 0) == 0) vocab.subreddits.push_back(e.key.substr(2));
        }
        cfg.preselected = std::move(vocab);
        model::GeoModel m =
            model::train_geo_model(corpus_data.features, corpus_data.labels, cfg);
        model_io::save_model(m, t_out);
        log_info("model with " + std::to_string(m.densities.densities.size()) +
                 " feature densities, " + std::to_string(m.candidates.size()) +
                 " candidates written to " + t_out);
    });

    // ---- predict -------------------------------------------------------------
    auto* pred_cmd = app.add_subcommand("predict", "predict user locations");
    std::string p_model, p_features, p_out;
    bool p_no_temporal = false;
    int p_threads = 0;
    pred_cmd->add_option("--model", p_model)->required();
    pred_cmd->add_option("--features", p_features)->required();
    pred_cmd->add_option("--out", p_out)->required();
    pred_cmd->add_flag("--no-temporal", p_no_temporal);
    pred_cmd->add_option("--threads", p_threads);
    pred_cmd->callback([&]() {
        const model::GeoModel m = model_io::load_model(p_model);
        const std::vector<feat::UserFeatures> features =
            corpus::read_features(p_features);
        const std::vector<model::Prediction> preds = model::predict_many(
            m, features, m.modalities.temporal && !p_no_temporal, p_threads);
        std::vector<corpus::PredictionRow> rows;
        rows.reserve(preds.size());
        for (std::size_t i = 0; i < preds.size(); ++i) {
            rows.push_back({features[i].user, preds[i].point, preds[i].log_score,
                            preds[i].used_fallback});
        }
        corpus::write_predictions(rows, p_out);
        log_info(std::to_string(rows.size()) + " predictions written to " + p_out);
    });

    // ---- evaluate ---------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("evaluate", "score predictions");
    std::string e_pred, e_truth, e_out, e_csv;
    eval_cmd->add_option("--pred", e_pred)->required();
    eval_cmd->add_option("--truth", e_truth)->required();
    eval_cmd->add_option("--out", e_out)->required();
    eval_cmd->add_option("--per-user-csv", e_csv);
    eval_cmd->callback([&]() {
        const std::vector<corpus::PredictionRow> preds =
            corpus::read_predictions(e_pred);
        const std::vector<label::UserLabel> truth = corpus::read_labels(e_truth);
        std::map<std::string, geo::GeoPoint> truth_by_user;
        for (const label::UserLabel& l : truth) truth_by_user[l.user] = l.coords;
        std::vector<double> errors;
        std::size_t fallback = 0;
        for (const corpus::PredictionRow& p : preds) {
            auto it = truth_by_user.find(p.user);
            if (it == truth_by_user.end()) {
                throw ValidationError("prediction for unknown user: " + p.user);
            }
            errors.push_back(geo::haversine_miles(p.point, it->second));
            if (p.fallback) ++fallback;
        }
        eval::MetricReport report = eval::metrics_from_errors(errors);
        report.n_fallback = fallback;
        corpus::write_report(report, {}, e_out);
        if (!e_csv.empty()) corpus::write_errors_csv(errors, e_csv);
        std::cout << corpus::report_table(report, {});
    });

    // ---- crossval -------------------------------------------------------------
    auto* cv_cmd = app.add_subcommand("crossval", "k-fold cross validation");
    std::string c_config, c_out, c_errors_csv;
    int c_folds = 5;
    std::uint64_t c_seed = 0;
    int c_threads = 0;
    cv_cmd->add_option("--config", c_config)->required();
    cv_cmd->add_option("--folds", c_folds);
    cv_cmd->add_option("--seed", c_seed);
    cv_cmd->add_option("--threads", c_threads);
    cv_cmd->add_option("--per-user-csv", c_errors_csv);
    cv_cmd->add_option("--out", c_out)->required();
    cv_cmd->callback([&]() {
        std::ifstream in(c_config);
        if (!in) throw ValidationError("cannot open config: " + c_config);
        nlohmann::json j;
        in >> j;
        eval::Corpus corpus_data;
        corpus_data.features =
            corpus::read_features(j.at("features").get<std::string>());
        corpus_data.labels = corpus::read_labels(j.at("labels").get<std::string>());
        corpus_data = align_corpus(corpus_data);
        if (j.contains("scope")) {
            corpus_data =
                eval::filter_scope(corpus_data, j.at("scope").get<std::string>());
        }
        model::TrainConfig cfg;
        cfg.k_words = j.value("k_words", 0);
        cfg.k_subreddits = j.value("k_subreddits", 0);
        if (j.contains("stopwords")) {
            cfg.stopwords = gaz::load_word_list(j.at("stopwords"));
        }
        cfg.min_cell_users = j.value("min_cell_users", 50);
        cfg.min_feature_support = j.value("min_feature_support", 3);
        cfg.density_kind = j.value("kind", std::string("dpmm")) == "gmm"
                               ? model::MixtureKind::gmm
                               : model::MixtureKind::dpmm;
        cfg.density_fit.max_components = j.value("components", 5);
        cfg.threads = c_threads;
        eval::ExperimentSpec spec;
        spec.modalities = parse_modalities(
            j.value("modalities", std::string("words,subreddits,temporal")));
        spec.folds = c_folds;
        spec.seed = c_seed;
        eval::CvResult result = eval::run_cv(corpus_data, spec, cfg);
        corpus::write_report(result.aggregate, result.folds, c_out);
        if (!c_errors_csv.empty()) {
            std::vector<double> pooled;
            for (const eval::FoldReport& f : result.folds) {
                pooled.insert(pooled.end(), f.errors.begin(), f.errors.end());
            }
            corpus::write_errors_csv(pooled, c_errors_csv);
        }
        std::cout << corpus::report_table(result.aggregate, result.folds);
    });

    // ---- transfer -------------------------------------------------------------
    auto* tr_cmd = app.add_subcommand("transfer", "cross-domain evaluation");
    std::string tr_train, tr_test, tr_modalities = "words,subreddits,temporal";
    std::string tr_scope = "global", tr_out, tr_stopwords;
    std::size_t tr_kw = 0, tr_ks = 0;
    std::uint64_t tr_seed = 0;
    CommonTrainFlags tr_flags;
    tr_cmd->add_option("--train-corpus", tr_train)->required();
    tr_cmd->add_option("--test-corpus", tr_test)->required();
    tr_cmd->add_option("--modalities", tr_modalities);
    tr_cmd->add_option("--scope", tr_scope, "us|global");
    tr_cmd->add_option("--k-words", tr_kw);
    tr_cmd->add_option("--k-subreddits", tr_ks);
    tr_cmd->add_option("--stopwords", tr_stopwords);
    tr_cmd->add_option("--seed", tr_seed);
    tr_cmd->add_option("--min-cell-users", tr_flags.min_cell_users);
    tr_cmd->add_option("--threads", tr_flags.threads);
    tr_cmd->add_option("--out", tr_out)->required();
    tr_cmd->callback([&]() {
        if (tr_scope != "us" && tr_scope != "global") {
            throw ValidationError("scope must be us or global");
        }
        eval::Corpus train = load_corpus_arg(tr_train);
        const eval::Corpus test = load_corpus_arg(tr_test);
        train = eval::filter_scope(train, tr_scope);
        model::TrainConfig cfg;
        cfg.k_words = tr_kw;
        cfg.k_subreddits = tr_ks;
        if (!tr_stopwords.empty()) cfg.stopwords = gaz::load_word_list(tr_stopwords);
        cfg.seed = tr_seed;
        apply_train_flags(cfg, tr_flags);
        const model::Modalities modalities = parse_modalities(tr_modalities);
        eval::TransferResult result = eval::run_transfer(train, test, cfg, modalities);
        corpus::write_report(result.report, {}, tr_out, result.feature_overlap);
        std::cout << corpus::report_table(result.report, {});
        log_info("feature overlap: " + std::to_string(result.feature_overlap) +
                 ", fallback users: " + std::to_string(result.report.n_fallback));
    });

    // ---- synth -------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string sy_spec, sy_out;
    synth_cmd->add_option("--spec", sy_spec)->required();
    synth_cmd->add_option("--out-dir", sy_out)->required();
    synth_cmd->callback([&]() {
        const synth::SyntheticSpec spec = synth::spec_from_json_file(sy_spec);
        const synth::SyntheticCorpus c = synth::generate_synthetic(spec);
        synth::write_synthetic(c, sy_out);
        log_info(std::to_string(c.records.size()) + " comments, " +
                 std::to_string(c.truth.size()) + " users written to " + sy_out);
    });

    // ---- audit-score ----------------------------------------------------------
    auto* audit_cmd = app.add_subcommand("audit-score", "score a filled worksheet");
    std::string a_sheet, a_out;
    audit_cmd->add_option("--worksheet", a_sheet)->required();
    audit_cmd->add_option("--out", a_out);
    audit_cmd->callback([&]() {
        const std::vector<eval::AuditRow> rows = corpus::read_audit_csv(a_sheet);
        const eval::AuditScore score = eval::score_audit(rows);
        std::cout << "rows: " << score.n_rows << "  scored: " << score.n_scored
                  << "\nprecision: " << score.precision
                  << "\nresolution accuracy: " << score.resolution_accuracy << "\n";
        if (!a_out.empty()) {
            nlohmann::json j{{"n_rows", score.n_rows},
                             {"n_scored", score.n_scored},
                             {"n_correct", score.n_correct},
                             {"n_correct_resolution", score.n_correct_resolution},
                             {"precision", score.precision},
                             {"resolution_accuracy", score.resolution_accuracy}};
            std::ofstream out(a_out);
            out << j.dump(2) << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help -> 0, bad usage -> validation error
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
