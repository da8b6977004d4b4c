// Corpus ingestion and every on-disk format the pipeline commands
// exchange: JSONL corpora/labels/features/predictions, vocabulary files,
// seed lists, gazetteer bundles, reports, and audit worksheets.

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geoloc/eval.hpp"

namespace geoloc::corpus {

struct CorpusRecord {
    std::string id;
    std::string user;
    std::string body;
    std::string subreddit;
    std::string parent_kind;  // "submission" or "comment"
    std::string submission_id;
    std::int64_t created_utc = 0;
};

struct IngestResult {
    std::vector<CorpusRecord> records;
    std::vector<std::size_t> skipped_lines;  // 1-based line numbers
};

// JSONL, one record per line. Malformed lines are skipped and counted;
// records missing an id get "line<N>".
IngestResult ingest(const std::string& path);

extract::Comment to_comment(const CorpusRecord& r);
std::vector<extract::Comment> to_comments(std::span<const CorpusRecord> records);

// ---- labels ----------------------------------------------------------
void write_labels(std::span<const label::UserLabel> labels, const std::string& path);
std::vector<label::UserLabel> read_labels(const std::string& path);

// ---- features --------------------------------------------------------
void write_features(std::span<const feat::UserFeatures> features,
                    const std::string& path);
std::vector<feat::UserFeatures> read_features(const std::string& path);

// ---- vocabulary (one namespaced feature per line, with NL score) ------
struct VocabEntry {
    std::string key;  // "w:token" or "s:subreddit"
    double score = 0.0;
};
void write_vocab(std::span<const VocabEntry> entries, const std::string& path);
std::vector<VocabEntry> read_vocab(const std::string& path);

// ---- predictions ------------------------------------------------------
struct PredictionRow {
    std::string user;
    geo::GeoPoint point;
    double log_score = 0.0;
    bool fallback = false;
};
void write_predictions(std::span<const PredictionRow> rows, const std::string& path);
std::vector<PredictionRow> read_predictions(const std::string& path);

// ---- seeds -------------------------------------------------------------
std::set<std::string> read_seeds(const std::string& path);
void write_seeds(const std::set<std::string>& seeds, const std::string& path);

// ---- compiled gazetteer bundle -----------------------------------------
struct GazetteerBundle {
    gaz::Gazetteer gazetteer;
    gaz::AbbreviationTable abbreviations;
    std::vector<std::string> removed_words;
};
void save_gazetteer_bundle(const GazetteerBundle& bundle, const std::string& path);
GazetteerBundle load_gazetteer_bundle(const std::string& path);

// ---- reports -----------------------------------------------------------
std::string report_table(const eval::MetricReport& aggregate,
                         std::span<const eval::FoldReport> folds);
void write_report(const eval::MetricReport& aggregate,
                  std::span<const eval::FoldReport> folds, const std::string& path,
                  double feature_overlap = -1.0);
void write_errors_csv(std::span<const double> errors, const std::string& path);

// ---- audit worksheet (CSV) ----------------------------------------------
void write_audit_csv(std::span<const eval::AuditRow> rows, const std::string& path);
std::vector<eval::AuditRow> read_audit_csv(const std::string& path);

}  // namespace geoloc::corpus
