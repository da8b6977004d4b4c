// Metrics, cross-validation, the transfer harness, and the audit
// worksheet used to hand-score labeling precision.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoloc/model.hpp"

namespace geoloc::eval {

struct MetricReport {
    double aed = 0.0;         // mean error, miles
    double med = 0.0;         // median error, miles
    double acc_at_100 = 0.0;  // fraction strictly under 100 miles
    std::size_t n_users = 0;
    std::size_t n_fallback = 0;
};

// AED / MED / Acc@100 over aligned prediction/truth lists.
MetricReport metrics(std::span<const geo::GeoPoint> pred,
                     std::span<const geo::GeoPoint> truth);
MetricReport metrics_from_errors(std::span<const double> errors_miles);

// Seeded shuffle then contiguous split; fold sizes differ by at most 1.
std::vector<std::vector<std::size_t>> kfold(std::size_t n, int k, std::uint64_t seed);

// featurized corpus: features[i] belongs to labels[i]
struct Corpus {
    std::vector<feat::UserFeatures> features;
    std::vector<label::UserLabel> labels;

    std::size_t size() const { return labels.size(); }
};

// keep only users from the contiguous-US scope ("us") or everyone ("global")
Corpus filter_scope(const Corpus& corpus, const std::string& scope);

struct ExperimentSpec {
    std::string train_corpus;
    std::string test_corpus;
    model::Modalities modalities;
    int folds = 5;
    std::uint64_t seed = 0;
};

struct FoldReport {
    MetricReport report;
    std::vector<double> errors;  // per held-out user, miles
};

struct CvResult {
    std::vector<FoldReport> folds;
    MetricReport aggregate;  // pooled per-user errors, not fold means
};

CvResult run_cv(const Corpus& corpus, const ExperimentSpec& spec,
                const model::TrainConfig& base_config);

struct TransferResult {
    MetricReport report;
    double feature_overlap = 0.0;  // fraction of source vocab seen in target
    geo::GeoPoint map_point;
    std::vector<double> errors;
};

TransferResult run_transfer(const Corpus& train, const Corpus& test,
                            const model::TrainConfig& base_config,
                            const model::Modalities& modalities);

struct AuditRow {
    std::string user;
    std::string comment_id;
    std::string comment_text;
    std::string extracted;   // hierarchy display
    std::string resolution;
    std::string correct;             // verdict column, blank when unscored
    std::string correct_resolution;  // verdict column
};

// Seeded sample of labeled users with their evidence comment, written as
// a worksheet with blank verdict columns.
std::vector<AuditRow> audit_sample(std::span<const label::UserLabel> labels,
                                   std::span<const extract::Comment> comments,
                                   std::size_t n, std::uint64_t seed);

struct AuditScore {
    std::size_t n_rows = 0;
    std::size_t n_scored = 0;
    std::size_t n_correct = 0;
    std::size_t n_correct_resolution = 0;
    double precision = 0.0;            // correct / scored
    double resolution_accuracy = 0.0;  // correct resolution / correct
};

// companion scorer over filled-in verdict columns
AuditScore score_audit(std::span<const AuditRow> rows);

}  // namespace geoloc::eval
