#include "geoloc/corpus.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "geoloc/strings.hpp"

namespace geoloc::corpus {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

json hierarchy_to_json(const gaz::LocationHierarchy& h) {
    return json{{"city", h.city},
                {"county", h.county},
                {"state", h.state},
                {"country", h.country},
                {"continent", h.continent}};
}

gaz::LocationHierarchy hierarchy_from_json(const json& j) {
    gaz::LocationHierarchy h;
    h.city = j.value("city", "");
    h.county = j.value("county", "");
    h.state = j.value("state", "");
    h.country = j.value("country", "");
    h.continent = j.value("continent", "");
    return h;
}

// minimal RFC-4180 style quoting
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::vector<std::string> csv_parse_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

IngestResult ingest(const std::string& path) {
    std::ifstream in = open_in(path);
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            result.skipped_lines.push_back(line_no);
            continue;
        }
        CorpusRecord r;
        try {
            r.user = j.at("user").get<std::string>();
            r.body = j.at("body").get<std::string>();
            r.subreddit = j.at("subreddit").get<std::string>();
            r.submission_id = j.at("submission_id").get<std::string>();
            r.parent_kind = j.value("parent_kind", "submission");
            if (j.at("created_utc").is_number()) {
                r.created_utc = j.at("created_utc").get<std::int64_t>();
            } else {
                r.created_utc = std::stoll(j.at("created_utc").get<std::string>());
            }
            r.id = j.value("id", "line" + std::to_string(line_no));
        } catch (const std::exception&) {
            result.skipped_lines.push_back(line_no);
            continue;
        }
        if (r.user.empty() || r.created_utc <= 0) {
            result.skipped_lines.push_back(line_no);
            continue;
        }
        result.records.push_back(std::move(r));
    }
    return result;
}

extract::Comment to_comment(const CorpusRecord& r) {
    extract::Comment c;
    c.id = r.id;
    c.user = r.user;
    c.body = r.body;
    c.subreddit = to_lower(r.subreddit);
    c.created_utc = r.created_utc;
    c.is_reply = r.parent_kind == "comment";
    c.submission_id = r.submission_id;
    return c;
}

std::vector<extract::Comment> to_comments(std::span<const CorpusRecord> records) {
    std::vector<extract::Comment> out;
    out.reserve(records.size());
    for (const CorpusRecord& r : records) out.push_back(to_comment(r));
    return out;
}

void write_labels(std::span<const label::UserLabel> labels, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const label::UserLabel& l : labels) {
        json j{{"user", l.user},
               {"city", l.hierarchy.city},
               {"county", l.hierarchy.county},
               {"state", l.hierarchy.state},
               {"country", l.hierarchy.country},
               {"continent", l.hierarchy.continent},
               {"resolution", std::string(gaz::resolution_name(l.resolution))},
               {"lat", l.coords.lat},
               {"lon", l.coords.lon},
               {"label_utc", l.label_utc}};
        json ev = json::array();
        for (const label::Evidence& e : l.evidence) {
            ev.push_back(json{{"comment_id", e.comment_id},
                              {"mention", join(e.mention.tokens, ' ')},
                              {"source", std::string(extract::source_rule_name(
                                             e.mention.source_rule))}});
        }
        j["evidence"] = std::move(ev);
        out << j.dump() << "\n";
    }
}

std::vector<label::UserLabel> read_labels(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<label::UserLabel> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw std::runtime_error(path + ": malformed label line " +
                                     std::to_string(line_no));
        }
        label::UserLabel l;
        l.user = j.at("user").get<std::string>();
        l.hierarchy = hierarchy_from_json(j);
        auto res = gaz::resolution_from_name(j.value("resolution", ""));
        l.resolution = res ? *res : l.hierarchy.resolution();
        l.coords = {j.at("lat").get<double>(), j.at("lon").get<double>()};
        l.label_utc = j.value("label_utc", static_cast<std::int64_t>(0));
        if (j.contains("evidence")) {
            for (const json& ej : j.at("evidence")) {
                label::Evidence e;
                e.comment_id = ej.value("comment_id", "");
                e.mention.tokens = split(ej.value("mention", ""), ' ');
                l.evidence.push_back(std::move(e));
            }
        }
        labels.push_back(std::move(l));
    }
    return labels;
}

void write_features(std::span<const feat::UserFeatures> features,
                    const std::string& path) {
    std::ofstream out = open_out(path);
    for (const feat::UserFeatures& f : features) {
        json j{{"user", f.user}};
        json w = json::object();
        for (const auto& [tok, c] : f.w) w[tok] = c;
        json s = json::object();
        for (const auto& [sub, c] : f.s) s[sub] = c;
        j["w"] = std::move(w);
        j["s"] = std::move(s);
        j["tau"] = f.tau;
        out << j.dump() << "\n";
    }
}

std::vector<feat::UserFeatures> read_features(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<feat::UserFeatures> features;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw std::runtime_error(path + ": malformed feature line " +
                                     std::to_string(line_no));
        }
        feat::UserFeatures f;
        f.user = j.at("user").get<std::string>();
        for (const auto& [tok, c] : j.at("w").items()) f.w[tok] = c.get<double>();
        for (const auto& [sub, c] : j.at("s").items()) f.s[sub] = c.get<double>();
        const json& tau = j.at("tau");
        if (tau.size() != 24) {
            throw std::runtime_error(path + ": tau must have 24 entries, line " +
                                     std::to_string(line_no));
        }
        for (std::size_t i = 0; i < 24; ++i) f.tau[i] = tau[i].get<std::int64_t>();
        features.push_back(std::move(f));
    }
    return features;
}

void write_vocab(std::span<const VocabEntry> entries, const std::string& path) {
    std::ofstream out = open_out(path);
    out << std::setprecision(17);
    for (const VocabEntry& e : entries) {
        out << e.key << "\t" << e.score << "\n";
    }
}

std::vector<VocabEntry> read_vocab(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<VocabEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        VocabEntry e;
        if (tab == std::string::npos) {
            e.key = trim(line);
        } else {
            e.key = trim(line.substr(0, tab));
            e.score = std::stod(line.substr(tab + 1));
        }
        if (!e.key.empty()) entries.push_back(std::move(e));
    }
    return entries;
}

void write_predictions(std::span<const PredictionRow> rows, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const PredictionRow& r : rows) {
        json j{{"user", r.user},
               {"lat", r.point.lat},
               {"lon", r.point.lon},
               {"log_score", r.log_score},
               {"fallback", r.fallback}};
        out << j.dump() << "\n";
    }
}

std::vector<PredictionRow> read_predictions(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<PredictionRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line);
        PredictionRow r;
        r.user = j.at("user").get<std::string>();
        r.point = {j.at("lat").get<double>(), j.at("lon").get<double>()};
        r.log_score = j.value("log_score", 0.0);
        r.fallback = j.value("fallback", false);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::set<std::string> read_seeds(const std::string& path) {
    std::ifstream in = open_in(path);
    std::set<std::string> seeds;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty()) seeds.insert(t);
    }
    return seeds;
}

void write_seeds(const std::set<std::string>& seeds, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const std::string& s : seeds) out << s << "\n";
}

void save_gazetteer_bundle(const GazetteerBundle& bundle, const std::string& path) {
    json entries = json::array();
    for (const gaz::GazetteerEntry& e : bundle.gazetteer.entries()) {
        if (e.hierarchy.city.empty()) continue;  // derived nodes are rebuilt
        entries.push_back(json{{"name", e.name},
                               {"alt_names", e.alt_names},
                               {"state", e.hierarchy.state},
                               {"county", e.hierarchy.county},
                               {"country", e.hierarchy.country},
                               {"continent", e.hierarchy.continent},
                               {"population", e.population},
                               {"lat", e.coords.lat},
                               {"lon", e.coords.lon},
                               {"country_code", e.country_code}});
    }
    json abbrevs = json::object();
    for (const auto& [key, h] : bundle.abbreviations.entries) {
        abbrevs[key] = hierarchy_to_json(h);
    }
    json j{{"format", "gazetteer-bundle"},
           {"version", 1},
           {"entries", std::move(entries)},
           {"abbreviations", std::move(abbrevs)},
           {"removed_words", bundle.removed_words}};
    std::ofstream out = open_out(path);
    out << j.dump() << "\n";
}

GazetteerBundle load_gazetteer_bundle(const std::string& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("corrupt gazetteer bundle: " + std::string(e.what()));
    }
    if (j.value("format", "") != "gazetteer-bundle") {
        throw std::runtime_error("not a gazetteer bundle: " + path);
    }
    if (j.value("version", 0) != 1) {
        throw std::runtime_error("unsupported gazetteer bundle version");
    }
    GazetteerBundle bundle;
    std::vector<gaz::GazetteerEntry> cities;
    for (const json& ej : j.at("entries")) {
        gaz::GazetteerEntry e;
        e.name = ej.at("name").get<std::string>();
        e.alt_names = ej.value("alt_names", std::vector<std::string>{});
        e.hierarchy.city = e.name;
        e.hierarchy.county = ej.value("county", "");
        e.hierarchy.state = ej.value("state", "");
        e.hierarchy.country = ej.value("country", "");
        e.hierarchy.continent = ej.value("continent", "");
        e.population = ej.at("population").get<std::int64_t>();
        e.coords = {ej.at("lat").get<double>(), ej.at("lon").get<double>()};
        e.country_code = ej.value("country_code", "");
        cities.push_back(std::move(e));
    }
    gaz::Gazetteer full = gaz::build_gazetteer(std::move(cities));
    bundle.removed_words = j.value("removed_words", std::vector<std::string>{});
    if (!bundle.removed_words.empty()) {
        bundle.gazetteer =
            gaz::filter_common_words(full, bundle.removed_words).gazetteer;
    } else {
        bundle.gazetteer = std::move(full);
    }
    for (const auto& [key, hj] : j.at("abbreviations").items()) {
        bundle.abbreviations.entries[key] = hierarchy_from_json(hj);
    }
    return bundle;
}

namespace {

json report_to_json(const eval::MetricReport& r) {
    return json{{"aed_miles", r.aed},
                {"med_miles", r.med},
                {"acc_at_100", r.acc_at_100},
                {"n_users", r.n_users},
                {"n_fallback", r.n_fallback}};
}

}  // namespace

std::string report_table(const eval::MetricReport& aggregate,
                         std::span<const eval::FoldReport> folds) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << std::left << std::setw(12) << "split" << std::right << std::setw(12)
        << "AED(mi)" << std::setw(12) << "MED(mi)" << std::setw(10) << "Acc@100"
        << std::setw(9) << "users" << std::setw(10) << "fallback" << "\n";
    auto row = [&out](const std::string& name, const eval::MetricReport& r) {
        out << std::left << std::setw(12) << name << std::right << std::setw(12)
            << r.aed << std::setw(12) << r.med << std::setw(10) << r.acc_at_100
            << std::setw(9) << r.n_users << std::setw(10) << r.n_fallback << "\n";
    };
    for (std::size_t f = 0; f < folds.size(); ++f) {
        row("fold" + std::to_string(f), folds[f].report);
    }
    row("aggregate", aggregate);
    return out.str();
}

void write_report(const eval::MetricReport& aggregate,
                  std::span<const eval::FoldReport> folds, const std::string& path,
                  double feature_overlap) {
    json j{{"aggregate", report_to_json(aggregate)}};
    json fj = json::array();
    for (const eval::FoldReport& f : folds) fj.push_back(report_to_json(f.report));
    j["folds"] = std::move(fj);
    if (feature_overlap >= 0.0) j["feature_overlap"] = feature_overlap;
    j["table"] = report_table(aggregate, folds);
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_errors_csv(std::span<const double> errors, const std::string& path) {
    std::ofstream out = open_out(path);
    out << std::setprecision(17);
    out << "error_miles\n";
    for (double e : errors) out << e << "\n";
}

void write_audit_csv(std::span<const eval::AuditRow> rows, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "user,comment_id,comment_text,extracted,resolution,correct,"
           "correct_resolution\n";
    auto flat = [](std::string s) {  // the reader is line-based
        for (char& c : s) {
            if (c == '\n' || c == '\r') c = ' ';
        }
        return s;
    };
    for (const eval::AuditRow& r : rows) {
        out << csv_quote(r.user) << "," << csv_quote(r.comment_id) << ","
            << csv_quote(flat(r.comment_text)) << "," << csv_quote(r.extracted) << ","
            << csv_quote(r.resolution) << "," << csv_quote(r.correct) << ","
            << csv_quote(r.correct_resolution) << "\n";
    }
}

std::vector<eval::AuditRow> read_audit_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<eval::AuditRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (trim(line).empty()) continue;
        std::vector<std::string> f = csv_parse_line(line);
        f.resize(7);
        rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6]});
    }
    return rows;
}

}  // namespace geoloc::corpus
