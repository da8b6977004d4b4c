#include "geoloc/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace geoloc::model_io {

using nlohmann::json;

namespace {

std::string fnv1a_hex(const std::string& payload) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

json density_to_json(const model::MixtureDensity& d) {
    return json{{"kind", d.kind == model::MixtureKind::dpmm ? "dpmm" : "gmm"},
                {"covariance",
                 d.covariance == model::CovarianceKind::diagonal ? "diagonal"
                                                                 : "spherical"},
                {"weights", d.weights},
                {"means", d.means},
                {"vars", d.vars}};
}

model::MixtureDensity density_from_json(const json& j) {
    model::MixtureDensity d;
    d.kind = j.at("kind").get<std::string>() == "gmm" ? model::MixtureKind::gmm
                                                      : model::MixtureKind::dpmm;
    d.covariance = j.at("covariance").get<std::string>() == "spherical"
                       ? model::CovarianceKind::spherical
                       : model::CovarianceKind::diagonal;
    d.weights = j.at("weights").get<std::vector<double>>();
    d.means = j.at("means").get<std::vector<std::array<double, 2>>>();
    d.vars = j.at("vars").get<std::vector<std::array<double, 2>>>();
    return d;
}

}  // namespace

void save_model(const model::GeoModel& m, const std::string& path) {
    json payload;
    payload["seed"] = m.seed;
    payload["modalities"] = json{{"words", m.modalities.words},
                                 {"subreddits", m.modalities.subreddits},
                                 {"temporal", m.modalities.temporal}};
    payload["fallback"] = json{{"lat", m.fallback.lat}, {"lon", m.fallback.lon}};

    json cands = json::array();
    for (const model::Candidate& c : m.candidates.candidates) {
        cands.push_back(json{c.point.lat, c.point.lon, c.bin, c.weight});
    }
    payload["candidates"] = std::move(cands);

    payload["vocab_words"] = m.densities.vocab_words;
    payload["vocab_subreddits"] = m.densities.vocab_subreddits;
    payload["prior"] = m.densities.prior;
    payload["fallback_features"] =
        std::vector<std::string>(m.densities.fallback.begin(),
                                 m.densities.fallback.end());
    json dens = json::object();
    for (const auto& [key, d] : m.densities.densities) {
        dens[key] = density_to_json(d);
    }
    payload["densities"] = std::move(dens);

    if (m.temporal.has_value()) {
        payload["temporal"] = json{{"bin_edges", m.temporal->bin_edges},
                                   {"coefficients", m.temporal->coefficients},
                                   {"l2_strength", m.temporal->l2_strength}};
    } else {
        payload["temporal"] = nullptr;
    }

    const std::string body = payload.dump();
    json file{{"format", "geoloc-model"},
              {"version", kFormatVersion},
              {"checksum", fnv1a_hex(body)},
              {"model", std::move(payload)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << file.dump() << "\n";
}

model::GeoModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json file = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (file.is_discarded() || !file.is_object()) {
        throw std::runtime_error("corrupt model file (checksum/parse): " + path);
    }
    if (file.value("format", "") != "geoloc-model") {
        throw std::runtime_error("not a model file: " + path);
    }
    if (file.value("version", -1) != kFormatVersion) {
        throw std::runtime_error("unsupported model version");
    }
    const json& payload = file.at("model");
    if (fnv1a_hex(payload.dump()) != file.value("checksum", "")) {
        throw std::runtime_error("corrupt model file (checksum/parse): " + path);
    }

    model::GeoModel m;
    m.seed = payload.value("seed", static_cast<std::uint64_t>(0));
    const json& mod = payload.at("modalities");
    m.modalities.words = mod.at("words").get<bool>();
    m.modalities.subreddits = mod.at("subreddits").get<bool>();
    m.modalities.temporal = mod.at("temporal").get<bool>();
    m.fallback = {payload.at("fallback").at("lat").get<double>(),
                  payload.at("fallback").at("lon").get<double>()};
    for (const json& cj : payload.at("candidates")) {
        model::Candidate c;
        c.point = {cj.at(0).get<double>(), cj.at(1).get<double>()};
        c.bin = cj.at(2).get<int>();
        c.weight = cj.at(3).get<double>();
        m.candidates.candidates.push_back(c);
    }
    m.densities.vocab_words =
        payload.at("vocab_words").get<std::vector<std::string>>();
    m.densities.vocab_subreddits =
        payload.at("vocab_subreddits").get<std::vector<std::string>>();
    for (const auto& [key, v] : payload.at("prior").items()) {
        m.densities.prior[key] = v.get<double>();
    }
    for (const std::string& f :
         payload.at("fallback_features").get<std::vector<std::string>>()) {
        m.densities.fallback.insert(f);
    }
    for (const auto& [key, dj] : payload.at("densities").items()) {
        m.densities.densities[key] = density_from_json(dj);
    }
    if (!payload.at("temporal").is_null()) {
        model::TemporalModel tm;
        const json& tj = payload.at("temporal");
        tm.bin_edges = tj.at("bin_edges").get<std::vector<double>>();
        tm.coefficients =
            tj.at("coefficients").get<std::vector<std::vector<double>>>();
        tm.l2_strength = tj.at("l2_strength").get<double>();
        m.temporal = std::move(tm);
    }
    return m;
}

}  // namespace geoloc::model_io
