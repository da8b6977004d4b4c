// Versioned, checksummed model persistence. A round-tripped model
// reproduces identical predictions.

#pragma once

#include <string>

#include "geoloc/model.hpp"

namespace geoloc::model_io {

inline constexpr int kFormatVersion = 1;

void save_model(const model::GeoModel& m, const std::string& path);

// Throws std::runtime_error: "unsupported model version" on a version
// mismatch, "corrupt model file ..." on parse or checksum failure.
model::GeoModel load_model(const std::string& path);

}  // namespace geoloc::model_io
