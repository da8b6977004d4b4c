// Spherical geometry primitives: great-circle distance and the geodesic
// median of a point set.

#pragma once

#include <span>
#include <vector>

namespace geoloc::geo {

inline constexpr double kEarthRadiusMiles = 3958.7613;

struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, (-180, 180]

    bool operator==(const GeoPoint&) const = default;
};

// Clamps latitude and wraps longitude into (-180, 180].
GeoPoint normalized(GeoPoint p);

// Great-circle distance in miles (haversine, spherical Earth).
double haversine_miles(const GeoPoint& a, const GeoPoint& b);

// Sum of great-circle distances from x to every point.
double summed_distance_miles(const GeoPoint& x, std::span<const GeoPoint> points);

// Point minimizing the summed great-circle distance to the inputs.
// Weiszfeld iteration in the 3-D unit-sphere embedding, re-projected onto
// the sphere each step. Biased for antipodal spreads; inputs here are
// regionally clustered so the bias is negligible.
// Throws std::invalid_argument("empty point set") on empty input.
GeoPoint geodesic_median(std::span<const GeoPoint> points);

}  // namespace geoloc::geo
