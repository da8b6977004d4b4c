#include "geoloc/geo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoloc::geo {

namespace {

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

// iterate-on-data-point guard (radians)
constexpr double kCoincidenceEps = 1e-9;
constexpr double kConvergenceRad = 1e-6;
constexpr int kMaxIterations = 500;

struct Vec3 {
    double x, y, z;
};

Vec3 to_unit(const GeoPoint& p) {
    const double lat = p.lat * kDegToRad;
    const double lon = p.lon * kDegToRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon),
            std::sin(lat)};
}

GeoPoint from_unit(const Vec3& v) {
    return normalized({std::asin(std::clamp(v.z, -1.0, 1.0)) * kRadToDeg,
                       std::atan2(v.y, v.x) * kRadToDeg});
}

double norm(const Vec3& v) {
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

// angle between unit vectors, radians
double angle(const Vec3& a, const Vec3& b) {
    const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

}  // namespace

GeoPoint normalized(GeoPoint p) {
    p.lat = std::clamp(p.lat, -90.0, 90.0);
    while (p.lon <= -180.0) p.lon += 360.0;
    while (p.lon > 180.0) p.lon -= 360.0;
    return p;
}

double haversine_miles(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = lat2 - lat1;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

double summed_distance_miles(const GeoPoint& x, std::span<const GeoPoint> points) {
    double total = 0.0;
    for (const GeoPoint& p : points) total += haversine_miles(x, p);
    return total;
}

GeoPoint geodesic_median(std::span<const GeoPoint> points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    if (points.size() == 1) return normalized(points[0]);

    std::vector<Vec3> vs;
    vs.reserve(points.size());
    for (const GeoPoint& p : points) vs.push_back(to_unit(normalized(p)));

    if (points.size() == 2) {
        // non-unique median: return the great-circle midpoint
        Vec3 mid{vs[0].x + vs[1].x, vs[0].y + vs[1].y, vs[0].z + vs[1].z};
        const double n = norm(mid);
        if (n < 1e-12) return normalized(points[0]);  // antipodal pair
        return from_unit({mid.x / n, mid.y / n, mid.z / n});
    }

    // start from the projected centroid
    Vec3 x{0.0, 0.0, 0.0};
    for (const Vec3& v : vs) {
        x.x += v.x;
        x.y += v.y;
        x.z += v.z;
    }
    double n = norm(x);
    if (n < 1e-12) {
        x = vs[0];
    } else {
        x = {x.x / n, x.y / n, x.z / n};
    }

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        Vec3 acc{0.0, 0.0, 0.0};
        for (const Vec3& v : vs) {
            double d = std::sqrt((x.x - v.x) * (x.x - v.x) +
                                 (x.y - v.y) * (x.y - v.y) +
                                 (x.z - v.z) * (x.z - v.z));
            if (d < kCoincidenceEps) d = kCoincidenceEps;
            acc.x += v.x / d;
            acc.y += v.y / d;
            acc.z += v.z / d;
        }
        const double an = norm(acc);
        if (an < 1e-12) break;
        Vec3 next{acc.x / an, acc.y / an, acc.z / an};
        const double moved = angle(x, next);
        x = next;
        if (moved < kConvergenceRad) break;
    }

    // guarantee the output never loses to one of the inputs
    GeoPoint best = from_unit(x);
    double best_obj = summed_distance_miles(best, points);
    for (const GeoPoint& p : points) {
        const double obj = summed_distance_miles(normalized(p), points);
        if (obj < best_obj - 1e-9) {
            best_obj = obj;
            best = normalized(p);
        }
    }
    return best;
}

}  // namespace geoloc::geo
