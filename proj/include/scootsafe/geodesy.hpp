#pragma once

// Spherical-earth geodesy and the local planar frame every downstream metric
// works in. Encounters span well under a kilometre, so a latitude-corrected
// equirectangular frame centred on the case is accurate to ~1e-4 relative.

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "scootsafe/error.hpp"

namespace scootsafe {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kMaxProjectionRadiusM = 10'000.0;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees to [0, 360).
inline double wrap_360(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    if (w >= 360.0) w -= 360.0;
    return w;
}

/// Wraps an angle in degrees to [-180, 180).
inline double wrap_180(double deg) {
    return wrap_360(deg + 180.0) - 180.0;
}

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool valid() const {
        return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
               lon >= -180.0 && lon <= 180.0;
    }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct PlanePoint {
    double x = 0.0; // metres east
    double y = 0.0; // metres north

    PlanePoint& operator+=(PlanePoint o) { x += o.x; y += o.y; return *this; }
    PlanePoint& operator-=(PlanePoint o) { x -= o.x; y -= o.y; return *this; }
    PlanePoint& operator*=(double s) { x *= s; y *= s; return *this; }

    friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return a += b; }
    friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return a -= b; }
    friend PlanePoint operator*(PlanePoint a, double s) { return a *= s; }
    friend PlanePoint operator*(double s, PlanePoint a) { return a *= s; }
    friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline double dot(PlanePoint a, PlanePoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(PlanePoint a, PlanePoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(PlanePoint a) { return std::hypot(a.x, a.y); }
inline double distance(PlanePoint a, PlanePoint b) { return norm(b - a); }

/// Unit vector for a compass heading (0 = north, 90 = east).
inline PlanePoint heading_vector(double heading_deg) {
    const double h = deg_to_rad(heading_deg);
    return {std::sin(h), std::cos(h)};
}

/// Compass heading of a planar displacement, in [0, 360).
inline double planar_heading(PlanePoint d) {
    return wrap_360(rad_to_deg(std::atan2(d.x, d.y)));
}

/// Great-circle distance on the mean-radius sphere.
inline double haversine_distance(GeoPoint a, GeoPoint b) {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = phi2 - phi1;
    const double dlambda = deg_to_rad(b.lon - a.lon);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    if (h > 1.0) h = 1.0;
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

/// Initial great-circle bearing from a to b in [0, 360).
inline double bearing(GeoPoint a, GeoPoint b) {
    if (a.lat == b.lat && a.lon == b.lon) {
        throw Error(ErrorKind::UndefinedBearing, "bearing between coincident points is undefined");
    }
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dlambda = deg_to_rad(b.lon - a.lon);
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    return wrap_360(rad_to_deg(std::atan2(y, x)));
}

/// Local planar frame anchored at a case origin. Immutable once built.
class ProjectionContext {
public:
    ProjectionContext() : ProjectionContext(GeoPoint{}) {}

    explicit ProjectionContext(GeoPoint origin)
        : origin_(origin),
          meters_per_deg_lat_(deg_to_rad(1.0) * kEarthRadiusM),
          meters_per_deg_lon_(meters_per_deg_lat_ * std::cos(deg_to_rad(origin.lat))) {
        if (!origin.valid()) {
            throw Error(ErrorKind::InvalidArgument, "projection origin is not a valid coordinate");
        }
        if (meters_per_deg_lon_ < 0.0) meters_per_deg_lon_ = 0.0;
    }

    /// Origin at the centroid of the given fixes (arithmetic mean of lat, circular mean of lon).
    static ProjectionContext centroid_of(std::span<const GeoPoint> points) {
        if (points.empty()) {
            throw Error(ErrorKind::EmptyInput, "cannot build a projection from zero points");
        }
        double lat = 0.0, sx = 0.0, sy = 0.0;
        for (const auto& p : points) {
            lat += p.lat;
            sx += std::cos(deg_to_rad(p.lon));
            sy += std::sin(deg_to_rad(p.lon));
        }
        lat /= static_cast<double>(points.size());
        double lon = rad_to_deg(std::atan2(sy, sx));
        if (lon >= 180.0) lon -= 360.0;
        return ProjectionContext(GeoPoint{lat, lon});
    }

    const GeoPoint& origin() const { return origin_; }
    double meters_per_deg_lat() const { return meters_per_deg_lat_; }
    /// Longitude scale at the origin's latitude.
    double meters_per_deg_lon() const { return meters_per_deg_lon_; }

    friend bool operator==(const ProjectionContext&, const ProjectionContext&) = default;

private:
    GeoPoint origin_;
    double meters_per_deg_lat_;
    double meters_per_deg_lon_;
};

// The longitude scale is taken at the point's own latitude rather than the
// origin's; this removes the first-order east-west stretch away from the
// origin parallel and keeps the pairwise error under 1e-4 out to 1 km.
inline PlanePoint to_plane(const ProjectionContext& ctx, GeoPoint p) {
    if (!p.valid()) {
        throw Error(ErrorKind::InvalidArgument, "to_plane: invalid coordinate");
    }
    if (haversine_distance(ctx.origin(), p) > kMaxProjectionRadiusM) {
        throw Error(ErrorKind::ProjectionDomain,
                    "to_plane: point lies more than 10 km from the projection origin");
    }
    const double dlon = wrap_180(p.lon - ctx.origin().lon);
    return {dlon * ctx.meters_per_deg_lat() * std::cos(deg_to_rad(p.lat)),
            (p.lat - ctx.origin().lat) * ctx.meters_per_deg_lat()};
}

inline GeoPoint from_plane(const ProjectionContext& ctx, PlanePoint q) {
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) {
        throw Error(ErrorKind::InvalidArgument, "from_plane: non-finite planar point");
    }
    const double lat = ctx.origin().lat + q.y / ctx.meters_per_deg_lat();
    const double scale = ctx.meters_per_deg_lat() * std::cos(deg_to_rad(lat));
    double lon = ctx.origin().lon;
    if (scale > 0.0) lon = wrap_180(lon + q.x / scale);
    return {lat, lon};
}

} // namespace scootsafe
