#pragma once

// Synthetic constant-velocity encounters with analytic ground truth, plus
// brute-force oracles and scene transforms used to check the metrics.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "scootsafe/encounter_geometry.hpp"
#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

inline constexpr GeoPoint kDefaultSceneOrigin{39.7684, -86.1581};

struct ScenarioSpec {
    GeometryClass geometry = GeometryClass::CrossingFromLeft;
    double vehicle_speed = 10.0;  // m/s
    double escooter_speed = 5.0;  // m/s
    double designed_gap = 1.0;    // s, arrival difference at the crossing point
    double duration = 20.0;       // s
    double noise_sigma = 0.0;     // m, isotropic Gaussian per axis
    std::uint64_t seed = 0;

    double hz = 10.0;
    double lateral_offset = 4.0;     // m, parallel classes
    double crossing_angle = 90.0;    // deg between paths, crossing classes
    bool escooter_first = false;     // which agent reaches the crossing first
    double scene_rotation = 0.0;     // deg, applied to the whole scene
    PlanePoint scene_offset{};       // m
    GeoPoint origin = kDefaultSceneOrigin;
    std::string id;
    Dataset dataset = Dataset::VehicleCentered;
};

namespace detail {

inline void check_spec(const ScenarioSpec& s) {
    auto fail = [](const std::string& why) { throw Error(ErrorKind::InfeasibleSpec, "infeasible scenario: " + why); };
    if (!(s.vehicle_speed > 0.0) || !(s.escooter_speed > 0.0)) fail("speeds must be > 0");
    if (!(s.duration > 0.0)) fail("duration must be > 0");
    if (!(s.hz > 0.0) || s.duration * s.hz < 1.0) fail("need at least two samples");
    if (!(s.noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
    if (!(s.designed_gap >= 0.0) || !(s.designed_gap < s.duration)) fail("designed_gap must lie in [0, duration)");
    if (!(s.crossing_angle > 0.0 && s.crossing_angle < 180.0)) fail("crossing_angle must lie in (0, 180)");
    if (!std::isfinite(s.lateral_offset) || !std::isfinite(s.scene_rotation)) fail("non-finite scene parameter");
}

// Compass rotation: heading h becomes h + deg.
inline PlanePoint rotate(PlanePoint p, double deg) {
    const double r = deg_to_rad(deg);
    const double c = std::cos(r), s = std::sin(r);
    return {p.x * c + p.y * s, -p.x * s + p.y * c};
}

} // namespace detail

/// Planar encounter realizing spec.geometry. Crossing classes meet at the
/// scene origin with the designed arrival gap centred on the timeline;
/// parallel classes run alongside at lateral_offset, level at mid-timeline.
inline EncounterCase generate_case(const ScenarioSpec& spec) {
    detail::check_spec(spec);
    const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.hz)) + 1;
    const double dt = 1.0 / spec.hz;
    const double mid = spec.duration / 2.0;

    const PlanePoint uv{0.0, 1.0}; // vehicle heads north before scene rotation
    PlanePoint us{};
    PlanePoint scooter_anchor{};
    double tv = mid, ts = mid;
    switch (spec.geometry) {
    case GeometryClass::ParallelSameDirection:
        us = uv;
        scooter_anchor = {spec.lateral_offset, 0.0};
        break;
    case GeometryClass::ParallelOppositeDirection:
        us = {0.0, -1.0};
        scooter_anchor = {spec.lateral_offset, 0.0};
        break;
    case GeometryClass::CrossingFromLeft:
    case GeometryClass::CrossingFromRight: {
        const double sign = spec.geometry == GeometryClass::CrossingFromLeft ? 1.0 : -1.0;
        us = heading_vector(sign * spec.crossing_angle);
        const double half = spec.designed_gap / 2.0;
        tv = spec.escooter_first ? mid + half : mid - half;
        ts = spec.escooter_first ? mid - half : mid + half;
        break;
    }
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    auto jitter = [&] {
        if (spec.noise_sigma == 0.0) return PlanePoint{};
        const double ex = noise(rng);
        const double ey = noise(rng);
        return PlanePoint{ex, ey} * spec.noise_sigma;
    };
    auto place = [&](PlanePoint p) { return detail::rotate(p, spec.scene_rotation) + spec.scene_offset; };

    const ProjectionContext ctx(spec.origin);
    EncounterCase c;
    c.id = spec.id;
    c.dataset = spec.dataset;
    c.vehicle = {AgentKind::Vehicle, 0.0, dt, {}, ctx};
    c.escooter = {AgentKind::EScooter, 0.0, dt, {}, ctx};
    c.vehicle.points.reserve(n);
    c.escooter.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        c.vehicle.points.push_back(place(uv * (spec.vehicle_speed * (t - tv))) + jitter());
        c.escooter.points.push_back(place(scooter_anchor + us * (spec.escooter_speed * (t - ts))) + jitter());
    }
    check_synchronized(c);
    return c;
}

/// Geodetic tracks for a planar case, timestamps on the case grid.
inline std::pair<RawTrajectory, RawTrajectory> to_raw_tracks(const EncounterCase& c) {
    auto convert = [&](const CleanTrajectory& ct) {
        RawTrajectory raw{ct.agent, {}};
        raw.fixes.reserve(ct.points.size());
        for (std::size_t i = 0; i < ct.points.size(); ++i) {
            raw.fixes.push_back({ct.time_at(i), from_plane(ct.ctx, ct.points[i]), std::nullopt});
        }
        return raw;
    };
    return {convert(c.vehicle), convert(c.escooter)};
}

inline std::pair<RawTrajectory, RawTrajectory> generate_tracks(const ScenarioSpec& spec) {
    return to_raw_tracks(generate_case(spec));
}

// ---------------------------------------------------------------------------
// Oracles

inline constexpr double kBisectionTolS = 1e-6;

/// Time-steps both agents at constant velocity until they come within radius.
inline std::optional<double> brute_force_ttc(const KinematicState& a, const KinematicState& b, double radius,
                                             double dt, double horizon) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "brute_force_ttc: dt must be > 0");
    const PlanePoint va = a.velocity();
    const PlanePoint vb = b.velocity();
    auto separation = [&](double tau) {
        const PlanePoint pa = a.pos + va * tau;
        const PlanePoint pb = b.pos + vb * tau;
        return distance(pa, pb);
    };
    if (separation(0.0) <= radius) return 0.0;
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));
    for (std::size_t k = 1; k <= steps; ++k) {
        const double hi_t = static_cast<double>(k) * dt;
        if (separation(hi_t) > radius) continue;
        double lo = static_cast<double>(k - 1) * dt, hi = hi_t;
        while (hi - lo > kBisectionTolS) {
            const double m = 0.5 * (lo + hi);
            (separation(m) <= radius ? hi : lo) = m;
        }
        return hi;
    }
    return std::nullopt;
}

/// Minimum separation over the timeline, densely re-interpolated at step dt.
inline double brute_force_min_distance(const EncounterCase& c, double dt) {
    check_synchronized(c);
    if (!(dt > 0.0) || !(dt < c.dt())) {
        throw Error(ErrorKind::InvalidArgument, "brute_force_min_distance: need 0 < dt < case dt");
    }
    auto at = [](const CleanTrajectory& ct, double rel) {
        const double u = rel / ct.dt;
        auto i = static_cast<std::size_t>(std::floor(u));
        if (i + 1 >= ct.points.size()) return ct.points.back();
        const double f = u - static_cast<double>(i);
        return ct.points[i] + (ct.points[i + 1] - ct.points[i]) * f;
    };
    const double span = c.dt() * static_cast<double>(c.frames() - 1);
    double best = distance(c.vehicle.points.front(), c.escooter.points.front());
    const auto steps = static_cast<std::size_t>(std::ceil(span / dt));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double rel = std::min(static_cast<double>(k) * dt, span);
        best = std::min(best, distance(at(c.vehicle, rel), at(c.escooter, rel)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Scene transforms

/// Rotates the planar scene about the origin so every heading gains deg.
inline EncounterCase rotate_case(EncounterCase c, double deg) {
    for (auto* t : {&c.vehicle, &c.escooter}) {
        for (auto& p : t->points) p = detail::rotate(p, deg);
    }
    return c;
}

inline EncounterCase translate_case(EncounterCase c, PlanePoint offset) {
    for (auto* t : {&c.vehicle, &c.escooter}) {
        for (auto& p : t->points) p += offset;
    }
    return c;
}

inline EncounterCase shift_time(EncounterCase c, double seconds) {
    c.vehicle.t0 += seconds;
    c.escooter.t0 += seconds;
    return c;
}

/// Reflects the scene across the line through `through` along compass heading `axis_deg`.
inline EncounterCase mirror_case(EncounterCase c, PlanePoint through, double axis_deg) {
    const PlanePoint u = heading_vector(axis_deg);
    for (auto* t : {&c.vehicle, &c.escooter}) {
        for (auto& p : t->points) {
            const PlanePoint d = p - through;
            p = through + u * (2.0 * dot(d, u)) - d;
        }
    }
    return c;
}

/// Same paths traversed k times faster.
inline EncounterCase scale_speeds(EncounterCase c, double k) {
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale_speeds: k must be > 0");
    c.vehicle.dt /= k;
    c.escooter.dt /= k;
    return c;
}

} // namespace scootsafe
