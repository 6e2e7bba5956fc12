#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

enum class GeometryClass {
    ParallelSameDirection,
    ParallelOppositeDirection,
    CrossingFromLeft,
    CrossingFromRight,
};

inline constexpr std::array kAllGeometries{
    GeometryClass::ParallelSameDirection,
    GeometryClass::ParallelOppositeDirection,
    GeometryClass::CrossingFromLeft,
    GeometryClass::CrossingFromRight,
};

inline constexpr std::string_view to_string(GeometryClass g) {
    switch (g) {
    case GeometryClass::ParallelSameDirection: return "parallel_same_direction";
    case GeometryClass::ParallelOppositeDirection: return "parallel_opposite_direction";
    case GeometryClass::CrossingFromLeft: return "crossing_from_left";
    case GeometryClass::CrossingFromRight: return "crossing_from_right";
    }
    return "unknown";
}

inline std::optional<GeometryClass> parse_geometry(std::string_view s) {
    for (auto g : kAllGeometries) {
        if (to_string(g) == s) return g;
    }
    return std::nullopt;
}

inline constexpr double kDefaultHalfWindowS = 2.0;
inline constexpr double kDefaultParallelAngleDeg = 45.0;

struct InteractionPhase {
    double t_start = 0.0;
    double t_end = 0.0;
};

/// +/- half_window around the closest-approach frame, clipped to the timeline.
inline InteractionPhase interaction_phase(const EncounterCase& c, double half_window = kDefaultHalfWindowS) {
    const double tc = c.time_at(closest_frame(c));
    return {std::max(c.time_at(0), tc - half_window), std::min(c.time_at(c.frames() - 1), tc + half_window)};
}

struct GeometryFeatures {
    double relative_heading_deg = 0.0; // circular mean of scooter minus vehicle heading, in (-180, 180]
    double vehicle_heading_deg = 0.0;  // circular mean over the phase
    double scooter_heading_deg = 0.0;
    std::size_t frames_used = 0;
};

/// Circular heading statistics over phase frames where both agents have a heading.
inline std::optional<GeometryFeatures> phase_features(std::span<const KinematicState> vehicle,
                                                      std::span<const KinematicState> scooter,
                                                      InteractionPhase phase) {
    PlanePoint rel{}, hv{}, hs{};
    std::size_t used = 0;
    constexpr double slack = 1e-9;
    for (std::size_t i = 0; i < vehicle.size() && i < scooter.size(); ++i) {
        const double t = vehicle[i].t;
        if (t < phase.t_start - slack || t > phase.t_end + slack) continue;
        if (!vehicle[i].heading || !scooter[i].heading) continue;
        rel += heading_vector(*scooter[i].heading - *vehicle[i].heading);
        hv += heading_vector(*vehicle[i].heading);
        hs += heading_vector(*scooter[i].heading);
        ++used;
    }
    if (used == 0 || norm(rel) == 0.0 || norm(hv) == 0.0) return std::nullopt;
    GeometryFeatures f;
    f.relative_heading_deg = wrap_180(planar_heading(rel));
    f.vehicle_heading_deg = planar_heading(hv);
    f.scooter_heading_deg = norm(hs) > 0.0 ? planar_heading(hs) : 0.0;
    f.frames_used = used;
    return f;
}

/// Parallel classes by the folded mean relative heading; crossing side from
/// the direction the e-scooter moves across the vehicle's path. A scooter
/// heading toward the vehicle's right came from its left.
inline GeometryClass classify_features(const GeometryFeatures& f,
                                       double parallel_angle = kDefaultParallelAngleDeg) {
    const double delta = std::abs(f.relative_heading_deg);
    if (delta < parallel_angle) return GeometryClass::ParallelSameDirection;
    if (delta > 180.0 - parallel_angle) return GeometryClass::ParallelOppositeDirection;
    return f.relative_heading_deg > 0.0 ? GeometryClass::CrossingFromLeft : GeometryClass::CrossingFromRight;
}

inline GeometryClass classify_geometry(const EncounterCase& c, InteractionPhase phase,
                                       double parallel_angle = kDefaultParallelAngleDeg,
                                       double eps = kStationaryEpsMps) {
    check_synchronized(c);
    const auto v = estimate_states(c.vehicle, eps);
    const auto s = estimate_states(c.escooter, eps);
    const auto f = phase_features(v, s, phase);
    if (!f) {
        throw Error(ErrorKind::Unclassifiable,
                    "case " + c.id + ": no frame with both headings defined in the interaction phase");
    }
    return classify_features(*f, parallel_angle);
}

} // namespace scootsafe
