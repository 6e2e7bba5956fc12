#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

inline constexpr double kStationaryEpsMps = 0.1;
inline constexpr double kMpsToMph = 2.2369362921;

struct KinematicState {
    double t = 0.0;
    PlanePoint pos;
    double speed = 0.0;
    std::optional<double> heading;      // defined iff speed >= eps
    std::optional<double> held_heading; // last defined heading, carried through stops

    bool moving() const { return heading.has_value(); }

    /// Velocity vector; zero when stationary.
    PlanePoint velocity() const {
        return heading ? heading_vector(*heading) * speed : PlanePoint{};
    }
};

/// Backward-difference speed and heading per frame; frame 0 copies frame 1.
inline std::vector<KinematicState> estimate_states(const CleanTrajectory& traj,
                                                   double eps = kStationaryEpsMps) {
    const auto& p = traj.points;
    if (p.size() < 2) {
        throw Error(ErrorKind::DegenerateTrajectory, "estimate_states: need >= 2 points");
    }
    std::vector<KinematicState> out(p.size());
    std::optional<double> last;
    for (std::size_t i = 1; i < p.size(); ++i) {
        auto& s = out[i];
        s.t = traj.time_at(i);
        s.pos = p[i];
        const PlanePoint d = p[i] - p[i - 1];
        s.speed = norm(d) / traj.dt;
        if (s.speed >= eps) {
            s.heading = planar_heading(d);
            last = s.heading;
        }
        s.held_heading = last;
    }
    out[0] = out[1];
    out[0].t = traj.time_at(0);
    out[0].pos = p[0];
    if (!out[0].heading) out[0].held_heading.reset();
    return out;
}

/// Median of a sample; even counts average the two middle values.
inline double median(std::vector<double> v) {
    if (v.empty()) throw Error(ErrorKind::EmptyInput, "median of empty sample");
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

inline double median_speed(std::span<const KinematicState> states) {
    if (states.empty()) throw Error(ErrorKind::EmptyInput, "median_speed: no states");
    std::vector<double> speeds;
    speeds.reserve(states.size());
    for (const auto& s : states) speeds.push_back(s.speed);
    return median(std::move(speeds));
}

inline constexpr double mps_to_mph(double v) { return v * kMpsToMph; }

struct DistanceSample {
    double t = 0.0;
    double meters = 0.0;
};

inline std::vector<DistanceSample> distance_series(const EncounterCase& c) {
    check_synchronized(c);
    std::vector<DistanceSample> out;
    out.reserve(c.frames());
    for (std::size_t i = 0; i < c.frames(); ++i) {
        out.push_back({c.time_at(i), distance(c.vehicle.points[i], c.escooter.points[i])});
    }
    return out;
}

/// Index of the closest-approach frame; ties resolve to the earliest frame.
inline std::size_t closest_frame(const EncounterCase& c) {
    check_synchronized(c);
    std::size_t best = 0;
    double best_d = distance(c.vehicle.points[0], c.escooter.points[0]);
    for (std::size_t i = 1; i < c.frames(); ++i) {
        const double d = distance(c.vehicle.points[i], c.escooter.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

inline double min_distance(const EncounterCase& c) {
    const auto i = closest_frame(c);
    return distance(c.vehicle.points[i], c.escooter.points[i]);
}

} // namespace scootsafe
