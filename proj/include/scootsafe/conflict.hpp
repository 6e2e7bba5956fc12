#pragma once

// Surrogate-safety measures for one encounter: coast-trajectory crossings,
// gap time at the crossing, constant-velocity time-to-collision, and the
// case-level verdict built from them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

/// Straight-line forward projection of an agent at its current speed and heading.
struct CoastRay {
    PlanePoint origin;
    double heading = 0.0; // degrees
    double speed = 0.0;   // m/s, > 0
};

struct Crossing {
    PlanePoint point;
    double arrival_a = 0.0;
    double arrival_b = 0.0;
};

enum class RiskLevel { High, Medium, Low };

inline constexpr std::string_view to_string(RiskLevel r) {
    switch (r) {
    case RiskLevel::High: return "high";
    case RiskLevel::Medium: return "medium";
    case RiskLevel::Low: return "low";
    }
    return "unknown";
}

struct ConflictConfig {
    double conflict_gap_threshold = 3.0; // s
    double gap_cap = 20.0;               // s
    double risk_high = 1.0;              // s
    double risk_medium = 2.5;            // s
    double collision_radius = 2.0;       // m

    void validate() const {
        if (!(risk_high > 0.0 && risk_high < risk_medium)) {
            throw Error(ErrorKind::InvalidArgument, "config: need 0 < risk_high < risk_medium");
        }
        if (!(conflict_gap_threshold > 0.0 && conflict_gap_threshold < gap_cap)) {
            throw Error(ErrorKind::InvalidArgument, "config: need 0 < conflict_gap_threshold < gap_cap");
        }
        if (!(collision_radius > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "config: collision_radius must be > 0");
        }
    }
};

struct FrameConflict {
    double t = 0.0;
    std::optional<Crossing> crossing;
    std::optional<double> gap_time; // present iff crossing present
    std::optional<double> ttc;      // > 0 when present
};

struct ConflictProfile {
    std::vector<FrameConflict> frames;
    std::optional<double> min_gap_time;
    std::optional<double> mttc;
    bool is_potential_conflict = false;
    std::optional<RiskLevel> risk;
};

inline constexpr double kParallelSinTolerance = 1e-9;

/// Intersection of two forward rays, or nullopt when they are parallel or
/// the crossing lies behind either agent.
inline std::optional<Crossing> coast_intersection(const CoastRay& a, const CoastRay& b) {
    if (!(a.speed > 0.0) || !(b.speed > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "coast_intersection: speeds must be > 0");
    }
    const PlanePoint ua = heading_vector(a.heading);
    const PlanePoint ub = heading_vector(b.heading);
    const double denom = cross(ua, ub); // sin of the heading difference
    if (std::abs(denom) < kParallelSinTolerance) return std::nullopt;
    const PlanePoint d = b.origin - a.origin;
    const double sa = cross(d, ub) / denom;
    const double sb = cross(d, ua) / denom;
    if (sa < 0.0 || sb < 0.0) return std::nullopt;
    return Crossing{a.origin + ua * sa, sa / a.speed, sb / b.speed};
}

inline double gap_time(double arrival_a, double arrival_b) {
    return std::abs(arrival_a - arrival_b);
}

/// Smallest tau >= 0 with |dp + dv*tau| <= radius under constant velocity.
/// Zero when already inside the radius; nullopt when the agents never close
/// to within it. Stationary agents contribute zero velocity.
inline std::optional<double> instantaneous_ttc(const KinematicState& a, const KinematicState& b,
                                               double radius) {
    const PlanePoint dp = b.pos - a.pos;
    const PlanePoint dv = b.velocity() - a.velocity();
    const double c = dot(dp, dp) - radius * radius;
    if (c <= 0.0) return 0.0;
    const double qa = dot(dv, dv);
    const double qb = 2.0 * dot(dp, dv);
    if (qa == 0.0 || qb >= 0.0) return std::nullopt; // no relative motion, or separating
    const double disc = qb * qb - 4.0 * qa * c;
    if (disc < 0.0) return std::nullopt;
    // Both roots are positive here; the stable form gives the earlier one.
    const double q = 0.5 * (-qb + std::sqrt(disc));
    return c / q;
}

inline RiskLevel risk_level(double mttc, const ConflictConfig& cfg = {}) {
    if (!(mttc > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "risk_level: mTTC must be > 0");
    }
    if (mttc < cfg.risk_high) return RiskLevel::High;
    if (mttc < cfg.risk_medium) return RiskLevel::Medium;
    return RiskLevel::Low;
}

/// Frame-by-frame conflict analysis over two synchronized state sequences.
/// Only frames where both agents move contribute crossings and TTC.
inline ConflictProfile analyze_states(std::span<const KinematicState> a, std::span<const KinematicState> b,
                                      const ConflictConfig& cfg = {}) {
    cfg.validate();
    if (a.size() != b.size()) {
        throw Error(ErrorKind::InvalidArgument, "analyze_states: state sequences differ in length");
    }
    ConflictProfile prof;
    prof.frames.reserve(a.size());
    std::optional<double> min_ttc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        FrameConflict fc;
        fc.t = a[i].t;
        if (a[i].moving() && b[i].moving()) {
            fc.crossing = coast_intersection({a[i].pos, *a[i].heading, a[i].speed},
                                             {b[i].pos, *b[i].heading, b[i].speed});
            if (fc.crossing) {
                const double g = gap_time(fc.crossing->arrival_a, fc.crossing->arrival_b);
                fc.gap_time = g;
                if (g <= cfg.gap_cap && (!prof.min_gap_time || g < *prof.min_gap_time)) {
                    prof.min_gap_time = g;
                }
                if (g < cfg.conflict_gap_threshold) prof.is_potential_conflict = true;
            }
            if (auto ttc = instantaneous_ttc(a[i], b[i], cfg.collision_radius); ttc && *ttc > 0.0) {
                fc.ttc = ttc;
                if (!min_ttc || *ttc < *min_ttc) min_ttc = ttc;
            }
        }
        prof.frames.push_back(fc);
    }
    if (prof.is_potential_conflict && min_ttc) {
        prof.mttc = min_ttc;
        prof.risk = risk_level(*min_ttc, cfg);
    }
    return prof;
}

inline ConflictProfile analyze_case(const EncounterCase& c, const ConflictConfig& cfg = {},
                                    double eps = kStationaryEpsMps) {
    check_synchronized(c);
    const auto va = estimate_states(c.vehicle, eps);
    const auto sb = estimate_states(c.escooter, eps);
    return analyze_states(va, sb, cfg);
}

} // namespace scootsafe
