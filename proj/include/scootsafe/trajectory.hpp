#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scootsafe/error.hpp"
#include "scootsafe/geodesy.hpp"

namespace scootsafe {

enum class AgentKind { Vehicle, EScooter };
enum class Dataset { VehicleCentered, EScooterCentered };

inline constexpr std::string_view to_string(AgentKind a) {
    return a == AgentKind::Vehicle ? "vehicle" : "escooter";
}

inline constexpr std::string_view to_string(Dataset d) {
    return d == Dataset::VehicleCentered ? "vehicle_centered" : "escooter_centered";
}

inline std::optional<AgentKind> parse_agent(std::string_view s) {
    if (s == "vehicle") return AgentKind::Vehicle;
    if (s == "escooter") return AgentKind::EScooter;
    return std::nullopt;
}

inline std::optional<Dataset> parse_dataset(std::string_view s) {
    if (s == "vehicle_centered") return Dataset::VehicleCentered;
    if (s == "escooter_centered") return Dataset::EScooterCentered;
    return std::nullopt;
}

struct GpsFix {
    double t = 0.0;
    GeoPoint pos;
    std::optional<double> alt;
};

struct RawTrajectory {
    AgentKind agent = AgentKind::Vehicle;
    std::vector<GpsFix> fixes;
};

/// Uniformly sampled planar track.
struct CleanTrajectory {
    AgentKind agent = AgentKind::Vehicle;
    double t0 = 0.0;
    double dt = 0.1;
    std::vector<PlanePoint> points;
    ProjectionContext ctx;

    std::size_t size() const { return points.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

/// A vehicle/e-scooter pair on a shared time grid and planar frame.
struct EncounterCase {
    std::string id;
    Dataset dataset = Dataset::VehicleCentered;
    CleanTrajectory vehicle;
    CleanTrajectory escooter;

    std::size_t frames() const { return vehicle.points.size(); }
    double dt() const { return vehicle.dt; }
    double time_at(std::size_t i) const { return vehicle.time_at(i); }
};

/// Throws unless the case satisfies the synchronized-pair invariant.
inline void check_synchronized(const EncounterCase& c) {
    const auto& v = c.vehicle;
    const auto& s = c.escooter;
    if (v.agent != AgentKind::Vehicle || s.agent != AgentKind::EScooter) {
        throw Error(ErrorKind::InvalidArgument, "case " + c.id + ": agent slots swapped");
    }
    if (!(v.dt > 0.0) || v.points.size() < 2) {
        throw Error(ErrorKind::DegenerateTrajectory, "case " + c.id + ": needs dt > 0 and >= 2 frames");
    }
    if (v.t0 != s.t0 || v.dt != s.dt || v.points.size() != s.points.size() || !(v.ctx == s.ctx)) {
        throw Error(ErrorKind::InvalidArgument, "case " + c.id + ": trajectories are not synchronized");
    }
}

/// Checks RawTrajectory invariants: >= 2 fixes, valid positions, strictly increasing finite t.
inline void validate(const RawTrajectory& raw) {
    if (raw.fixes.size() < 2) {
        throw Error(ErrorKind::DegenerateTrajectory, "trajectory has fewer than 2 fixes");
    }
    for (std::size_t i = 0; i < raw.fixes.size(); ++i) {
        const auto& f = raw.fixes[i];
        if (!std::isfinite(f.t) || !f.pos.valid()) {
            throw Error(ErrorKind::MalformedInput, "fix " + std::to_string(i) + " has invalid time or position");
        }
        if (i > 0 && !(f.t > raw.fixes[i - 1].t)) {
            throw Error(ErrorKind::MalformedInput,
                        "timestamps not strictly increasing at fix " + std::to_string(i));
        }
    }
}

struct ConditioningConfig {
    double max_plausible_speed_mps = 30.0;
    double resample_hz = 10.0;
    double max_gap_s = 1.0;
    int smooth_window = 5;
};

/// Speed-gated forward filter: drops any fix whose implied speed from the
/// previously retained fix exceeds max_speed. The first fix is always kept.
inline RawTrajectory remove_outliers(const RawTrajectory& raw, double max_speed) {
    validate(raw);
    if (!(max_speed >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "remove_outliers: max_speed must be >= 0");
    }
    RawTrajectory out{raw.agent, {}};
    out.fixes.reserve(raw.fixes.size());
    out.fixes.push_back(raw.fixes.front());
    for (std::size_t i = 1; i < raw.fixes.size(); ++i) {
        const auto& prev = out.fixes.back();
        const auto& cur = raw.fixes[i];
        const double speed = haversine_distance(prev.pos, cur.pos) / (cur.t - prev.t);
        if (speed <= max_speed) out.fixes.push_back(cur);
    }
    if (out.fixes.size() < 2) {
        throw Error(ErrorKind::DegenerateTrajectory, "fewer than 2 fixes survive outlier removal");
    }
    return out;
}

namespace detail {

inline ProjectionContext own_frame(const RawTrajectory& raw) {
    std::vector<GeoPoint> pts;
    pts.reserve(raw.fixes.size());
    for (const auto& f : raw.fixes) pts.push_back(f.pos);
    return ProjectionContext::centroid_of(pts);
}

inline std::vector<PlanePoint> project(const ProjectionContext& ctx, const RawTrajectory& raw) {
    std::vector<PlanePoint> out;
    out.reserve(raw.fixes.size());
    for (const auto& f : raw.fixes) out.push_back(to_plane(ctx, f.pos));
    return out;
}

inline double lerp(double a, double b, double u) { return a + (b - a) * u; }

} // namespace detail

struct GapFillResult {
    RawTrajectory trajectory;
    std::size_t gaps_split = 0; // intervals longer than max_gap
    std::size_t fixes_discarded = 0; // fixes outside the retained segment
};

/// Fills every interval <= max_gap with planar-linear fixes at spacing <= target_dt.
/// Intervals > max_gap split the track; the longest segment by duration is kept
/// (ties go to the earlier one).
inline GapFillResult fill_gaps(const RawTrajectory& raw, double target_dt, double max_gap) {
    validate(raw);
    if (!(target_dt > 0.0) || !(max_gap > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "fill_gaps: target_dt and max_gap must be > 0");
    }
    const auto& fx = raw.fixes;

    GapFillResult result;
    std::size_t best_begin = 0, best_end = 0; // [begin, end]
    double best_span = -1.0;
    std::size_t seg_begin = 0;
    for (std::size_t i = 1; i <= fx.size(); ++i) {
        const bool boundary = i == fx.size() || fx[i].t - fx[i - 1].t > max_gap;
        if (!boundary) continue;
        if (i < fx.size()) ++result.gaps_split;
        const double span = fx[i - 1].t - fx[seg_begin].t;
        if (span > best_span) {
            best_span = span;
            best_begin = seg_begin;
            best_end = i - 1;
        }
        seg_begin = i;
    }
    if (best_end == best_begin) {
        throw Error(ErrorKind::DegenerateTrajectory, "no segment with >= 2 fixes between gaps");
    }
    result.fixes_discarded = fx.size() - (best_end - best_begin + 1);

    RawTrajectory seg{raw.agent, {fx.begin() + static_cast<std::ptrdiff_t>(best_begin),
                                  fx.begin() + static_cast<std::ptrdiff_t>(best_end) + 1}};
    const auto ctx = detail::own_frame(seg);
    const auto pts = detail::project(ctx, seg);

    auto& out = result.trajectory;
    out.agent = raw.agent;
    out.fixes.reserve(seg.fixes.size());
    for (std::size_t i = 0; i + 1 < seg.fixes.size(); ++i) {
        const auto& a = seg.fixes[i];
        const auto& b = seg.fixes[i + 1];
        out.fixes.push_back(a);
        const double interval = b.t - a.t;
        const auto steps = static_cast<std::size_t>(std::ceil(interval / target_dt - 1e-9));
        for (std::size_t k = 1; k < steps; ++k) {
            const double u = static_cast<double>(k) / static_cast<double>(steps);
            const PlanePoint q{detail::lerp(pts[i].x, pts[i + 1].x, u), detail::lerp(pts[i].y, pts[i + 1].y, u)};
            GpsFix f{detail::lerp(a.t, b.t, u), from_plane(ctx, q), std::nullopt};
            if (a.alt && b.alt) f.alt = detail::lerp(*a.alt, *b.alt, u);
            out.fixes.push_back(f);
        }
    }
    out.fixes.push_back(seg.fixes.back());
    return result;
}

inline RawTrajectory interpolate_gaps(const RawTrajectory& raw, double target_dt, double max_gap) {
    return fill_gaps(raw, target_dt, max_gap).trajectory;
}

/// Centred moving average of planar position. Near the ends the window
/// shrinks symmetrically, so straight constant-velocity tracks are fixed points.
inline RawTrajectory smooth(const RawTrajectory& raw, int window) {
    validate(raw);
    if (window < 1 || window % 2 == 0) {
        throw Error(ErrorKind::InvalidArgument, "smooth: window must be odd and >= 1");
    }
    if (window == 1) return raw;

    const auto ctx = detail::own_frame(raw);
    const auto pts = detail::project(ctx, raw);
    const std::size_t n = pts.size();
    const std::size_t half = static_cast<std::size_t>(window / 2);

    RawTrajectory out = raw;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t h = std::min({half, i, n - 1 - i});
        if (h == 0) continue;
        PlanePoint acc{};
        for (std::size_t j = i - h; j <= i + h; ++j) acc += pts[j];
        acc *= 1.0 / static_cast<double>(2 * h + 1);
        out.fixes[i].pos = from_plane(ctx, acc);
    }
    return out;
}

/// Outlier removal, gap filling and smoothing, in that order.
inline RawTrajectory condition(const RawTrajectory& raw, const ConditioningConfig& cfg = {}) {
    auto filtered = remove_outliers(raw, cfg.max_plausible_speed_mps);
    auto filled = interpolate_gaps(filtered, 1.0 / cfg.resample_hz, cfg.max_gap_s);
    return smooth(filled, cfg.smooth_window);
}

namespace detail {

// Linear interpolation of projected fixes at time t (t inside the track).
inline PlanePoint sample_at(const RawTrajectory& raw, const std::vector<PlanePoint>& pts, double t) {
    const auto& fx = raw.fixes;
    auto it = std::upper_bound(fx.begin(), fx.end(), t, [](double v, const GpsFix& f) { return v < f.t; });
    if (it == fx.begin()) return pts.front();
    if (it == fx.end()) return pts.back();
    const auto hi = static_cast<std::size_t>(it - fx.begin());
    const auto lo = hi - 1;
    const double u = (t - fx[lo].t) / (fx[hi].t - fx[lo].t);
    return {lerp(pts[lo].x, pts[hi].x, u), lerp(pts[lo].y, pts[hi].y, u)};
}

} // namespace detail

inline constexpr double kMinOverlapS = 1.0;

/// Resamples a vehicle and an e-scooter track onto the shared uniform grid
/// covering their temporal overlap, in a frame centred on all their fixes.
inline EncounterCase synchronize(const RawTrajectory& a, const RawTrajectory& b, double hz,
                                 std::string id = {}, Dataset dataset = Dataset::VehicleCentered) {
    validate(a);
    validate(b);
    if (!(hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "synchronize: hz must be > 0");
    if (a.agent == b.agent) {
        throw Error(ErrorKind::InvalidArgument, "synchronize: need one vehicle and one e-scooter track");
    }
    const RawTrajectory& veh = a.agent == AgentKind::Vehicle ? a : b;
    const RawTrajectory& sco = a.agent == AgentKind::Vehicle ? b : a;

    const double start = std::max(veh.fixes.front().t, sco.fixes.front().t);
    const double end = std::min(veh.fixes.back().t, sco.fixes.back().t);
    if (end < start) {
        throw Error(ErrorKind::NoOverlap, "case " + id + ": tracks do not overlap in time");
    }
    if (end - start < kMinOverlapS - 1e-9) {
        throw Error(ErrorKind::NoOverlap, "case " + id + ": tracks overlap for less than 1 s");
    }

    std::vector<GeoPoint> all;
    all.reserve(veh.fixes.size() + sco.fixes.size());
    for (const auto& f : veh.fixes) all.push_back(f.pos);
    for (const auto& f : sco.fixes) all.push_back(f.pos);
    const auto ctx = ProjectionContext::centroid_of(all);

    const double dt = 1.0 / hz;
    const auto n = static_cast<std::size_t>(std::floor((end - start) * hz + 1e-9)) + 1;

    auto resample = [&](const RawTrajectory& raw) {
        const auto pts = detail::project(ctx, raw);
        CleanTrajectory ct{raw.agent, start, dt, {}, ctx};
        ct.points.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            ct.points.push_back(detail::sample_at(raw, pts, start + static_cast<double>(k) * dt));
        }
        return ct;
    };

    EncounterCase c{std::move(id), dataset, resample(veh), resample(sco)};
    check_synchronized(c);
    return c;
}

} // namespace scootsafe
