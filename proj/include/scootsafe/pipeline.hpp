#pragma once

#include <optional>
#include <string>
#include <utility>

#include "scootsafe/conflict.hpp"
#include "scootsafe/encounter_geometry.hpp"
#include "scootsafe/error.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/report.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

/// Every tunable of a batch run.
struct RunConfig {
    ConflictConfig conflict;
    ConditioningConfig conditioning;
    double parallel_angle_deg = kDefaultParallelAngleDeg;
    double phase_half_window_s = kDefaultHalfWindowS;
    double stationary_eps_mps = kStationaryEpsMps;
    double histogram_bin_width_s = kDefaultHistogramBinWidthS;

    void validate() const {
        conflict.validate();
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string("config: ") + name + " must be > 0");
        };
        positive(conditioning.resample_hz, "resample_hz");
        positive(conditioning.max_plausible_speed_mps, "max_plausible_speed_mps");
        positive(conditioning.max_gap_s, "max_gap_s");
        positive(parallel_angle_deg, "parallel_angle_deg");
        positive(phase_half_window_s, "phase_half_window_s");
        positive(stationary_eps_mps, "stationary_eps_mps");
        positive(histogram_bin_width_s, "histogram_bin_width_s");
        if (conditioning.smooth_window < 1 || conditioning.smooth_window % 2 == 0) {
            throw Error(ErrorKind::InvalidArgument, "config: smooth_window must be odd and >= 1");
        }
        if (!(parallel_angle_deg < 90.0)) {
            throw Error(ErrorKind::InvalidArgument, "config: parallel_angle_deg must be < 90");
        }
    }
};

/// Conditions both raw tracks and puts them on the shared grid.
inline EncounterCase build_case(const RawTrajectory& vehicle, const RawTrajectory& escooter, std::string id,
                                Dataset dataset, const RunConfig& cfg = {}) {
    const auto v = condition(vehicle, cfg.conditioning);
    const auto s = condition(escooter, cfg.conditioning);
    return synchronize(v, s, cfg.conditioning.resample_hz, std::move(id), dataset);
}

struct CaseAnalysis {
    CaseMetrics metrics;
    ConflictProfile profile;
    InteractionPhase phase;
};

inline CaseAnalysis analyze(const EncounterCase& c, const RunConfig& cfg = {}) {
    check_synchronized(c);
    const auto vs = estimate_states(c.vehicle, cfg.stationary_eps_mps);
    const auto ss = estimate_states(c.escooter, cfg.stationary_eps_mps);

    CaseAnalysis out;
    out.profile = analyze_states(vs, ss, cfg.conflict);
    out.phase = interaction_phase(c, cfg.phase_half_window_s);

    auto& m = out.metrics;
    m.id = c.id;
    m.dataset = c.dataset;
    m.min_distance = min_distance(c);
    m.vehicle_median_speed = median_speed(vs);
    m.escooter_median_speed = median_speed(ss);
    m.min_gap_time = out.profile.min_gap_time;
    m.mttc = out.profile.mttc;
    m.is_potential_conflict = out.profile.is_potential_conflict;
    m.risk = out.profile.risk;
    if (auto f = phase_features(vs, ss, out.phase)) {
        m.geometry = classify_features(*f, cfg.parallel_angle_deg);
    }
    return out;
}

} // namespace scootsafe
