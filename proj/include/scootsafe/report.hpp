#pragma once

// Corpus aggregation. Everything is kept as mergeable accumulators (count,
// sum, min, max) so partial reports over disjoint case sets combine exactly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scootsafe/conflict.hpp"
#include "scootsafe/encounter_geometry.hpp"
#include "scootsafe/error.hpp"
#include "scootsafe/kinematics.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

struct CaseMetrics {
    std::string id;
    Dataset dataset = Dataset::VehicleCentered;
    double min_distance = 0.0;         // m
    double vehicle_median_speed = 0.0; // m/s
    double escooter_median_speed = 0.0;
    std::optional<double> min_gap_time;
    std::optional<double> mttc;
    bool is_potential_conflict = false;
    std::optional<RiskLevel> risk;
    std::optional<GeometryClass> geometry;
};

inline void check_invariants(const CaseMetrics& m) {
    auto fail = [&](const char* what) {
        throw Error(ErrorKind::InvalidArgument, "case " + m.id + ": " + what);
    };
    if (!(m.min_distance >= 0.0)) fail("min_distance must be >= 0");
    if (!(m.vehicle_median_speed >= 0.0) || !(m.escooter_median_speed >= 0.0)) fail("speeds must be >= 0");
    if (m.risk && !m.is_potential_conflict) fail("risk present on a baseline case");
    if (m.mttc && !m.is_potential_conflict) fail("mttc present on a baseline case");
    if (m.mttc && !(*m.mttc > 0.0)) fail("mttc must be > 0");
    if (m.risk.has_value() != m.mttc.has_value()) fail("risk present iff mttc present");
    if (m.min_gap_time && !(*m.min_gap_time >= 0.0)) fail("min_gap_time must be >= 0");
}

/// Count/sum/min/max accumulator.
struct Stat {
    std::size_t count = 0;
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double v) {
        ++count;
        sum += v;
        min = std::min(min, v);
        max = std::max(max, v);
    }

    void merge(const Stat& o) {
        count += o.count;
        sum += o.sum;
        min = std::min(min, o.min);
        max = std::max(max, o.max);
    }

    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
    std::optional<double> minimum() const { return count ? std::optional(min) : std::nullopt; }
    std::optional<double> maximum() const { return count ? std::optional(max) : std::nullopt; }
};

/// Scenario-variable accumulators for one group of cases.
struct GroupStats {
    std::size_t cases = 0;
    Stat min_distance;
    Stat vehicle_speed;  // m/s
    Stat escooter_speed; // m/s
    Stat min_gap_time;
    Stat mttc;
    std::size_t min_gap_missing = 0;
    std::size_t mttc_missing = 0; // conflict cases without a defined mTTC

    void add(const CaseMetrics& m) {
        ++cases;
        min_distance.add(m.min_distance);
        vehicle_speed.add(m.vehicle_median_speed);
        escooter_speed.add(m.escooter_median_speed);
        if (m.min_gap_time) min_gap_time.add(*m.min_gap_time);
        else ++min_gap_missing;
        if (m.mttc) mttc.add(*m.mttc);
        else if (m.is_potential_conflict) ++mttc_missing;
    }

    void merge(const GroupStats& o) {
        cases += o.cases;
        min_distance.merge(o.min_distance);
        vehicle_speed.merge(o.vehicle_speed);
        escooter_speed.merge(o.escooter_speed);
        min_gap_time.merge(o.min_gap_time);
        mttc.merge(o.mttc);
        min_gap_missing += o.min_gap_missing;
        mttc_missing += o.mttc_missing;
    }
};

/// mTTC histogram with fixed-width bins; the last bin is open-ended.
struct Histogram {
    double bin_width = 2.0;
    std::vector<std::size_t> counts = std::vector<std::size_t>(3, 0);

    void add(double v) {
        auto bin = static_cast<std::size_t>(std::floor(std::max(v, 0.0) / bin_width));
        counts[std::min(bin, counts.size() - 1)] += 1;
    }

    void merge(const Histogram& o) {
        if (o.bin_width != bin_width || o.counts.size() != counts.size()) {
            throw Error(ErrorKind::InvalidArgument, "cannot merge histograms with different bins");
        }
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }

    std::size_t total() const {
        std::size_t n = 0;
        for (auto c : counts) n += c;
        return n;
    }

    double lower_edge(std::size_t bin) const { return static_cast<double>(bin) * bin_width; }
    /// nullopt for the open last bin.
    std::optional<double> upper_edge(std::size_t bin) const {
        if (bin + 1 == counts.size()) return std::nullopt;
        return static_cast<double>(bin + 1) * bin_width;
    }
};

struct GeometryDistribution {
    std::array<std::size_t, 4> counts{};
    std::size_t unclassified = 0;

    void add(std::optional<GeometryClass> g) {
        if (g) counts[static_cast<std::size_t>(*g)] += 1;
        else ++unclassified;
    }

    void merge(const GeometryDistribution& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        unclassified += o.unclassified;
    }

    std::size_t count(GeometryClass g) const { return counts[static_cast<std::size_t>(g)]; }
    std::size_t classified() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    std::size_t total() const { return classified() + unclassified; }

    /// Share of all cases in the group, unclassifiable ones included, in percent.
    double percent(GeometryClass g) const {
        return total() ? 100.0 * static_cast<double>(count(g)) / static_cast<double>(total()) : 0.0;
    }
    double percent_unclassified() const {
        return total() ? 100.0 * static_cast<double>(unclassified) / static_cast<double>(total()) : 0.0;
    }
    /// Share among classified cases only, in percent.
    double percent_of_classified(GeometryClass g) const {
        return classified() ? 100.0 * static_cast<double>(count(g)) / static_cast<double>(classified()) : 0.0;
    }
};

struct GeometryHistogram {
    GeometryDistribution all;
    GeometryDistribution conflict;
};

struct AggregateReport {
    GroupStats all;
    GroupStats conflict;
    GroupStats baseline;
    Histogram mttc_histogram;
    std::array<std::size_t, 3> risk_counts{}; // High, Medium, Low
    GeometryHistogram geometry;

    std::size_t case_count() const { return all.cases; }
    std::size_t conflict_count() const { return conflict.cases; }
    double conflict_share() const {
        return all.cases ? static_cast<double>(conflict.cases) / static_cast<double>(all.cases) : 0.0;
    }
    double baseline_share() const {
        return all.cases ? static_cast<double>(baseline.cases) / static_cast<double>(all.cases) : 0.0;
    }
    std::size_t risk_count(RiskLevel r) const { return risk_counts[static_cast<std::size_t>(r)]; }

    void add(const CaseMetrics& m) {
        check_invariants(m);
        all.add(m);
        (m.is_potential_conflict ? conflict : baseline).add(m);
        if (m.is_potential_conflict && m.mttc) mttc_histogram.add(*m.mttc);
        if (m.risk) risk_counts[static_cast<std::size_t>(*m.risk)] += 1;
        geometry.all.add(m.geometry);
        if (m.is_potential_conflict) geometry.conflict.add(m.geometry);
    }

    void merge(const AggregateReport& o) {
        all.merge(o.all);
        conflict.merge(o.conflict);
        baseline.merge(o.baseline);
        mttc_histogram.merge(o.mttc_histogram);
        for (std::size_t i = 0; i < risk_counts.size(); ++i) risk_counts[i] += o.risk_counts[i];
        geometry.all.merge(o.geometry.all);
        geometry.conflict.merge(o.geometry.conflict);
    }
};

inline constexpr double kDefaultHistogramBinWidthS = 2.0;

inline AggregateReport empty_report(double bin_width = kDefaultHistogramBinWidthS) {
    if (!(bin_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "histogram bin width must be > 0");
    AggregateReport r;
    r.mttc_histogram.bin_width = bin_width;
    return r;
}

inline AggregateReport summarize(std::span<const CaseMetrics> cases,
                                 double bin_width = kDefaultHistogramBinWidthS) {
    if (cases.empty()) throw Error(ErrorKind::EmptyCorpus, "empty corpus: nothing to summarize");
    auto r = empty_report(bin_width);
    for (const auto& c : cases) r.add(c);
    return r;
}

/// Combines reports over disjoint case sets.
inline AggregateReport merge(AggregateReport a, const AggregateReport& b) {
    a.merge(b);
    return a;
}

struct GroupAverages {
    std::size_t cases = 0;
    double min_distance_m = 0.0;
    double vehicle_speed_mph = 0.0;
    double escooter_speed_mph = 0.0;
    std::optional<double> min_gap_time_s; // absent when no case in the group has one
};

/// Conflict vs baseline averages; an empty group is left absent.
struct ComparisonTable {
    std::optional<GroupAverages> conflict;
    std::optional<GroupAverages> baseline;
};

inline std::optional<GroupAverages> group_averages(const GroupStats& g) {
    if (g.cases == 0) return std::nullopt;
    return GroupAverages{g.cases, *g.min_distance.mean(), mps_to_mph(*g.vehicle_speed.mean()),
                         mps_to_mph(*g.escooter_speed.mean()), g.min_gap_time.mean()};
}

inline ComparisonTable comparison(const AggregateReport& r) {
    return {group_averages(r.conflict), group_averages(r.baseline)};
}

inline ComparisonTable compare_conflict_baseline(std::span<const CaseMetrics> cases) {
    GroupStats conflict, baseline;
    for (const auto& c : cases) (c.is_potential_conflict ? conflict : baseline).add(c);
    return {group_averages(conflict), group_averages(baseline)};
}

inline GeometryHistogram geometry_histogram(std::span<const CaseMetrics> cases) {
    if (cases.empty()) throw Error(ErrorKind::EmptyCorpus, "empty corpus: no geometry histogram");
    GeometryHistogram h;
    for (const auto& c : cases) {
        h.all.add(c.geometry);
        if (c.is_potential_conflict) h.conflict.add(c.geometry);
    }
    return h;
}

} // namespace scootsafe
