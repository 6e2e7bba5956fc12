#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "scootsafe/report.hpp"

using namespace scootsafe;

namespace {

CaseMetrics metrics(std::string id, bool conflict, double mttc = 0.0) {
    CaseMetrics m;
    m.id = std::move(id);
    m.min_distance = 10.0;
    m.vehicle_median_speed = 5.0;
    m.escooter_median_speed = 3.0;
    m.min_gap_time = conflict ? 1.0 : 6.0;
    m.is_potential_conflict = conflict;
    if (conflict && mttc > 0.0) {
        m.mttc = mttc;
        m.risk = risk_level(mttc);
    }
    m.geometry = GeometryClass::ParallelSameDirection;
    return m;
}

std::vector<CaseMetrics> random_corpus(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1), dist(3, 60), spd(0, 15), gap(0, 20), ttc(0.5, 14);
    std::vector<CaseMetrics> out;
    for (std::size_t i = 0; i < n; ++i) {
        CaseMetrics m;
        m.id = "c" + std::to_string(i);
        m.min_distance = dist(rng);
        m.vehicle_median_speed = spd(rng);
        m.escooter_median_speed = spd(rng) / 2;
        if (u(rng) < 0.8) m.min_gap_time = gap(rng);
        m.is_potential_conflict = m.min_gap_time && *m.min_gap_time < 3.0;
        if (m.is_potential_conflict && u(rng) < 0.9) {
            m.mttc = ttc(rng);
            m.risk = risk_level(*m.mttc);
        }
        if (u(rng) < 0.95) m.geometry = kAllGeometries[static_cast<std::size_t>(u(rng) * 4) % 4];
        out.push_back(m);
    }
    return out;
}

void expect_reports_equal(const AggregateReport& a, const AggregateReport& b) {
    auto stat_eq = [](const Stat& x, const Stat& y) {
        EXPECT_EQ(x.count, y.count);
        if (x.count == 0) return;
        EXPECT_NEAR(x.sum, y.sum, 1e-9 * std::max(1.0, std::abs(x.sum)));
        EXPECT_EQ(x.min, y.min);
        EXPECT_EQ(x.max, y.max);
    };
    for (auto [x, y] : {std::pair{&a.all, &b.all}, std::pair{&a.conflict, &b.conflict}, std::pair{&a.baseline, &b.baseline}}) {
        EXPECT_EQ(x->cases, y->cases);
        stat_eq(x->min_distance, y->min_distance);
        stat_eq(x->vehicle_speed, y->vehicle_speed);
        stat_eq(x->escooter_speed, y->escooter_speed);
        stat_eq(x->min_gap_time, y->min_gap_time);
        stat_eq(x->mttc, y->mttc);
        EXPECT_EQ(x->min_gap_missing, y->min_gap_missing);
        EXPECT_EQ(x->mttc_missing, y->mttc_missing);
    }
    EXPECT_EQ(a.mttc_histogram.counts, b.mttc_histogram.counts);
    EXPECT_EQ(a.risk_counts, b.risk_counts);
    EXPECT_EQ(a.geometry.all.counts, b.geometry.all.counts);
    EXPECT_EQ(a.geometry.all.unclassified, b.geometry.all.unclassified);
    EXPECT_EQ(a.geometry.conflict.counts, b.geometry.conflict.counts);
}

} // namespace

TEST(Summarize, EmptyCorpusThrows) {
    try {
        summarize({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyCorpus);
    }
}

TEST(Summarize, SingleCase) {
    const std::vector<CaseMetrics> one{metrics("a", true, 1.5)};
    const auto r = summarize(one);
    for (const Stat* s : {&r.all.min_distance, &r.all.vehicle_speed, &r.all.escooter_speed, &r.all.min_gap_time,
                          &r.conflict.mttc}) {
        ASSERT_EQ(s->count, 1u);
        EXPECT_EQ(*s->mean(), s->min);
        EXPECT_EQ(s->min, s->max);
    }
    EXPECT_DOUBLE_EQ(r.conflict_share(), 1.0);
    EXPECT_EQ(r.risk_count(RiskLevel::Medium), 1u);
}

TEST(Summarize, SkipsUndefinedValues) {
    auto a = metrics("a", false);
    a.min_gap_time.reset();
    auto b = metrics("b", true); // conflict without mttc
    const std::vector<CaseMetrics> cs{a, b};
    const auto r = summarize(cs);
    EXPECT_EQ(r.all.min_gap_time.count, 1u);
    EXPECT_EQ(r.all.min_gap_missing, 1u);
    EXPECT_EQ(r.conflict.mttc.count, 0u);
    EXPECT_EQ(r.conflict.mttc_missing, 1u);
    EXPECT_EQ(r.mttc_histogram.total(), 0u);
    EXPECT_DOUBLE_EQ(*r.all.min_gap_time.mean(), 1.0);
}

TEST(Summarize, HistogramBins) {
    std::vector<CaseMetrics> cs;
    for (int i = 0; i < 10; ++i) cs.push_back(metrics("a" + std::to_string(i), true, 1.5));
    for (int i = 0; i < 28; ++i) cs.push_back(metrics("b" + std::to_string(i), true, 3.0));
    for (int i = 0; i < 15; ++i) cs.push_back(metrics("c" + std::to_string(i), true, 5.0));
    cs.push_back(metrics("edge2", true, 2.0)); // lower edge belongs to [2,4)
    cs.push_back(metrics("edge4", true, 4.0));
    const auto r = summarize(cs);
    EXPECT_EQ(r.mttc_histogram.counts, (std::vector<std::size_t>{10, 29, 16}));
    EXPECT_EQ(r.mttc_histogram.total(), r.conflict.mttc.count);

    const auto wide = summarize(cs, 4.0);
    EXPECT_EQ(wide.mttc_histogram.counts, (std::vector<std::size_t>{39, 16, 0}));
}

TEST(Summarize, RejectsInconsistentMetrics) {
    auto m = metrics("x", false);
    m.risk = RiskLevel::High;
    m.mttc = 0.5;
    const std::vector<CaseMetrics> cs{m};
    EXPECT_THROW(summarize(cs), Error);
}

TEST(Summarize, PermutationInvariantAndMergeAssociative) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        auto cs = random_corpus(rng, 150);
        const auto whole = summarize(cs);
        EXPECT_NEAR(whole.conflict_share() + whole.baseline_share(), 1.0, 1e-15);
        EXPECT_EQ(whole.mttc_histogram.total(), whole.conflict.mttc.count);

        auto shuffled = cs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        expect_reports_equal(whole, summarize(shuffled));

        const auto cut = static_cast<std::ptrdiff_t>(rng() % (cs.size() - 1) + 1);
        const std::vector<CaseMetrics> a(cs.begin(), cs.begin() + cut), b(cs.begin() + cut, cs.end());
        expect_reports_equal(whole, merge(summarize(a), summarize(b)));
    }
}

TEST(Compare, GroupsAndPartialTables) {
    const std::vector<CaseMetrics> two{metrics("c", true, 2.0), metrics("b", false)};
    const auto t = compare_conflict_baseline(two);
    ASSERT_TRUE(t.conflict && t.baseline);
    EXPECT_DOUBLE_EQ(t.conflict->vehicle_speed_mph, mps_to_mph(5.0));
    EXPECT_DOUBLE_EQ(*t.conflict->min_gap_time_s, 1.0);
    EXPECT_DOUBLE_EQ(*t.baseline->min_gap_time_s, 6.0);
    EXPECT_DOUBLE_EQ(t.baseline->min_distance_m, 10.0);

    const std::vector<CaseMetrics> only_baseline{metrics("b", false)};
    const auto p = compare_conflict_baseline(only_baseline);
    EXPECT_FALSE(p.conflict);
    EXPECT_TRUE(p.baseline);
}

TEST(Compare, IdenticalGroupsGiveIdenticalColumns) {
    auto a = metrics("a", true, 2.0);
    auto b = a;
    b.id = "b";
    b.is_potential_conflict = false;
    b.mttc.reset();
    b.risk.reset();
    const std::vector<CaseMetrics> cs{a, b};
    const auto t = compare_conflict_baseline(cs);
    EXPECT_EQ(t.conflict->min_distance_m, t.baseline->min_distance_m);
    EXPECT_EQ(t.conflict->vehicle_speed_mph, t.baseline->vehicle_speed_mph);
    EXPECT_EQ(t.conflict->escooter_speed_mph, t.baseline->escooter_speed_mph);
    EXPECT_EQ(t.conflict->min_gap_time_s, t.baseline->min_gap_time_s);
}

TEST(GeometryHistogram, AllOneClass) {
    std::vector<CaseMetrics> cs;
    for (int i = 0; i < 7; ++i) cs.push_back(metrics(std::to_string(i), i % 2 == 0, 3.0));
    const auto h = geometry_histogram(cs);
    EXPECT_DOUBLE_EQ(h.all.percent(GeometryClass::ParallelSameDirection), 100.0);
    EXPECT_DOUBLE_EQ(h.all.percent(GeometryClass::CrossingFromLeft), 0.0);
    EXPECT_EQ(h.conflict.total(), 4u);
    EXPECT_EQ(h.all.classified(), 7u);
}
