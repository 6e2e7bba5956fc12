#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scootsafe/run.hpp"

using namespace scootsafe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("scootsafe_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<TrackRecord> two_cases() {
    std::vector<TrackRecord> out;
    ScenarioSpec a;
    a.geometry = GeometryClass::CrossingFromLeft;
    a.id = "case_a";
    ScenarioSpec b;
    b.geometry = GeometryClass::ParallelOppositeDirection;
    b.id = "case_b";
    b.dataset = Dataset::EScooterCentered;
    for (const auto& s : {a, b}) {
        auto [v, e] = generate_tracks(s);
        out.push_back({s.id, s.dataset, v, e});
    }
    return out;
}

std::string to_csv(const std::vector<TrackRecord>& r) {
    std::ostringstream s;
    write_tracks_csv(s, r);
    return s.str();
}

} // namespace

TEST(Ingest, WellFormedTwoCases) {
    std::istringstream in(to_csv(two_cases()));
    const auto r = ingest(in);
    ASSERT_EQ(r.cases.size(), 2u);
    EXPECT_EQ(r.cases[0].id, "case_a");
    EXPECT_EQ(r.cases[1].dataset, Dataset::EScooterCentered);
    EXPECT_TRUE(r.rejected_cases.empty());
    EXPECT_TRUE(r.rejected_rows.empty());
}

TEST(Ingest, MissingAgentTrackNamesTheCase) {
    auto recs = two_cases();
    std::ostringstream s;
    write_tracks_csv(s, recs);
    std::string text = s.str();
    // drop every escooter row of case_b
    std::istringstream lines(text);
    std::string line, filtered;
    while (std::getline(lines, line)) {
        if (line.rfind("case_b,escooter_centered,escooter", 0) == 0) continue;
        filtered += line + '\n';
    }
    std::istringstream in(filtered);
    const auto r = ingest(in);
    ASSERT_EQ(r.cases.size(), 1u);
    ASSERT_EQ(r.rejected_cases.size(), 1u);
    EXPECT_EQ(r.rejected_cases[0].id, "case_b");
    EXPECT_NE(r.rejected_cases[0].reason.find("case_b"), std::string::npos);
    EXPECT_NE(r.rejected_cases[0].reason.find("escooter"), std::string::npos);
}

TEST(Ingest, MissingColumnsAbort) {
    std::istringstream in("case_id,agent,t,lat,lon\nx,vehicle,0,39,-86\n");
    try {
        ingest(in);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedInput);
        EXPECT_NE(std::string(e.what()).find("dataset"), std::string::npos);
    }
}

TEST(Ingest, NonMonotoneTimestampsAndBadRows) {
    std::istringstream in(
        "case_id,dataset,agent,t,lat,lon,alt\n"
        "k,vehicle_centered,vehicle,0,39.77,-86.16,\n"
        "k,vehicle_centered,vehicle,1,39.7701,-86.16,\n"
        "k,vehicle_centered,vehicle,0.5,39.7702,-86.16,\n"
        "k,vehicle_centered,escooter,0,39.77,-86.1601,\n"
        "k,vehicle_centered,escooter,1,39.7701,-86.1601,\n"
        "k,vehicle_centered,bicycle,1,39.7701,-86.1601,\n"
        "k,vehicle_centered,escooter,abc,39.7701,-86.1601,\n"
        "k,vehicle_centered,escooter,2,95,-86.1601,\n");
    const auto r = ingest(in);
    EXPECT_TRUE(r.cases.empty());
    ASSERT_EQ(r.rejected_cases.size(), 1u);
    EXPECT_NE(r.rejected_cases[0].reason.find("non-monotone"), std::string::npos);
    EXPECT_NE(r.rejected_cases[0].reason.find("case k"), std::string::npos);
    ASSERT_EQ(r.rejected_rows.size(), 3u);
    EXPECT_EQ(r.rejected_rows[0].line, 7u);
}

TEST(Ingest, NoOverlapIsACaseDiagnostic) {
    std::istringstream in(
        "case_id,dataset,agent,t,lat,lon\n"
        "late,vehicle_centered,vehicle,0,39.77,-86.16\n"
        "late,vehicle_centered,vehicle,1,39.7701,-86.16\n"
        "late,vehicle_centered,escooter,5,39.77,-86.1601\n"
        "late,vehicle_centered,escooter,6,39.7701,-86.1601\n");
    const auto r = ingest(in);
    ASSERT_EQ(r.rejected_cases.size(), 1u);
    EXPECT_EQ(r.rejected_cases[0].kind, ErrorKind::NoOverlap);
    EXPECT_NE(r.rejected_cases[0].reason.find("late"), std::string::npos);
}

TEST(Ingest, GeneratedFileMatchesInMemoryPipeline) {
    const auto recs = two_cases();
    std::istringstream in(to_csv(recs));
    const auto r = ingest(in);
    RunConfig cfg;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto mem = build_case(recs[i].vehicle, recs[i].escooter, recs[i].case_id, recs[i].dataset, cfg);
        EXPECT_EQ(mem.vehicle.points, r.cases[i].vehicle.points);
        EXPECT_EQ(mem.escooter.points, r.cases[i].escooter.points);
        const auto a = analyze(mem, cfg).metrics, b = analyze(r.cases[i], cfg).metrics;
        EXPECT_EQ(a.min_distance, b.min_distance);
        EXPECT_EQ(a.min_gap_time, b.min_gap_time);
        EXPECT_EQ(a.mttc, b.mttc);
        EXPECT_EQ(a.geometry, b.geometry);
    }
}

TEST(Config, FileOverridesAndProvenance) {
    auto run = default_configuration();
    apply_config_json(run, json{{"collision_radius_m", 1.5}, {"smooth_window", 3}});
    apply_override(run, "conflict_gap_threshold_s=2.5");
    EXPECT_DOUBLE_EQ(run.config.conflict.collision_radius, 1.5);
    EXPECT_EQ(run.config.conditioning.smooth_window, 3);
    EXPECT_DOUBLE_EQ(run.config.conflict.conflict_gap_threshold, 2.5);
    const auto j = config_to_json(run);
    EXPECT_EQ(j["gap_cap_s"]["source"], "paper");
    EXPECT_EQ(j["gap_cap_s"]["value"], 20.0);
    EXPECT_EQ(j["risk_high_s"]["source"], "paper");
    EXPECT_EQ(j["resample_hz"]["source"], "default");
    EXPECT_EQ(j["collision_radius_m"]["source"], "config_file");
    EXPECT_EQ(j["conflict_gap_threshold_s"]["source"], "override");
    EXPECT_THROW(apply_override(run, "bogus=1"), Error);
    EXPECT_THROW(apply_override(run, "smooth_window=2.5"), Error);
}

TEST(RunAnalyze, WritesAllOutputsDeterministically) {
    const auto dir = scratch("run");
    {
        std::ofstream f(dir / "in.csv");
        f << to_csv(two_cases());
    }
    const auto run = default_configuration();
    std::ostringstream log;
    ASSERT_EQ(run_analyze(run, (dir / "in.csv").string(), dir / "out1", log), kExitOk) << log.str();
    ASSERT_EQ(run_analyze(run, (dir / "in.csv").string(), dir / "out2", log), kExitOk);
    for (const char* name : {"report.json", "cases.csv", "mttc_hist.csv", "risk_dist.csv", "geometry_dist.csv"}) {
        ASSERT_TRUE(fs::exists(dir / "out1" / name)) << name;
        EXPECT_EQ(slurp(dir / "out1" / name), slurp(dir / "out2" / name)) << name;
    }
    const auto report = json::parse(slurp(dir / "out1" / "report.json"));
    EXPECT_EQ(report["input"]["cases_total"], 2);
    EXPECT_EQ(report["reports"]["all"]["case_count"], 2);
    EXPECT_TRUE(report["reports"].contains("vehicle_centered"));
    EXPECT_TRUE(report["reports"].contains("escooter_centered"));
    EXPECT_EQ(report["config"]["conflict_gap_threshold_s"]["value"], 3.0);
    EXPECT_EQ(report["cases"].size(), 2u);

    const auto cases = slurp(dir / "out1" / "cases.csv");
    EXPECT_NE(cases.find("case_a,vehicle_centered,analyzed"), std::string::npos);
    EXPECT_NE(cases.find("case_b,escooter_centered,analyzed"), std::string::npos);
}

TEST(RunAnalyze, EmptyInputIsEmptyCorpus) {
    const auto dir = scratch("empty");
    { std::ofstream f(dir / "empty.csv"); }
    std::ostringstream log;
    EXPECT_EQ(run_analyze(default_configuration(), (dir / "empty.csv").string(), dir / "out", log), kExitEmptyCorpus);
    EXPECT_NE(log.str().find("empty corpus"), std::string::npos);
    { std::ofstream f(dir / "header.csv"); f << "case_id,dataset,agent,t,lat,lon,alt\n"; }
    EXPECT_EQ(run_analyze(default_configuration(), (dir / "header.csv").string(), dir / "out", log), kExitEmptyCorpus);
}

TEST(RunAnalyze, UnreadableInputAndUnwritableOutput) {
    const auto dir = scratch("io");
    std::ostringstream log;
    EXPECT_EQ(run_analyze(default_configuration(), (dir / "missing.csv").string(), dir / "out", log), kExitInput);
    {
        std::ofstream f(dir / "in.csv");
        f << to_csv(two_cases());
        std::ofstream blocker(dir / "blocker");
        blocker << "x";
    }
    EXPECT_EQ(run_analyze(default_configuration(), (dir / "in.csv").string(), dir / "blocker" / "out", log),
              kExitOutput);
}

TEST(RunAnalyze, CompletenessIncludesRejectedCases) {
    const auto dir = scratch("complete");
    {
        std::ofstream f(dir / "in.csv");
        f << to_csv(two_cases());
        f << "solo,vehicle_centered,vehicle,0,39.77,-86.16,\n"
          << "solo,vehicle_centered,vehicle,1,39.7701,-86.16,\n";
    }
    std::ostringstream log;
    ASSERT_EQ(run_analyze(default_configuration(), (dir / "in.csv").string(), dir / "out", log), kExitOk);
    const auto cases = slurp(dir / "out" / "cases.csv");
    std::size_t rows = 0;
    for (char ch : cases) rows += ch == '\n';
    EXPECT_EQ(rows, 4u); // header + 3 cases
    EXPECT_NE(cases.find("solo,,rejected"), std::string::npos);
}

TEST(Generate, SpecExpansionIsSeededAndRanged) {
    const json spec = {{"seed", 9},
                       {"defaults", {{"duration", 20}, {"vehicle_speed", json::array({8, 12})}}},
                       {"cases", json::array({{{"geometry", "crossing_from_left"}, {"count", 3}, {"designed_gap", json::array({0.5, 2.5})}},
                                              {{"geometry", "parallel_same_direction"}, {"count", 2}, {"dataset", "escooter_centered"}}})}};
    const auto a = expand_generation_spec(spec, std::nullopt);
    const auto b = expand_generation_spec(spec, std::nullopt);
    const auto c = expand_generation_spec(spec, 10u);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].vehicle_speed, b[i].vehicle_speed);
        EXPECT_GE(a[i].vehicle_speed, 8.0);
        EXPECT_LE(a[i].vehicle_speed, 12.0);
    }
    EXPECT_NE(a[0].vehicle_speed, c[0].vehicle_speed);
    EXPECT_GE(a[1].designed_gap, 0.5);
    EXPECT_LE(a[1].designed_gap, 2.5);
    EXPECT_EQ(a[3].dataset, Dataset::EScooterCentered);
    EXPECT_EQ(a[4].id, "case_00004");
    EXPECT_THROW(expand_generation_spec(json{{"cases", json::array({{{"geometry", "zigzag"}}})}}, std::nullopt), Error);
}

TEST(Generate, WritesIngestableCsv) {
    const auto dir = scratch("gen");
    {
        std::ofstream f(dir / "spec.json");
        f << R"({"seed": 3, "cases": [{"geometry": "crossing_from_right", "count": 4, "designed_gap": [0.5, 2.0]}]})";
    }
    std::ostringstream log;
    ASSERT_EQ(run_generate((dir / "spec.json").string(), (dir / "out.csv").string(), std::nullopt, log), kExitOk);
    const auto r = ingest_file((dir / "out.csv").string());
    EXPECT_EQ(r.cases.size(), 4u);
    EXPECT_EQ(run_generate((dir / "nope.json").string(), (dir / "x.csv").string(), std::nullopt, log), kExitInput);
}
