#pragma once

// Batch orchestration behind the command-line tool: configuration with
// provenance, the analyze run and its output files, and corpus generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "scootsafe/csv_io.hpp"
#include "scootsafe/error.hpp"
#include "scootsafe/pipeline.hpp"
#include "scootsafe/report.hpp"
#include "scootsafe/scenario_gen.hpp"

namespace scootsafe {

using json = nlohmann::ordered_json;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInput = 2,
    kExitEmptyCorpus = 3,
    kExitOutput = 4,
    kExitConfig = 5,
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::EmptyCorpus: return kExitEmptyCorpus;
    case ErrorKind::Io: return kExitOutput;
    case ErrorKind::InvalidArgument:
    case ErrorKind::InfeasibleSpec: return kExitConfig;
    default: return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// Configuration

enum class ConfigSource { Paper, Default, File, Override };

inline constexpr std::string_view to_string(ConfigSource s) {
    switch (s) {
    case ConfigSource::Paper: return "paper";
    case ConfigSource::Default: return "default";
    case ConfigSource::File: return "config_file";
    case ConfigSource::Override: return "override";
    }
    return "unknown";
}

struct ConfigKey {
    std::string_view name;
    ConfigSource default_source;
    std::function<double&(RunConfig&)> field; // smooth_window handled separately
};

struct ConfiguredRun {
    RunConfig config;
    std::map<std::string, ConfigSource, std::less<>> sources;
};

namespace detail {

inline const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys{
        {"conflict_gap_threshold_s", ConfigSource::Paper, [](RunConfig& c) -> double& { return c.conflict.conflict_gap_threshold; }},
        {"gap_cap_s", ConfigSource::Paper, [](RunConfig& c) -> double& { return c.conflict.gap_cap; }},
        {"risk_high_s", ConfigSource::Paper, [](RunConfig& c) -> double& { return c.conflict.risk_high; }},
        {"risk_medium_s", ConfigSource::Paper, [](RunConfig& c) -> double& { return c.conflict.risk_medium; }},
        {"collision_radius_m", ConfigSource::Default, [](RunConfig& c) -> double& { return c.conflict.collision_radius; }},
        {"resample_hz", ConfigSource::Default, [](RunConfig& c) -> double& { return c.conditioning.resample_hz; }},
        {"max_plausible_speed_mps", ConfigSource::Default, [](RunConfig& c) -> double& { return c.conditioning.max_plausible_speed_mps; }},
        {"max_gap_s", ConfigSource::Default, [](RunConfig& c) -> double& { return c.conditioning.max_gap_s; }},
        {"parallel_angle_deg", ConfigSource::Default, [](RunConfig& c) -> double& { return c.parallel_angle_deg; }},
        {"phase_half_window_s", ConfigSource::Default, [](RunConfig& c) -> double& { return c.phase_half_window_s; }},
        {"stationary_eps_mps", ConfigSource::Default, [](RunConfig& c) -> double& { return c.stationary_eps_mps; }},
        {"histogram_bin_width_s", ConfigSource::Default, [](RunConfig& c) -> double& { return c.histogram_bin_width_s; }},
    };
    return keys;
}

inline constexpr std::string_view kSmoothWindowKey = "smooth_window";

} // namespace detail

inline ConfiguredRun default_configuration() {
    ConfiguredRun r;
    for (const auto& k : detail::config_keys()) r.sources.emplace(std::string(k.name), k.default_source);
    r.sources.emplace(std::string(detail::kSmoothWindowKey), ConfigSource::Default);
    return r;
}

/// Sets one named parameter from a number.
inline void set_config_value(ConfiguredRun& run, std::string_view key, double value, ConfigSource source) {
    if (key == detail::kSmoothWindowKey) {
        if (value != std::floor(value)) {
            throw Error(ErrorKind::InvalidArgument, "config: smooth_window must be an integer");
        }
        run.config.conditioning.smooth_window = static_cast<int>(value);
    } else {
        const auto& keys = detail::config_keys();
        auto it = std::find_if(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; });
        if (it == keys.end()) throw Error(ErrorKind::InvalidArgument, "config: unknown key '" + std::string(key) + "'");
        it->field(run.config) = value;
    }
    run.sources[std::string(key)] = source;
}

inline void apply_config_json(ConfiguredRun& run, const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config: top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) {
            throw Error(ErrorKind::InvalidArgument, "config: '" + key + "' must be a number");
        }
        set_config_value(run, key, value.get<double>(), ConfigSource::File);
    }
}

inline void load_config_file(ConfiguredRun& run, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, "config file " + path + " is not valid JSON: " + e.what());
    }
    apply_config_json(run, j);
}

/// Applies a "key=value" override.
inline void apply_override(ConfiguredRun& run, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw Error(ErrorKind::InvalidArgument, "override must look like key=value: " + std::string(assignment));
    }
    const auto value = parse_double(assignment.substr(eq + 1));
    if (!value) throw Error(ErrorKind::InvalidArgument, "override value is not a number: " + std::string(assignment));
    set_config_value(run, assignment.substr(0, eq), *value, ConfigSource::Override);
}

inline json config_to_json(const ConfiguredRun& run) {
    json out = json::object();
    RunConfig copy = run.config;
    for (const auto& k : detail::config_keys()) {
        out[std::string(k.name)] = {{"value", k.field(copy)}, {"source", to_string(run.sources.at(std::string(k.name)))}};
    }
    out[std::string(detail::kSmoothWindowKey)] = {
        {"value", run.config.conditioning.smooth_window},
        {"source", to_string(run.sources.at(std::string(detail::kSmoothWindowKey)))}};
    return out;
}

// ---------------------------------------------------------------------------
// Report serialization

namespace detail {

inline json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

inline json stat_json(const Stat& s, std::size_t skipped, double scale = 1.0) {
    auto scaled = [&](std::optional<double> v) { return v ? json(*v * scale) : json(nullptr); };
    return {{"average", scaled(s.mean())}, {"minimum", scaled(s.minimum())}, {"maximum", scaled(s.maximum())},
            {"count", s.count}, {"skipped", skipped}};
}

inline json geometry_json(const GeometryDistribution& d) {
    json classes = json::object();
    for (auto g : kAllGeometries) {
        classes[std::string(to_string(g))] = {{"count", d.count(g)},
                                              {"percent", d.percent(g)},
                                              {"percent_of_classified", d.percent_of_classified(g)}};
    }
    return {{"total", d.total()},
            {"classified", d.classified()},
            {"unclassified", d.unclassified},
            {"unclassified_percent", d.percent_unclassified()},
            {"classes", classes}};
}

inline json group_json(const std::optional<GroupAverages>& g) {
    if (!g) return nullptr;
    return {{"cases", g->cases},
            {"average_min_distance_m", g->min_distance_m},
            {"average_vehicle_median_speed_mph", g->vehicle_speed_mph},
            {"average_escooter_median_speed_mph", g->escooter_speed_mph},
            {"average_min_gap_time_s", opt(g->min_gap_time_s)}};
}

} // namespace detail

inline json report_to_json(const AggregateReport& r) {
    const auto& a = r.all;
    json vars = json::object();
    vars["min_distance_m"] = detail::stat_json(a.min_distance, 0);
    vars["vehicle_median_speed_mps"] = detail::stat_json(a.vehicle_speed, 0);
    vars["vehicle_median_speed_mph"] = detail::stat_json(a.vehicle_speed, 0, kMpsToMph);
    vars["escooter_median_speed_mps"] = detail::stat_json(a.escooter_speed, 0);
    vars["escooter_median_speed_mph"] = detail::stat_json(a.escooter_speed, 0, kMpsToMph);
    vars["mttc_s"] = detail::stat_json(r.conflict.mttc, r.conflict.mttc_missing);
    vars["min_gap_time_s"] = detail::stat_json(a.min_gap_time, a.min_gap_missing);

    json bins = json::array();
    const auto& h = r.mttc_histogram;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        bins.push_back({{"lower_s", h.lower_edge(i)}, {"upper_s", detail::opt(h.upper_edge(i))}, {"count", h.counts[i]}});
    }

    json risk = json::object();
    for (auto lvl : {RiskLevel::High, RiskLevel::Medium, RiskLevel::Low}) {
        risk[std::string(to_string(lvl))] = r.risk_count(lvl);
    }

    const auto cmp = comparison(r);
    return {{"case_count", r.case_count()},
            {"conflict_count", r.conflict_count()},
            {"baseline_count", r.baseline.cases},
            {"conflict_share", r.conflict_share()},
            {"baseline_share", r.baseline_share()},
            {"variables", vars},
            {"mttc_histogram", {{"bin_width_s", h.bin_width}, {"bins", bins}}},
            {"risk_distribution", risk},
            {"geometry_distribution",
             {{"all", detail::geometry_json(r.geometry.all)}, {"conflict", detail::geometry_json(r.geometry.conflict)}}},
            {"comparison", {{"conflict", detail::group_json(cmp.conflict)}, {"baseline", detail::group_json(cmp.baseline)}}}};
}

inline json case_to_json(const CaseMetrics& m) {
    return {{"id", m.id},
            {"dataset", to_string(m.dataset)},
            {"min_distance_m", m.min_distance},
            {"vehicle_median_speed_mps", m.vehicle_median_speed},
            {"vehicle_median_speed_mph", mps_to_mph(m.vehicle_median_speed)},
            {"escooter_median_speed_mps", m.escooter_median_speed},
            {"escooter_median_speed_mph", mps_to_mph(m.escooter_median_speed)},
            {"min_gap_time_s", detail::opt(m.min_gap_time)},
            {"mttc_s", detail::opt(m.mttc)},
            {"is_potential_conflict", m.is_potential_conflict},
            {"risk", m.risk ? json(to_string(*m.risk)) : json(nullptr)},
            {"geometry", m.geometry ? json(to_string(*m.geometry)) : json(nullptr)}};
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOutcome {
    IngestResult ingest;
    std::vector<CaseMetrics> metrics; // ordered by case id
    std::map<std::string, AggregateReport, std::less<>> reports; // "all" plus one per dataset present
};

inline AnalyzeOutcome analyze_corpus(IngestResult ingested, const RunConfig& cfg) {
    AnalyzeOutcome out;
    out.ingest = std::move(ingested);
    if (out.ingest.cases.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "empty corpus: no analyzable cases in input");
    }
    out.metrics.reserve(out.ingest.cases.size());
    for (const auto& c : out.ingest.cases) out.metrics.push_back(analyze(c, cfg).metrics);

    auto& all = out.reports.emplace("all", empty_report(cfg.histogram_bin_width_s)).first->second;
    for (const auto& m : out.metrics) {
        all.add(m);
        auto key = std::string(to_string(m.dataset));
        auto it = out.reports.find(key);
        if (it == out.reports.end()) it = out.reports.emplace(key, empty_report(cfg.histogram_bin_width_s)).first;
        it->second.add(m);
    }
    return out;
}

inline json outcome_to_json(const AnalyzeOutcome& o, const ConfiguredRun& run) {
    json rejected_cases = json::array();
    for (const auto& r : o.ingest.rejected_cases) {
        rejected_cases.push_back({{"id", r.id}, {"error", to_string(r.kind)}, {"reason", r.reason}});
    }
    json rejected_rows = json::array();
    for (const auto& r : o.ingest.rejected_rows) rejected_rows.push_back({{"line", r.line}, {"reason", r.reason}});

    std::size_t unclassified = 0;
    json cases = json::array();
    for (const auto& m : o.metrics) {
        if (!m.geometry) ++unclassified;
        cases.push_back(case_to_json(m));
    }
    json reports = json::object();
    for (const auto& [name, rep] : o.reports) reports[name] = report_to_json(rep);

    return {{"schema_version", 1},
            {"config", config_to_json(run)},
            {"input",
             {{"cases_total", o.ingest.total_cases()},
              {"cases_analyzed", o.metrics.size()},
              {"cases_unclassifiable", unclassified},
              {"cases_rejected", o.ingest.rejected_cases.size()},
              {"rows_rejected", o.ingest.rejected_rows.size()},
              {"rejected_cases", rejected_cases},
              {"rejected_rows", rejected_rows}}},
            {"reports", reports},
            {"cases", cases}};
}

namespace detail {

inline std::string csv_opt(std::optional<double> v) { return v ? format_double(*v) : std::string{}; }

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
    out << content;
    if (!out) throw Error(ErrorKind::Io, "failed writing " + p.string());
}

} // namespace detail

/// One row per input case: analyzed, unclassifiable, or rejected with its reason.
inline std::string cases_csv(const AnalyzeOutcome& o) {
    struct Row {
        std::string id;
        std::string line;
    };
    std::vector<Row> rows;
    for (const auto& m : o.metrics) {
        std::ostringstream s;
        s << m.id << ',' << to_string(m.dataset) << ',' << (m.geometry ? "analyzed" : "unclassifiable") << ','
          << format_double(m.min_distance) << ',' << format_double(m.vehicle_median_speed) << ','
          << format_double(mps_to_mph(m.vehicle_median_speed)) << ',' << format_double(m.escooter_median_speed) << ','
          << format_double(mps_to_mph(m.escooter_median_speed)) << ',' << detail::csv_opt(m.min_gap_time) << ','
          << detail::csv_opt(m.mttc) << ',' << (m.is_potential_conflict ? "true" : "false") << ','
          << (m.risk ? to_string(*m.risk) : "") << ',' << (m.geometry ? to_string(*m.geometry) : "") << ','
          << (m.geometry ? "" : "no frame with both headings defined in the interaction phase") << '\n';
        rows.push_back({m.id, s.str()});
    }
    for (const auto& r : o.ingest.rejected_cases) {
        std::string reason = r.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        rows.push_back({r.id, r.id + ",,rejected,,,,,,,,,,," + reason + '\n'});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
    std::string out =
        "case_id,dataset,status,min_distance_m,vehicle_median_speed_mps,vehicle_median_speed_mph,"
        "escooter_median_speed_mps,escooter_median_speed_mph,min_gap_time_s,mttc_s,potential_conflict,risk,"
        "geometry,reason\n";
    for (const auto& r : rows) out += r.line;
    return out;
}

inline std::string mttc_hist_csv(const AnalyzeOutcome& o) {
    std::string out = "dataset,bin_lower_s,bin_upper_s,count\n";
    for (const auto& [name, r] : o.reports) {
        const auto& h = r.mttc_histogram;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            out += name + ',' + format_double(h.lower_edge(i)) + ',' + detail::csv_opt(h.upper_edge(i)) + ',' +
                   std::to_string(h.counts[i]) + '\n';
        }
    }
    return out;
}

inline std::string risk_dist_csv(const AnalyzeOutcome& o) {
    std::string out = "dataset,risk,count,percent_of_conflict_cases\n";
    for (const auto& [name, r] : o.reports) {
        for (auto lvl : {RiskLevel::High, RiskLevel::Medium, RiskLevel::Low}) {
            const auto n = r.risk_count(lvl);
            const double pct = r.conflict_count() ? 100.0 * static_cast<double>(n) / static_cast<double>(r.conflict_count()) : 0.0;
            out += name + ',' + std::string(to_string(lvl)) + ',' + std::to_string(n) + ',' + format_double(pct) + '\n';
        }
    }
    return out;
}

inline std::string geometry_dist_csv(const AnalyzeOutcome& o) {
    std::string out = "dataset,group,geometry,count,percent,percent_of_classified\n";
    for (const auto& [name, r] : o.reports) {
        for (const auto& [group, d] : {std::pair{"all", &r.geometry.all}, std::pair{"conflict", &r.geometry.conflict}}) {
            for (auto g : kAllGeometries) {
                out += name + ',' + group + ',' + std::string(to_string(g)) + ',' + std::to_string(d->count(g)) + ',' +
                       format_double(d->percent(g)) + ',' + format_double(d->percent_of_classified(g)) + '\n';
            }
            out += name + ',' + group + ",unclassified," + std::to_string(d->unclassified) + ',' +
                   format_double(d->percent_unclassified()) + ",\n";
        }
    }
    return out;
}

inline void write_outputs(const AnalyzeOutcome& o, const ConfiguredRun& run, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    detail::write_file(dir / "report.json", outcome_to_json(o, run).dump(2) + '\n');
    detail::write_file(dir / "cases.csv", cases_csv(o));
    detail::write_file(dir / "mttc_hist.csv", mttc_hist_csv(o));
    detail::write_file(dir / "risk_dist.csv", risk_dist_csv(o));
    detail::write_file(dir / "geometry_dist.csv", geometry_dist_csv(o));
}

/// Short human-readable summary; percentages to one decimal place.
inline std::string text_summary(const AnalyzeOutcome& o) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(1);
    for (const auto& [name, r] : o.reports) {
        s << name << ": " << r.case_count() << " cases, " << r.conflict_count() << " potential conflicts ("
          << 100.0 * r.conflict_share() << "%)\n";
        for (auto g : kAllGeometries) {
            s << "  " << to_string(g) << ": " << r.geometry.all.percent(g) << "%\n";
        }
    }
    s << "rejected cases: " << o.ingest.rejected_cases.size() << ", rejected rows: " << o.ingest.rejected_rows.size()
      << '\n';
    return s.str();
}

/// The analyze subcommand. Returns a process exit status.
inline int run_analyze(const ConfiguredRun& run, const std::string& input, const std::filesystem::path& out_dir,
                       std::ostream& log = std::cerr) {
    try {
        run.config.validate();
        auto outcome = analyze_corpus(ingest_file(input, run.config), run.config);
        write_outputs(outcome, run, out_dir);
        log << text_summary(outcome);
        for (const auto& r : outcome.ingest.rejected_cases) log << "rejected " << r.reason << '\n';
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

// ---------------------------------------------------------------------------
// generate

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over (seed, index)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace detail {

// A number, or a [lo, hi] range sampled uniformly per case.
inline double sample_param(const json& entry, const json& defaults, const char* key, double fallback,
                           std::mt19937_64& rng) {
    const json* v = nullptr;
    if (entry.contains(key)) v = &entry.at(key);
    else if (defaults.contains(key)) v = &defaults.at(key);
    if (!v) return fallback;
    if (v->is_number()) return v->get<double>();
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
        const double lo = (*v)[0].get<double>(), hi = (*v)[1].get<double>();
        if (!(lo <= hi)) throw Error(ErrorKind::InfeasibleSpec, std::string("range for '") + key + "' has lo > hi");
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    throw Error(ErrorKind::InfeasibleSpec, std::string("'") + key + "' must be a number or [lo, hi]");
}

inline const json& lookup(const json& entry, const json& defaults, const char* key) {
    static const json null_value;
    if (entry.contains(key)) return entry.at(key);
    if (defaults.contains(key)) return defaults.at(key);
    return null_value;
}

} // namespace detail

/// Expands a generation spec into concrete scenarios. Each case draws its
/// parameters from a stream seeded by (seed, case index).
inline std::vector<ScenarioSpec> expand_generation_spec(const json& spec, std::optional<std::uint64_t> seed_override) {
    if (!spec.is_object() || !spec.contains("cases") || !spec.at("cases").is_array()) {
        throw Error(ErrorKind::InfeasibleSpec, "generation spec needs a 'cases' array");
    }
    const std::uint64_t seed = seed_override ? *seed_override : spec.value("seed", std::uint64_t{0});
    const json defaults = spec.value("defaults", json::object());
    GeoPoint origin = kDefaultSceneOrigin;
    if (spec.contains("origin")) origin = {spec.at("origin").at("lat").get<double>(), spec.at("origin").at("lon").get<double>()};
    if (!origin.valid()) throw Error(ErrorKind::InfeasibleSpec, "origin is not a valid coordinate");

    std::vector<ScenarioSpec> out;
    std::uint64_t index = 0;
    for (const auto& entry : spec.at("cases")) {
        const auto count = entry.value("count", std::int64_t{1});
        if (count < 0) throw Error(ErrorKind::InfeasibleSpec, "count must be >= 0");
        const auto& geom_j = detail::lookup(entry, defaults, "geometry");
        if (!geom_j.is_string()) throw Error(ErrorKind::InfeasibleSpec, "each case needs a 'geometry'");
        const auto geom = parse_geometry(geom_j.get<std::string>());
        if (!geom) throw Error(ErrorKind::InfeasibleSpec, "unknown geometry '" + geom_j.get<std::string>() + "'");
        Dataset dataset = Dataset::VehicleCentered;
        if (const auto& d = detail::lookup(entry, defaults, "dataset"); d.is_string()) {
            auto parsed = parse_dataset(d.get<std::string>());
            if (!parsed) throw Error(ErrorKind::InfeasibleSpec, "unknown dataset '" + d.get<std::string>() + "'");
            dataset = *parsed;
        }
        for (std::int64_t k = 0; k < count; ++k, ++index) {
            const std::uint64_t case_seed = derive_seed(seed, index);
            std::mt19937_64 rng(case_seed);
            ScenarioSpec s;
            s.geometry = *geom;
            s.dataset = dataset;
            s.origin = origin;
            s.seed = case_seed;
            s.vehicle_speed = detail::sample_param(entry, defaults, "vehicle_speed", s.vehicle_speed, rng);
            s.escooter_speed = detail::sample_param(entry, defaults, "escooter_speed", s.escooter_speed, rng);
            s.designed_gap = detail::sample_param(entry, defaults, "designed_gap", s.designed_gap, rng);
            s.duration = detail::sample_param(entry, defaults, "duration", s.duration, rng);
            s.noise_sigma = detail::sample_param(entry, defaults, "noise_sigma", s.noise_sigma, rng);
            s.hz = detail::sample_param(entry, defaults, "hz", s.hz, rng);
            s.lateral_offset = detail::sample_param(entry, defaults, "lateral_offset", s.lateral_offset, rng);
            s.crossing_angle = detail::sample_param(entry, defaults, "crossing_angle", s.crossing_angle, rng);
            s.scene_rotation = detail::sample_param(entry, defaults, "scene_rotation", 0.0, rng);
            const double first = detail::sample_param(entry, defaults, "escooter_first", 0.0, rng);
            s.escooter_first = first >= 0.5;
            char id[32];
            std::snprintf(id, sizeof id, "case_%05llu", static_cast<unsigned long long>(index));
            s.id = id;
            out.push_back(s);
        }
    }
    return out;
}

inline std::vector<TrackRecord> generate_records(const std::vector<ScenarioSpec>& specs) {
    std::vector<TrackRecord> out;
    out.reserve(specs.size());
    for (const auto& s : specs) {
        auto [v, e] = generate_tracks(s);
        out.push_back({s.id, s.dataset, std::move(v), std::move(e)});
    }
    return out;
}

/// The generate subcommand. Returns a process exit status.
inline int run_generate(const std::string& spec_path, const std::string& out_path,
                        std::optional<std::uint64_t> seed_override, std::ostream& log = std::cerr) {
    try {
        std::ifstream in(spec_path);
        if (!in) throw Error(ErrorKind::MalformedInput, "cannot open spec file: " + spec_path);
        json spec;
        try {
            spec = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::InfeasibleSpec, "spec file " + spec_path + " is not valid JSON: " + e.what());
        }
        const auto records = generate_records(expand_generation_spec(spec, seed_override));
        if (const auto parent = std::filesystem::path(out_path).parent_path(); !parent.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(parent, ec);
        }
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + out_path);
        write_tracks_csv(out, records);
        if (!out) throw Error(ErrorKind::Io, "failed writing " + out_path);
        log << "generated " << records.size() << " cases into " << out_path << '\n';
        return kExitOk;
    } catch (const json::exception& e) {
        log << "error: malformed spec: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

} // namespace scootsafe
