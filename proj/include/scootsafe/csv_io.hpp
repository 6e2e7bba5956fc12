#pragma once

// Flat trajectory CSV interchange:
//   case_id,dataset,agent,t,lat,lon,alt
// One row per fix, header required, alt optional. Rows are grouped by
// (case_id, agent); timestamps must strictly increase within a group in file order.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "scootsafe/error.hpp"
#include "scootsafe/pipeline.hpp"
#include "scootsafe/trajectory.hpp"

namespace scootsafe {

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error(ErrorKind::Io, "cannot format number");
    return {buf.data(), end};
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace detail

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct RejectedCase {
    std::string id;
    ErrorKind kind = ErrorKind::MalformedInput;
    std::string reason;
};

struct IngestResult {
    std::vector<EncounterCase> cases;         // ordered by case_id
    std::vector<RejectedCase> rejected_cases; // ordered by case_id
    std::vector<RejectedRow> rejected_rows;   // in file order

    std::size_t total_cases() const { return cases.size() + rejected_cases.size(); }
};

/// Parses, validates, conditions and synchronizes every case in the stream.
/// Missing required columns abort the whole file; problems confined to a row
/// or a case are collected instead.
inline IngestResult ingest(std::istream& in, const RunConfig& cfg = {}) {
    cfg.validate();
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw Error(ErrorKind::EmptyCorpus, "empty corpus: input has no rows");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = detail::split_fields(line);
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    constexpr std::array<std::string_view, 6> required{"case_id", "dataset", "agent", "t", "lat", "lon"};
    std::array<std::size_t, 6> idx{};
    std::string missing;
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (auto c = column(required[i])) idx[i] = *c;
        else missing += (missing.empty() ? "" : ", ") + std::string(required[i]);
    }
    if (!missing.empty()) throw Error(ErrorKind::MalformedInput, "input is missing required columns: " + missing);
    const auto alt_col = column("alt");

    struct Group {
        std::optional<Dataset> dataset;
        bool mixed_dataset = false;
        RawTrajectory vehicle{AgentKind::Vehicle, {}};
        RawTrajectory escooter{AgentKind::EScooter, {}};
        std::optional<std::string> order_error;
    };
    std::map<std::string, Group> groups;
    IngestResult result;

    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line);
        auto reject = [&](std::string why) { result.rejected_rows.push_back({line_no, std::move(why)}); };
        if (f.size() != header.size()) {
            reject("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
            continue;
        }
        const auto id = f[idx[0]];
        if (id.empty()) {
            reject("empty case_id");
            continue;
        }
        const auto dataset = parse_dataset(f[idx[1]]);
        if (!dataset) {
            reject("unknown dataset '" + std::string(f[idx[1]]) + "'");
            continue;
        }
        const auto agent = parse_agent(f[idx[2]]);
        if (!agent) {
            reject("unknown agent '" + std::string(f[idx[2]]) + "'");
            continue;
        }
        const auto t = parse_double(f[idx[3]]);
        const auto lat = parse_double(f[idx[4]]);
        const auto lon = parse_double(f[idx[5]]);
        if (!t || !lat || !lon) {
            reject("non-numeric t, lat or lon");
            continue;
        }
        const GeoPoint pos{*lat, *lon};
        if (!pos.valid()) {
            reject("lat/lon out of range");
            continue;
        }
        std::optional<double> alt;
        if (alt_col && !f[*alt_col].empty()) {
            alt = parse_double(f[*alt_col]);
            if (!alt) {
                reject("non-numeric alt");
                continue;
            }
        }

        auto& g = groups[std::string(id)];
        if (g.dataset && *g.dataset != *dataset) g.mixed_dataset = true;
        if (!g.dataset) g.dataset = dataset;
        auto& track = *agent == AgentKind::Vehicle ? g.vehicle : g.escooter;
        if (!track.fixes.empty() && !(*t > track.fixes.back().t) && !g.order_error) {
            g.order_error = "case " + std::string(id) + ": non-monotone timestamps in " +
                            std::string(to_string(*agent)) + " track at line " + std::to_string(line_no);
        }
        track.fixes.push_back({*t, pos, alt});
    }

    for (auto& [id, g] : groups) {
        auto reject = [&](ErrorKind kind, std::string why) {
            result.rejected_cases.push_back({id, kind, std::move(why)});
        };
        if (g.mixed_dataset) {
            reject(ErrorKind::MalformedInput, "case " + id + ": rows disagree on dataset");
            continue;
        }
        if (g.order_error) {
            reject(ErrorKind::MalformedInput, *g.order_error);
            continue;
        }
        if (g.vehicle.fixes.empty() || g.escooter.fixes.empty()) {
            reject(ErrorKind::MalformedInput,
                   "case " + id + ": missing " + (g.vehicle.fixes.empty() ? "vehicle" : "escooter") + " track");
            continue;
        }
        try {
            result.cases.push_back(build_case(g.vehicle, g.escooter, id, *g.dataset, cfg));
        } catch (const Error& e) {
            std::string msg = e.what();
            if (msg.find(id) == std::string::npos) msg = "case " + id + ": " + msg;
            reject(e.kind(), msg);
        }
    }
    return result;
}

inline IngestResult ingest_file(const std::string& path, const RunConfig& cfg = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot open input file: " + path);
    return ingest(in, cfg);
}

struct TrackRecord {
    std::string case_id;
    Dataset dataset = Dataset::VehicleCentered;
    RawTrajectory vehicle;
    RawTrajectory escooter;
};

/// Emits tracks in the ingest format; numbers use shortest round-trip form.
inline void write_tracks_csv(std::ostream& out, const std::vector<TrackRecord>& records) {
    out << "case_id,dataset,agent,t,lat,lon,alt\n";
    for (const auto& r : records) {
        for (const auto* track : {&r.vehicle, &r.escooter}) {
            for (const auto& f : track->fixes) {
                out << r.case_id << ',' << to_string(r.dataset) << ',' << to_string(track->agent) << ','
                    << format_double(f.t) << ',' << format_double(f.pos.lat) << ',' << format_double(f.pos.lon)
                    << ',' << (f.alt ? format_double(*f.alt) : std::string{}) << '\n';
            }
        }
    }
}

} // namespace scootsafe
