#pragma once

// Price/frequency/telemetry ingestion and synthetic scenario generation.
//
// CSV schemas (headers are checked verbatim, timestamps ISO-8601 UTC):
//   prices.csv     ts,spot_dkk_kwh,fcr_dkk_kw,mfrr_dkk_kw,balancing_dkk_kwh   (hourly)
//   frequency.csv  ts,hz                                                      (per minute)
//   lids.csv       ts,lid                                                     (per minute)
//   telemetry.csv  ts,p_u_kw,p_l_kw,t_wu_c,t_wl_c,qu1,qu2,ql3,ql4,lid         (per minute)
//
// Loaders sort rows, reject duplicates, and report any missing timestamps;
// a series with gaps fails validate() and cannot enter a ScenarioBundle.

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zincflex/control.hpp"
#include "zincflex/frequency.hpp"
#include "zincflex/rng.hpp"
#include "zincflex/thermal.hpp"
#include "zincflex/timeutil.hpp"

namespace zincflex {

struct PriceSeries {
    std::int64_t start_ts = 0; // hour-aligned
    std::vector<double> spot;        // DKK/kWh
    std::vector<double> fcr;         // DKK/kW
    std::vector<double> mfrr_cap;    // DKK/kW
    std::vector<double> balancing;   // DKK/kWh

    std::size_t hours() const { return spot.size(); }

    void validate() const {
        if (start_ts % kSecondsPerHour != 0) {
            throw std::domain_error("PriceSeries: start must be hour-aligned");
        }
        if (fcr.size() != spot.size() || mfrr_cap.size() != spot.size() ||
            balancing.size() != spot.size()) {
            throw std::domain_error("PriceSeries: column lengths differ");
        }
        for (std::size_t h = 0; h < spot.size(); ++h) {
            if (!std::isfinite(spot[h]) || !std::isfinite(fcr[h]) || !std::isfinite(mfrr_cap[h]) ||
                !std::isfinite(balancing[h])) {
                throw std::domain_error("PriceSeries: missing or non-finite value at " +
                                        format_timestamp(start_ts + static_cast<std::int64_t>(h) *
                                                                        kSecondsPerHour));
            }
        }
    }
};

struct TelemetrySample {
    double p_u = 0.0;
    double p_l = 0.0;
    double t_wu = 0.0;
    double t_wl = 0.0;
    bool qu1 = false, qu2 = false, ql3 = false, ql4 = false;
    bool lid = false;
};

struct TelemetrySeries {
    std::int64_t start_ts = 0; // minute-aligned
    std::vector<TelemetrySample> samples;
};

struct ScenarioBundle {
    std::int64_t start_ts = 0;
    int days = 0;
    PriceSeries prices;
    FrequencySeries frequency;
    LidSchedule lids; // per minute
    FurnaceParameters params;
    Setpoints setpoints;
    PowerLimits limits;
    double investment_dkk = 500000.0;

    void validate() const {
        if (days <= 0) throw std::domain_error("ScenarioBundle: no days");
        if (start_ts % kSecondsPerDay != 0) {
            throw std::domain_error("ScenarioBundle: start must be midnight UTC");
        }
        prices.validate();
        frequency.validate();
        params.validate();
        const auto hours = static_cast<std::size_t>(days) * 24;
        if (prices.hours() != hours || prices.start_ts != start_ts) {
            throw std::domain_error("ScenarioBundle: price series misaligned");
        }
        if (frequency.hz.size() != hours * 60 || frequency.start_ts != start_ts) {
            throw std::domain_error("ScenarioBundle: frequency series misaligned");
        }
        if (lids.size() != hours * 60) {
            throw std::domain_error("ScenarioBundle: lid schedule misaligned");
        }
        if (!(setpoints.t_sp_u > params.t_ambient) || !(setpoints.t_sp_l > params.t_ambient)) {
            throw std::domain_error("ScenarioBundle: setpoints must sit above ambient");
        }
        if (limits.p_nom_u < limits.p_min_u || limits.p_nom_l < limits.p_min_l ||
            limits.p_min_u < 0.0 || limits.p_min_l < 0.0) {
            throw std::domain_error("ScenarioBundle: inconsistent power limits");
        }
    }
};

// ---------------------------------------------------------------------------
// CSV plumbing

namespace csv {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

inline double parse_double(const std::string& text, const std::string& file, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::domain_error(file + ":" + std::to_string(line_no) + ": bad numeric field '" +
                                text + "'");
    }
    return v;
}

inline bool parse_flag(const std::string& text, const std::string& file, std::size_t line_no) {
    if (text == "0") return false;
    if (text == "1") return true;
    throw std::domain_error(file + ":" + std::to_string(line_no) + ": flag field must be 0 or 1, got '" +
                            text + "'");
}

// Reads rows of (timestamp, fields...) sorted by timestamp. Duplicate
// timestamps are an error; gaps relative to `step_seconds` are returned as the
// missing timestamps.
struct RawTable {
    std::vector<std::pair<std::int64_t, std::vector<std::string>>> rows;
    std::vector<std::int64_t> missing;
};

inline RawTable read_table(const std::filesystem::path& path, const std::string& expected_header,
                           std::int64_t step_seconds) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open " + path.string());
    const std::string file = path.filename().string();
    std::string line;
    if (!std::getline(in, line)) {
        throw std::domain_error(file + ": empty file, expected header '" + expected_header + "'");
    }
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != expected_header) {
        throw std::domain_error(file + ":1: header mismatch, expected '" + expected_header +
                                "', got '" + line + "'");
    }
    const std::size_t columns = split(expected_header).size();

    RawTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != columns) {
            throw std::domain_error(file + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(columns) + " fields, got " +
                                    std::to_string(fields.size()));
        }
        std::int64_t ts = 0;
        try {
            ts = parse_timestamp(fields[0]);
        } catch (const std::domain_error& e) {
            throw std::domain_error(file + ":" + std::to_string(line_no) + ": " + e.what());
        }
        fields.erase(fields.begin());
        table.rows.emplace_back(ts, std::move(fields));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].first == table.rows[i - 1].first) {
            throw std::domain_error(file + ": duplicate timestamp " +
                                    format_timestamp(table.rows[i].first));
        }
        for (std::int64_t t = table.rows[i - 1].first + step_seconds; t < table.rows[i].first;
             t += step_seconds) {
            table.missing.push_back(t);
        }
    }
    return table;
}

} // namespace csv

inline constexpr const char* kPricesHeader = "ts,spot_dkk_kwh,fcr_dkk_kw,mfrr_dkk_kw,balancing_dkk_kwh";
inline constexpr const char* kFrequencyHeader = "ts,hz";
inline constexpr const char* kLidsHeader = "ts,lid";
inline constexpr const char* kTelemetryHeader = "ts,p_u_kw,p_l_kw,t_wu_c,t_wl_c,qu1,qu2,ql3,ql4,lid";

template <typename Series>
struct LoadResult {
    Series series;
    std::vector<std::int64_t> missing; // timestamps absent between first and last row

    bool gap_free() const { return missing.empty(); }
};

inline LoadResult<PriceSeries> load_prices_csv(const std::filesystem::path& path) {
    const csv::RawTable table = csv::read_table(path, kPricesHeader, kSecondsPerHour);
    LoadResult<PriceSeries> out;
    const std::string file = path.filename().string();
    if (table.rows.empty()) return out;
    out.series.start_ts = table.rows.front().first;
    out.missing = table.missing;
    std::size_t next = 0;
    for (std::int64_t ts = table.rows.front().first; ts <= table.rows.back().first;
         ts += kSecondsPerHour) {
        if (next < table.rows.size() && table.rows[next].first == ts) {
            const auto& f = table.rows[next].second;
            out.series.spot.push_back(csv::parse_double(f[0], file, 0));
            out.series.fcr.push_back(csv::parse_double(f[1], file, 0));
            out.series.mfrr_cap.push_back(csv::parse_double(f[2], file, 0));
            out.series.balancing.push_back(csv::parse_double(f[3], file, 0));
            ++next;
        } else {
            const double nan = std::nan("");
            out.series.spot.push_back(nan);
            out.series.fcr.push_back(nan);
            out.series.mfrr_cap.push_back(nan);
            out.series.balancing.push_back(nan);
        }
    }
    if (next != table.rows.size()) {
        throw std::domain_error(file + ": timestamps are not hour-aligned");
    }
    return out;
}

inline LoadResult<FrequencySeries> load_frequency_csv(const std::filesystem::path& path) {
    const csv::RawTable table = csv::read_table(path, kFrequencyHeader, kSecondsPerMinute);
    LoadResult<FrequencySeries> out;
    const std::string file = path.filename().string();
    if (table.rows.empty()) return out;
    out.series.start_ts = table.rows.front().first;
    out.missing = table.missing;
    std::size_t next = 0;
    for (std::int64_t ts = table.rows.front().first; ts <= table.rows.back().first;
         ts += kSecondsPerMinute) {
        if (next < table.rows.size() && table.rows[next].first == ts) {
            out.series.hz.push_back(csv::parse_double(table.rows[next].second[0], file, 0));
            ++next;
        } else {
            out.series.hz.push_back(std::nan(""));
        }
    }
    if (next != table.rows.size()) {
        throw std::domain_error(file + ": timestamps are not minute-aligned");
    }
    return out;
}

struct LidSeries {
    std::int64_t start_ts = 0;
    LidSchedule lids;
};

inline LoadResult<LidSeries> load_lids_csv(const std::filesystem::path& path) {
    const csv::RawTable table = csv::read_table(path, kLidsHeader, kSecondsPerMinute);
    LoadResult<LidSeries> out;
    const std::string file = path.filename().string();
    if (table.rows.empty()) return out;
    if (!table.missing.empty()) {
        out.missing = table.missing;
        throw std::domain_error(file + ": lid schedule has gaps, first at " +
                                format_timestamp(table.missing.front()));
    }
    out.series.start_ts = table.rows.front().first;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out.series.lids.push_back(csv::parse_flag(table.rows[i].second[0], file, i + 2) ? 1 : 0);
    }
    return out;
}

inline LoadResult<TelemetrySeries> load_telemetry_csv(const std::filesystem::path& path) {
    const csv::RawTable table = csv::read_table(path, kTelemetryHeader, kSecondsPerMinute);
    LoadResult<TelemetrySeries> out;
    const std::string file = path.filename().string();
    if (table.rows.empty()) return out;
    out.series.start_ts = table.rows.front().first;
    out.missing = table.missing;
    if (!table.missing.empty()) {
        throw std::domain_error(file + ": telemetry has gaps, first at " +
                                format_timestamp(table.missing.front()));
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i].second;
        TelemetrySample s;
        s.p_u = csv::parse_double(f[0], file, i + 2);
        s.p_l = csv::parse_double(f[1], file, i + 2);
        s.t_wu = csv::parse_double(f[2], file, i + 2);
        s.t_wl = csv::parse_double(f[3], file, i + 2);
        s.qu1 = csv::parse_flag(f[4], file, i + 2);
        s.qu2 = csv::parse_flag(f[5], file, i + 2);
        s.ql3 = csv::parse_flag(f[6], file, i + 2);
        s.ql4 = csv::parse_flag(f[7], file, i + 2);
        s.lid = csv::parse_flag(f[8], file, i + 2);
        if (s.p_u < 0.0 || s.p_l < 0.0) {
            throw std::domain_error(file + ":" + std::to_string(i + 2) + ": negative power");
        }
        out.series.samples.push_back(s);
    }
    return out;
}

namespace csv {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace csv

inline void save_prices_csv(const std::filesystem::path& path, const PriceSeries& s) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path.string());
    out << kPricesHeader << '\n';
    for (std::size_t h = 0; h < s.hours(); ++h) {
        out << format_timestamp(s.start_ts + static_cast<std::int64_t>(h) * kSecondsPerHour) << ','
            << csv::fmt(s.spot[h]) << ',' << csv::fmt(s.fcr[h]) << ',' << csv::fmt(s.mfrr_cap[h])
            << ',' << csv::fmt(s.balancing[h]) << '\n';
    }
}

inline void save_frequency_csv(const std::filesystem::path& path, const FrequencySeries& s) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path.string());
    out << kFrequencyHeader << '\n';
    for (std::size_t t = 0; t < s.hz.size(); ++t) {
        out << format_timestamp(s.start_ts + static_cast<std::int64_t>(t) * kSecondsPerMinute)
            << ',' << csv::fmt(s.hz[t]) << '\n';
    }
}

inline void save_lids_csv(const std::filesystem::path& path, std::int64_t start_ts,
                          const LidSchedule& lids) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path.string());
    out << kLidsHeader << '\n';
    for (std::size_t t = 0; t < lids.size(); ++t) {
        out << format_timestamp(start_ts + static_cast<std::int64_t>(t) * kSecondsPerMinute) << ','
            << int(lids[t]) << '\n';
    }
}

inline void save_telemetry_csv(const std::filesystem::path& path, const TelemetrySeries& s) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path.string());
    out << kTelemetryHeader << '\n';
    for (std::size_t t = 0; t < s.samples.size(); ++t) {
        const auto& r = s.samples[t];
        out << format_timestamp(s.start_ts + static_cast<std::int64_t>(t) * kSecondsPerMinute)
            << ',' << csv::fmt(r.p_u) << ',' << csv::fmt(r.p_l) << ',' << csv::fmt(r.t_wu) << ','
            << csv::fmt(r.t_wl) << ',' << int(r.qu1) << ',' << int(r.qu2) << ',' << int(r.ql3)
            << ',' << int(r.ql4) << ',' << int(r.lid) << '\n';
    }
}

// ---------------------------------------------------------------------------
// furnace.json

inline nlohmann::json to_json(const FurnaceParameters& p) {
    return nlohmann::json{{"c_zu", p.c_zu},           {"c_zl", p.c_zl},
                          {"c_wu", p.c_wu},           {"c_wl", p.c_wl},
                          {"r_zuzl", p.r_zuzl},       {"r_wz", p.r_wz},
                          {"r_ww", p.r_ww},           {"r_wua_off", p.r_wua_off},
                          {"r_wua_on", p.r_wua_on},   {"r_wla", p.r_wla},
                          {"t_ambient", p.t_ambient}, {"dt", p.dt}};
}

inline FurnaceParameters furnace_parameters_from_json(const nlohmann::json& j) {
    FurnaceParameters p;
    p.c_zu = j.at("c_zu");
    p.c_zl = j.at("c_zl");
    p.c_wu = j.at("c_wu");
    p.c_wl = j.at("c_wl");
    p.r_zuzl = j.at("r_zuzl");
    p.r_wz = j.at("r_wz");
    p.r_ww = j.at("r_ww");
    p.r_wua_off = j.at("r_wua_off");
    p.r_wua_on = j.at("r_wua_on");
    p.r_wla = j.at("r_wla");
    p.t_ambient = j.at("t_ambient");
    p.dt = j.value("dt", 1.0 / 60.0);
    return p;
}

inline void save_furnace_json(const std::filesystem::path& path, const ScenarioBundle& b) {
    nlohmann::json j;
    j["parameters"] = to_json(b.params);
    j["setpoints"] = {{"t_sp_u", b.setpoints.t_sp_u}, {"t_sp_l", b.setpoints.t_sp_l}};
    j["limits"] = {{"p_min_u", b.limits.p_min_u},
                   {"p_nom_u", b.limits.p_nom_u},
                   {"p_min_l", b.limits.p_min_l},
                   {"p_nom_l", b.limits.p_nom_l}};
    j["investment_dkk"] = b.investment_dkk;
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Scenario synthesis

struct SynthSpec {
    CivilDate from{2021, 1, 1};
    CivilDate to{2021, 1, 30}; // inclusive
    std::uint64_t seed = 1;

    double spot_mean = 0.6;        // DKK/kWh
    double spot_reversion = 0.97;  // hourly AR(1) coefficient
    double spot_sigma = 0.08;
    double fcr_over_spot = 1.1;    // DKK/kW per DKK/kWh before the discount date
    double fcr_discount = 0.35;    // multiplier applied from fcr_discount_date on
    CivilDate fcr_discount_date{2022, 9, 1};
    double mfrr_over_spot = 0.25;
    double spike_fraction = 0.15;  // share of hours with a balancing spike
    double spike_scale = 1.2;      // DKK/kWh scale of the Pareto spike
    double freq_sigma = 0.012;     // per-minute innovation, Hz
    double freq_reversion = 0.95;

    FurnaceParameters params; // defaults below
    Setpoints setpoints{453.0, 450.0};
    PowerLimits limits{0.0, 700.0, 0.0, 400.0};

    SynthSpec() {
        params.c_zu = 40.0;
        params.c_zl = 50.0;
        params.c_wu = 4.0;
        params.c_wl = 5.0;
        params.r_zuzl = 25.0;
        params.r_wz = 2.0;
        params.r_ww = 8.0;
        params.r_wua_on = 4.0;
        params.r_wua_off = 0.8;
        params.r_wla = 3.0;
        params.t_ambient = 20.0;
        params.dt = 1.0 / 60.0;
    }
};

inline ScenarioBundle synthesize_scenario(const SynthSpec& spec) {
    const std::int64_t start = timestamp_from_civil(spec.from);
    const std::int64_t end = timestamp_from_civil(spec.to) + kSecondsPerDay;
    if (end <= start) throw std::domain_error("synthesize_scenario: empty date range");
    const int days = static_cast<int>((end - start) / kSecondsPerDay);
    const std::size_t hours = static_cast<std::size_t>(days) * 24;

    ScenarioBundle b;
    b.start_ts = start;
    b.days = days;
    b.params = spec.params;
    b.setpoints = spec.setpoints;
    b.limits = spec.limits;
    b.prices.start_ts = start;
    b.frequency.start_ts = start;

    Rng rng(spec.seed);
    const std::int64_t discount_ts = timestamp_from_civil(spec.fcr_discount_date);

    // Hourly prices: mean-reverting spot with a mild diurnal swell, FCR
    // proportional to spot with a regime discount, balancing = spot plus
    // occasional heavy-tailed spikes.
    double level = spec.spot_mean;
    for (std::size_t h = 0; h < hours; ++h) {
        level = spec.spot_mean + spec.spot_reversion * (level - spec.spot_mean) +
                spec.spot_sigma * rng.normal();
        const double diurnal =
            0.15 * spec.spot_mean * std::sin(2.0 * 3.14159265358979324 * ((h % 24) - 6.0) / 24.0);
        const double spot = std::max(0.05, level + diurnal);
        b.prices.spot.push_back(spot);

        const std::int64_t ts = start + static_cast<std::int64_t>(h) * kSecondsPerHour;
        const double fcr_k = ts >= discount_ts ? spec.fcr_over_spot * spec.fcr_discount
                                               : spec.fcr_over_spot;
        b.prices.fcr.push_back(std::max(0.01, fcr_k * spot * (1.0 + 0.2 * rng.normal())));
        b.prices.mfrr_cap.push_back(
            std::max(0.005, spec.mfrr_over_spot * spot * (1.0 + 0.3 * rng.normal())));

        double balancing = spot;
        if (rng.bernoulli(spec.spike_fraction)) {
            balancing += spec.spike_scale * (0.3 + rng.pareto(1.6));
        }
        b.prices.balancing.push_back(balancing);
    }

    // Per-minute frequency: clipped AR(1) noise around 50 Hz.
    double f = 0.0;
    for (std::size_t t = 0; t < hours * 60; ++t) {
        f = spec.freq_reversion * f + spec.freq_sigma * rng.normal();
        b.frequency.hz.push_back(std::clamp(50.0 + f, 49.5, 50.5));
    }

    // Lid-off work windows: two per day, whole hours (dipping shifts).
    b.lids.assign(hours * 60, 1);
    for (int d = 0; d < days; ++d) {
        const int w1_start = rng.uniform_int(8, 9);
        const int w1_len = rng.uniform_int(1, 2);
        const int w2_start = rng.uniform_int(13, 14);
        const int w2_len = 1;
        const auto day_offset = static_cast<std::size_t>(d) * 1440;
        for (int hh = w1_start; hh < w1_start + w1_len; ++hh) {
            for (int m = 0; m < 60; ++m) b.lids[day_offset + static_cast<std::size_t>(hh) * 60 + m] = 0;
        }
        for (int hh = w2_start; hh < w2_start + w2_len; ++hh) {
            for (int m = 0; m < 60; ++m) b.lids[day_offset + static_cast<std::size_t>(hh) * 60 + m] = 0;
        }
    }

    b.validate();
    return b;
}

// ---------------------------------------------------------------------------
// Scenario directory IO

inline void save_scenario(const std::filesystem::path& dir, const ScenarioBundle& b) {
    std::filesystem::create_directories(dir);
    save_prices_csv(dir / "prices.csv", b.prices);
    save_frequency_csv(dir / "frequency.csv", b.frequency);
    save_lids_csv(dir / "lids.csv", b.start_ts, b.lids);
    save_furnace_json(dir / "furnace.json", b);
}

inline ScenarioBundle load_scenario(const std::filesystem::path& dir) {
    ScenarioBundle b;
    const auto prices = load_prices_csv(dir / "prices.csv");
    if (!prices.gap_free()) {
        throw std::domain_error("prices.csv has " + std::to_string(prices.missing.size()) +
                                " missing hours, first at " +
                                format_timestamp(prices.missing.front()));
    }
    const auto freq = load_frequency_csv(dir / "frequency.csv");
    if (!freq.gap_free()) {
        throw std::domain_error("frequency.csv has " + std::to_string(freq.missing.size()) +
                                " missing minutes, first at " +
                                format_timestamp(freq.missing.front()));
    }
    const auto lids = load_lids_csv(dir / "lids.csv");

    std::ifstream in(dir / "furnace.json");
    if (!in) throw std::domain_error("cannot open " + (dir / "furnace.json").string());
    nlohmann::json j;
    in >> j;
    b.params = furnace_parameters_from_json(j.at("parameters"));
    b.setpoints.t_sp_u = j.at("setpoints").at("t_sp_u");
    b.setpoints.t_sp_l = j.at("setpoints").at("t_sp_l");
    b.limits.p_min_u = j.at("limits").at("p_min_u");
    b.limits.p_nom_u = j.at("limits").at("p_nom_u");
    b.limits.p_min_l = j.at("limits").at("p_min_l");
    b.limits.p_nom_l = j.at("limits").at("p_nom_l");
    b.investment_dkk = j.value("investment_dkk", 500000.0);

    b.prices = prices.series;
    b.frequency = freq.series;
    b.lids = lids.series.lids;
    b.start_ts = b.prices.start_ts;
    b.days = static_cast<int>(b.prices.hours() / 24);
    if (b.frequency.start_ts != b.start_ts || lids.series.start_ts != b.start_ts) {
        throw std::domain_error("scenario series do not start together");
    }
    b.validate();
    return b;
}

// Restricts a bundle to the inclusive day range [from, to].
inline ScenarioBundle slice_bundle(const ScenarioBundle& b, const CivilDate& from,
                                   const CivilDate& to) {
    const std::int64_t from_ts = timestamp_from_civil(from);
    const std::int64_t to_end = timestamp_from_civil(to) + kSecondsPerDay;
    if (from_ts < b.start_ts ||
        to_end > b.start_ts + static_cast<std::int64_t>(b.days) * kSecondsPerDay ||
        to_end <= from_ts) {
        throw std::domain_error("slice_bundle: requested range not covered by the scenario");
    }
    ScenarioBundle out = b;
    out.start_ts = from_ts;
    out.days = static_cast<int>((to_end - from_ts) / kSecondsPerDay);
    const auto hour0 = static_cast<std::size_t>((from_ts - b.start_ts) / kSecondsPerHour);
    const auto hours = static_cast<std::size_t>(out.days) * 24;
    const auto copy_hours = [&](const std::vector<double>& src) {
        return std::vector<double>(src.begin() + static_cast<std::ptrdiff_t>(hour0),
                                   src.begin() + static_cast<std::ptrdiff_t>(hour0 + hours));
    };
    out.prices.start_ts = from_ts;
    out.prices.spot = copy_hours(b.prices.spot);
    out.prices.fcr = copy_hours(b.prices.fcr);
    out.prices.mfrr_cap = copy_hours(b.prices.mfrr_cap);
    out.prices.balancing = copy_hours(b.prices.balancing);
    out.frequency.start_ts = from_ts;
    out.frequency.hz.assign(b.frequency.hz.begin() + static_cast<std::ptrdiff_t>(hour0 * 60),
                            b.frequency.hz.begin() + static_cast<std::ptrdiff_t>((hour0 + hours) * 60));
    out.lids.assign(b.lids.begin() + static_cast<std::ptrdiff_t>(hour0 * 60),
                    b.lids.begin() + static_cast<std::ptrdiff_t>((hour0 + hours) * 60));
    out.validate();
    return out;
}

} // namespace zincflex
