#pragma once

// Grid-frequency handling: the normalized reserve response map and worst-day
// selection by cumulative deviation from 50 Hz.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zincflex/timeutil.hpp"

namespace zincflex {

// Per-minute grid frequency in Hz, contiguous from start_ts.
struct FrequencySeries {
    std::int64_t start_ts = 0;
    std::vector<double> hz;

    void validate() const {
        if (start_ts % kSecondsPerMinute != 0) {
            throw std::domain_error("FrequencySeries: start must be minute-aligned");
        }
        for (double f : hz) {
            if (!std::isfinite(f) || f < 45.0 || f > 55.0) {
                throw std::domain_error("FrequencySeries: value outside the 45-55 Hz sanity band");
            }
        }
    }
};

// Normalized reserve response in [-1, 1].
//
// Full down-response at and below 49.8 Hz, full up-response at and above
// 50.2 Hz, linear ramps in between, and zero inside the 20 mHz deadband
// around 50 Hz.
inline double normalize_frequency(double f) {
    if (!std::isfinite(f)) {
        throw std::domain_error("normalize_frequency: non-finite frequency");
    }
    if (f <= 49.8) return -1.0;
    if (f >= 50.2) return 1.0;
    if (f >= 49.98 && f <= 50.02) return 0.0;
    if (f < 49.98) return (f - 50.0 + 0.02) / 0.18;
    return (f - 50.0 - 0.02) / 0.18;
}

inline std::vector<double> normalize_frequency(const std::vector<double>& hz) {
    std::vector<double> out;
    out.reserve(hz.size());
    for (double f : hz) out.push_back(normalize_frequency(f));
    return out;
}

// The complete UTC day with the largest cumulative |F_t - 50|; ties go to the
// earliest day. Partial days at either end of the series are skipped.
inline CivilDate worst_day_fcr(const FrequencySeries& series) {
    if (series.hz.empty()) {
        throw std::domain_error("worst_day_fcr: empty frequency series");
    }
    const std::int64_t end_ts =
        series.start_ts + static_cast<std::int64_t>(series.hz.size()) * kSecondsPerMinute;
    std::int64_t day_start = series.start_ts;
    if (day_start % kSecondsPerDay != 0) {
        day_start += kSecondsPerDay - day_start % kSecondsPerDay;
    }

    bool found = false;
    std::int64_t best_day = 0;
    double best_score = 0.0;
    for (; day_start + kSecondsPerDay <= end_ts; day_start += kSecondsPerDay) {
        const std::size_t offset =
            static_cast<std::size_t>((day_start - series.start_ts) / kSecondsPerMinute);
        double score = 0.0;
        for (std::size_t t = 0; t < 1440; ++t) {
            score += std::abs(series.hz[offset + t] - 50.0);
        }
        if (!found || score > best_score) {
            found = true;
            best_score = score;
            best_day = day_start;
        }
    }
    if (!found) {
        throw std::domain_error("worst_day_fcr: series does not cover a complete day");
    }
    return civil_from_timestamp(best_day);
}

} // namespace zincflex
