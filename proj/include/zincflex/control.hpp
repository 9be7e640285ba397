#pragma once

// Legacy ON/OFF contactor control and the operational baseline profile.
//
// Each zone has two contactors. The first switches ON below a threshold and
// OFF above another; the second kicks in at a lower pair of thresholds. In
// between, contactors hold their state. The baseline profile is what the
// furnace draws under continuous control: the steady-state power of each
// minute's lid regime, averaged per hour.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "zincflex/thermal.hpp"

namespace zincflex {

struct ZoneHysteresis {
    double lower2 = 0.0; // second contactor ON below this
    double lower1 = 0.0; // first contactor ON below this
    double upper1 = 0.0; // first contactor OFF above this
    double upper2 = 0.0; // second contactor OFF above this
    double quantum1_kw = 0.0;
    double quantum2_kw = 0.0;

    void validate() const {
        if (!(lower2 < lower1 && lower1 < upper1 && upper1 < upper2)) {
            throw std::domain_error(
                "ZoneHysteresis: thresholds must satisfy lower2 < lower1 < upper1 < upper2");
        }
        if (quantum1_kw < 0.0 || quantum2_kw < 0.0) {
            throw std::domain_error("ZoneHysteresis: power quanta must be non-negative");
        }
    }
};

struct HysteresisConfig {
    ZoneHysteresis upper; // QU1 / QU2
    ZoneHysteresis lower; // QL3 / QL4

    void validate() const {
        upper.validate();
        lower.validate();
    }
};

// Zone consumption limits: minimum and nominal (maximum) power per zone.
struct PowerLimits {
    double p_min_u = 0.0;
    double p_nom_u = 0.0;
    double p_min_l = 0.0;
    double p_nom_l = 0.0;

    double min_of(int zone) const { return zone == 0 ? p_min_u : p_min_l; }
    double nom_of(int zone) const { return zone == 0 ? p_nom_u : p_nom_l; }
};

// QU1, QU2, QL3, QL4
struct ContactorState {
    bool qu1 = false;
    bool qu2 = false;
    bool ql3 = false;
    bool ql4 = false;
};

struct HysteresisStepResult {
    ContactorState state;
    PowerInput power;
};

namespace detail {

inline void zone_hysteresis(double temp, const ZoneHysteresis& z, bool& c1, bool& c2) {
    if (temp < z.lower1) {
        c1 = true;
    } else if (temp > z.upper1) {
        c1 = false;
    }
    if (temp < z.lower2) {
        c2 = true;
    } else if (temp > z.upper2) {
        c2 = false;
    }
}

} // namespace detail

// One controller tick. Zones are independent; zone power is the sum of the
// quanta of its ON contactors.
inline HysteresisStepResult hysteresis_step(double t_wu, double t_wl,
                                            const ContactorState& prior,
                                            const HysteresisConfig& config) {
    config.validate();
    HysteresisStepResult out;
    out.state = prior;
    detail::zone_hysteresis(t_wu, config.upper, out.state.qu1, out.state.qu2);
    detail::zone_hysteresis(t_wl, config.lower, out.state.ql3, out.state.ql4);
    out.power.p_u = (out.state.qu1 ? config.upper.quantum1_kw : 0.0) +
                    (out.state.qu2 ? config.upper.quantum2_kw : 0.0);
    out.power.p_l = (out.state.ql3 ? config.lower.quantum1_kw : 0.0) +
                    (out.state.ql4 ? config.lower.quantum2_kw : 0.0);
    return out;
}

// Baseline consumption per zone: per-minute steady-state powers and their
// hourly means. The hourly values are exactly the arithmetic mean of the 60
// minute values of that hour.
struct BaselineProfile {
    std::vector<double> hourly_u;
    std::vector<double> hourly_l;
    std::vector<double> minute_u;
    std::vector<double> minute_l;
    bool clamped = false;

    std::size_t hours() const { return hourly_u.size(); }
    std::size_t minutes() const { return minute_u.size(); }

    double hourly_total(std::size_t h) const { return hourly_u[h] + hourly_l[h]; }
};

inline BaselineProfile baseline_profile(const FurnaceParameters& params, const Setpoints& sp,
                                        const LidSchedule& lids) {
    if (lids.empty() || lids.size() % 60 != 0) {
        throw std::domain_error("baseline_profile: lid schedule must cover whole hours, got " +
                                std::to_string(lids.size()) + " minutes");
    }
    BaselineProfile profile;
    const std::size_t minutes = lids.size();
    const std::size_t hours = minutes / 60;
    profile.minute_u.resize(minutes);
    profile.minute_l.resize(minutes);
    profile.hourly_u.resize(hours);
    profile.hourly_l.resize(hours);

    // Both regimes are fixed per parameter set; evaluate once each.
    const SteadyStatePower on = steady_state_power(params, sp, true);
    const SteadyStatePower off = steady_state_power(params, sp, false);
    profile.clamped = on.clamped || off.clamped;

    for (std::size_t t = 0; t < minutes; ++t) {
        const SteadyStatePower& regime = lids[t] != 0 ? on : off;
        profile.minute_u[t] = regime.p_u;
        profile.minute_l[t] = regime.p_l;
    }
    for (std::size_t h = 0; h < hours; ++h) {
        double sum_u = 0.0;
        double sum_l = 0.0;
        for (std::size_t m = 0; m < 60; ++m) {
            sum_u += profile.minute_u[h * 60 + m];
            sum_l += profile.minute_l[h * 60 + m];
        }
        profile.hourly_u[h] = sum_u / 60.0;
        profile.hourly_l[h] = sum_l / 60.0;
    }
    return profile;
}

} // namespace zincflex
