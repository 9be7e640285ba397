#pragma once

// Two-zone furnace thermal model.
//
// A fourth-order lumped RC network: molten zinc and furnace wall, each split
// into an upper and a lower zone. Wall temperatures are the measured states;
// zinc temperatures are latent. Heating power enters the walls, the upper
// wall loses heat to ambient through a lid-dependent resistance, the lower
// wall through a fixed one.
//
// The discrete-time update is explicit Euler with time step `dt` (hours).
// Steady-state powers are the consumptions that hold the wall setpoints when
// the zinc sits at the same temperature (zinc-wall exchange neglected).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zincflex {

struct FurnaceParameters {
    // heat capacities, kWh/degC
    double c_zu = 0.0;
    double c_zl = 0.0;
    double c_wu = 0.0;
    double c_wl = 0.0;
    // thermal resistances, degC/kW
    double r_zuzl = 0.0;    // zinc upper <-> zinc lower
    double r_wz = 0.0;      // wall <-> zinc, per zone
    double r_ww = 0.0;      // wall upper <-> wall lower
    double r_wua_off = 0.0; // upper wall -> ambient, lid off
    double r_wua_on = 0.0;  // upper wall -> ambient, lid on
    double r_wla = 0.0;     // lower wall -> ambient
    double t_ambient = 0.0; // degC
    double dt = 1.0 / 60.0; // hours per step

    void validate() const {
        const struct { const char* name; double v; } positives[] = {
            {"c_zu", c_zu},       {"c_zl", c_zl},           {"c_wu", c_wu},
            {"c_wl", c_wl},       {"r_zuzl", r_zuzl},       {"r_wz", r_wz},
            {"r_ww", r_ww},       {"r_wua_off", r_wua_off}, {"r_wua_on", r_wua_on},
            {"r_wla", r_wla},
        };
        for (const auto& p : positives) {
            if (!(p.v > 0.0) || !std::isfinite(p.v)) {
                throw std::domain_error(std::string("FurnaceParameters: ") + p.name +
                                        " must be strictly positive");
            }
        }
        if (!std::isfinite(t_ambient)) {
            throw std::domain_error("FurnaceParameters: t_ambient must be finite");
        }
        if (!(dt > 0.0) || dt > 1.0) {
            throw std::domain_error("FurnaceParameters: dt must lie in (0, 1]");
        }
    }

    // Ambient resistance of the upper wall for a given lid position.
    double r_upper_ambient(bool lid_on) const { return lid_on ? r_wua_on : r_wua_off; }
};

struct FurnaceState {
    double t_zu = 0.0;
    double t_zl = 0.0;
    double t_wu = 0.0;
    double t_wl = 0.0;

    bool finite() const {
        return std::isfinite(t_zu) && std::isfinite(t_zl) && std::isfinite(t_wu) &&
               std::isfinite(t_wl);
    }
};

struct PowerInput {
    double p_u = 0.0; // kW into the upper zone
    double p_l = 0.0; // kW into the lower zone
};

struct Setpoints {
    double t_sp_u = 0.0;
    double t_sp_l = 0.0;
};

// Per-step lid indicator, 1 = lid on.
using LidSchedule = std::vector<std::uint8_t>;

// Allowed wall-temperature deviation from the setpoint, delta_min <= 0 <= delta_max.
struct TemperatureBand {
    double delta_min = 0.0;
    double delta_max = 0.0;

    void validate() const {
        if (!(delta_min <= 0.0) || !(delta_max >= 0.0)) {
            throw std::domain_error("TemperatureBand: need delta_min <= 0 <= delta_max");
        }
    }
};

using TemperatureTrace = std::vector<FurnaceState>;

namespace detail {

// Euler update without the sign restriction on power; the optimizers treat
// dispatch as a real-valued decision and reuse this to rebuild traces that
// match their linear state rows exactly.
inline FurnaceState step_affine(const FurnaceState& state, const FurnaceParameters& params,
                                double p_u, double p_l, bool lid_on) {
    const double r_ua = params.r_upper_ambient(lid_on);
    FurnaceState next;
    next.t_zu = state.t_zu + params.dt / params.c_zu *
                                 ((state.t_zl - state.t_zu) / params.r_zuzl +
                                  (state.t_wu - state.t_zu) / params.r_wz);
    next.t_zl = state.t_zl + params.dt / params.c_zl *
                                 ((state.t_zu - state.t_zl) / params.r_zuzl +
                                  (state.t_wl - state.t_zl) / params.r_wz);
    next.t_wu = state.t_wu + params.dt / params.c_wu *
                                 ((params.t_ambient - state.t_wu) / r_ua +
                                  (state.t_wl - state.t_wu) / params.r_ww +
                                  (state.t_zu - state.t_wu) / params.r_wz + p_u);
    next.t_wl = state.t_wl + params.dt / params.c_wl *
                                 ((params.t_ambient - state.t_wl) / params.r_wla +
                                  (state.t_wu - state.t_wl) / params.r_ww +
                                  (state.t_zl - state.t_wl) / params.r_wz + p_l);
    return next;
}

} // namespace detail

// One explicit-Euler step of the four-state model.
inline FurnaceState step(const FurnaceState& state, const FurnaceParameters& params,
                         const PowerInput& power, bool lid_on) {
    params.validate();
    if (!state.finite()) {
        throw std::domain_error("step: non-finite furnace state");
    }
    if (!(power.p_u >= 0.0) || !(power.p_l >= 0.0) || !std::isfinite(power.p_u) ||
        !std::isfinite(power.p_l)) {
        throw std::domain_error("step: power inputs must be finite and non-negative");
    }
    return detail::step_affine(state, params, power.p_u, power.p_l, lid_on);
}

// Iterates `step` over N inputs; the returned trace has N+1 states with
// trace[0] == initial.
inline TemperatureTrace simulate(const FurnaceState& initial, const FurnaceParameters& params,
                                 const std::vector<PowerInput>& powers,
                                 const LidSchedule& lids) {
    if (powers.empty()) {
        throw std::domain_error("simulate: horizon must contain at least one step");
    }
    if (powers.size() != lids.size()) {
        throw std::domain_error("simulate: powers and lids length mismatch (" +
                                std::to_string(powers.size()) + " vs " +
                                std::to_string(lids.size()) + ")");
    }
    TemperatureTrace trace;
    trace.reserve(powers.size() + 1);
    trace.push_back(initial);
    for (std::size_t t = 0; t < powers.size(); ++t) {
        trace.push_back(step(trace.back(), params, powers[t], lids[t] != 0));
    }
    return trace;
}

struct SteadyStatePower {
    double p_u = 0.0;
    double p_l = 0.0;
    bool clamped = false; // a negative raw value was clamped to zero
};

// Steady-state consumption holding the wall setpoints for a given lid regime.
//
// The lid regime selects the same ambient resistance that the dynamic model
// uses for that lid position (lid on -> r_wua_on). Negative raw values are
// clamped at zero; the furnace cannot cool actively.
inline SteadyStatePower steady_state_power(const FurnaceParameters& params, const Setpoints& sp,
                                           bool lid_on) {
    params.validate();
    if (!std::isfinite(sp.t_sp_u) || !std::isfinite(sp.t_sp_l)) {
        throw std::domain_error("steady_state_power: non-finite setpoint");
    }

    const double gradient = (sp.t_sp_u - sp.t_sp_l) / params.r_ww;
    SteadyStatePower out;
    out.p_l = (sp.t_sp_l - params.t_ambient) / params.r_wla - gradient;
    out.p_u = (sp.t_sp_u - params.t_ambient) / params.r_upper_ambient(lid_on) + gradient;
    if (out.p_l < 0.0) {
        out.p_l = 0.0;
        out.clamped = true;
    }
    if (out.p_u < 0.0) {
        out.p_u = 0.0;
        out.clamped = true;
    }
    return out;
}

} // namespace zincflex
