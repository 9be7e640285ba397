#pragma once

// Day-ahead FCR bidding as a linear program.
//
// Decision variables are hourly reserve capacities per zone plus per-step
// correction (slack) powers. Dispatch couples them through the normalized
// frequency response: p^q_t = F_t * r^q_h + s'^q_t + Base^q_t. Hourly slack
// magnitudes bound the per-step corrections and are penalized in the
// objective; reserves are capped by the hourly baseline.
//
// Temperature rows are only generated when a band around the setpoints is
// requested; without a band the thermal trajectory does not constrain the
// optimum and is reconstructed after the solve.
//
// Variable and row counts follow the closed forms in docs/problem_sizes.md.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zincflex/control.hpp"
#include "zincflex/solver/lp.hpp"
#include "zincflex/solver/simplex.hpp"
#include "zincflex/thermal.hpp"

namespace zincflex {

struct FcrDayInput {
    BaselineProfile baseline;
    FurnaceParameters params;
    Setpoints setpoints;
    FurnaceState initial;
    LidSchedule lids;               // per minute
    std::vector<double> response;   // normalized frequency response per minute
    std::vector<double> lambda_fcr; // DKK/kW per hour
    double lambda_pen = 0.0;        // DKK/kWh
    std::optional<TemperatureBand> band;
    bool blocks_4h = false;
    int steps_per_hour = 60;
    std::array<bool, 2> active_zones{true, true}; // upper, lower

    int hours() const { return static_cast<int>(baseline.hours()); }
};

namespace fcr_detail {

inline void validate_input(const FcrDayInput& in) {
    in.params.validate();
    const int hours = in.hours();
    if (hours < 1) throw std::domain_error("fcr: empty baseline");
    const std::size_t minutes = static_cast<std::size_t>(hours) * 60;
    if (in.baseline.minutes() != minutes || in.lids.size() != minutes ||
        in.response.size() != minutes) {
        throw std::domain_error("fcr: baseline, lid and response series must cover the same minutes");
    }
    if (in.lambda_fcr.size() != static_cast<std::size_t>(hours)) {
        throw std::domain_error("fcr: lambda_fcr must have one entry per hour");
    }
    for (double v : in.lambda_fcr) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("fcr: lambda_fcr must be >= 0");
    }
    if (!(in.lambda_pen >= 0.0) || !std::isfinite(in.lambda_pen)) {
        throw std::domain_error("fcr: lambda_pen must be >= 0");
    }
    for (double v : in.response) {
        if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-9) {
            throw std::domain_error("fcr: normalized response must lie in [-1, 1]");
        }
    }
    if (in.band) in.band->validate();
    if (in.steps_per_hour < 1 || in.steps_per_hour > 60 || 60 % in.steps_per_hour != 0) {
        throw std::domain_error("fcr: steps_per_hour must divide 60");
    }
    if (in.blocks_4h && hours % 4 != 0) {
        throw std::domain_error("fcr: 4-hour blocks need a multiple of 4 hours");
    }
    if (!in.active_zones[0] && !in.active_zones[1]) {
        throw std::domain_error("fcr: at least one zone must be active");
    }
    if (!in.initial.finite()) throw std::domain_error("fcr: non-finite initial state");
}

} // namespace fcr_detail

struct FcrLayout {
    int hours = 0;
    int steps_per_hour = 60;
    int steps = 0;
    std::vector<int> zones; // active zone ids, 0 = upper, 1 = lower
    bool band = false;
    double dt = 1.0 / 60.0;

    // per-step data for both zones (including inactive ones)
    std::array<std::vector<double>, 2> step_base;
    std::vector<double> step_resp;
    LidSchedule step_lids;

    int off_pq = 0, off_pt = 0, off_temp = 0, off_rq = 0, off_sq = 0, off_sp = 0, off_pr = 0,
        off_sh = 0;
    int num_vars = 0;

    int zone_count() const { return static_cast<int>(zones.size()); }
    int pq(int z, int t) const { return off_pq + z * steps + t; }
    int pt(int t) const { return off_pt + t; }
    // state: 0 t_zu, 1 t_zl, 2 t_wu, 3 t_wl; t in [0, steps]
    int temp(int state, int t) const { return off_temp + state * (steps + 1) + t; }
    int rq(int z, int h) const { return off_rq + z * hours + h; }
    int sq(int z, int h) const { return off_sq + z * hours + h; }
    int sp(int z, int t) const { return off_sp + z * steps + t; }
    int pr(int h) const { return off_pr + h; }
    int sh(int h) const { return off_sh + h; }
};

struct FcrProblem {
    LinearProgram lp;
    FcrLayout layout;
};

inline FcrProblem build_fcr_problem(const FcrDayInput& in) {
    fcr_detail::validate_input(in);

    FcrProblem prob;
    FcrLayout& L = prob.layout;
    L.hours = in.hours();
    L.steps_per_hour = in.steps_per_hour;
    L.steps = L.hours * L.steps_per_hour;
    L.band = in.band.has_value();
    L.dt = 1.0 / in.steps_per_hour;
    for (int z = 0; z < 2; ++z) {
        if (in.active_zones[static_cast<std::size_t>(z)]) L.zones.push_back(z);
    }

    // Collapse minutes into steps: powers and the normalized response average,
    // the lid takes the majority value of the block.
    const int block = 60 / L.steps_per_hour;
    L.step_resp.resize(static_cast<std::size_t>(L.steps));
    L.step_lids.resize(static_cast<std::size_t>(L.steps));
    L.step_base[0].resize(static_cast<std::size_t>(L.steps));
    L.step_base[1].resize(static_cast<std::size_t>(L.steps));
    for (int t = 0; t < L.steps; ++t) {
        double resp = 0.0, base_u = 0.0, base_l = 0.0;
        int lid_on = 0;
        for (int m = 0; m < block; ++m) {
            const std::size_t idx = static_cast<std::size_t>(t * block + m);
            resp += in.response[idx];
            base_u += in.baseline.minute_u[idx];
            base_l += in.baseline.minute_l[idx];
            lid_on += in.lids[idx] != 0;
        }
        L.step_resp[static_cast<std::size_t>(t)] = resp / block;
        L.step_base[0][static_cast<std::size_t>(t)] = base_u / block;
        L.step_base[1][static_cast<std::size_t>(t)] = base_l / block;
        L.step_lids[static_cast<std::size_t>(t)] = 2 * lid_on >= block ? 1 : 0;
    }

    const int Z = L.zone_count();
    const int T = L.steps;
    const int H = L.hours;
    LinearProgram& lp = prob.lp;

    // Variables, in crash-friendly order (dispatch first).
    L.off_pq = 0;
    for (int z = 0; z < Z; ++z) {
        for (int t = 0; t < T; ++t) lp.add_variable(-kInfinity, kInfinity, 0.0);
    }
    L.off_pt = lp.num_vars;
    for (int t = 0; t < T; ++t) lp.add_variable(-kInfinity, kInfinity, 0.0);
    L.off_temp = lp.num_vars;
    if (L.band) {
        const std::array<double, 4> init{in.initial.t_zu, in.initial.t_zl, in.initial.t_wu,
                                         in.initial.t_wl};
        const std::array<double, 4> sp_of{0.0, 0.0, in.setpoints.t_sp_u, in.setpoints.t_sp_l};
        for (int state = 0; state < 4; ++state) {
            for (int t = 0; t <= T; ++t) {
                if (t == 0) {
                    lp.add_variable(init[static_cast<std::size_t>(state)],
                                    init[static_cast<std::size_t>(state)], 0.0);
                } else if (state >= 2) {
                    lp.add_variable(sp_of[static_cast<std::size_t>(state)] + in.band->delta_min,
                                    sp_of[static_cast<std::size_t>(state)] + in.band->delta_max,
                                    0.0);
                } else {
                    lp.add_variable(-kInfinity, kInfinity, 0.0);
                }
            }
        }
    }
    L.off_rq = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        const auto& hourly = L.zones[static_cast<std::size_t>(z)] == 0 ? in.baseline.hourly_u
                                                                       : in.baseline.hourly_l;
        for (int h = 0; h < H; ++h) lp.add_variable(0.0, hourly[static_cast<std::size_t>(h)], 0.0);
    }
    L.off_sq = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        for (int h = 0; h < H; ++h) lp.add_variable(-kInfinity, kInfinity, 0.0);
    }
    L.off_sp = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        for (int t = 0; t < T; ++t) lp.add_variable(-kInfinity, kInfinity, 0.0);
    }
    L.off_pr = lp.num_vars;
    for (int h = 0; h < H; ++h) {
        lp.add_variable(-kInfinity, kInfinity, in.lambda_fcr[static_cast<std::size_t>(h)]);
    }
    L.off_sh = lp.num_vars;
    for (int h = 0; h < H; ++h) lp.add_variable(-kInfinity, kInfinity, -in.lambda_pen);
    L.num_vars = lp.num_vars;

    FurnaceParameters step_params = in.params;
    step_params.dt = L.dt;

    // Time-major rows: dispatch coupling, the total, then the state equations.
    for (int t = 0; t < T; ++t) {
        const int h = t / L.steps_per_hour;
        for (int z = 0; z < Z; ++z) {
            const int zone = L.zones[static_cast<std::size_t>(z)];
            lp.add_row(RowSense::eq, L.step_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(t)],
                       {{L.pq(z, t), 1.0},
                        {L.rq(z, h), -L.step_resp[static_cast<std::size_t>(t)]},
                        {L.sp(z, t), -1.0}});
        }
        {
            std::vector<std::pair<int, double>> terms{{L.pt(t), 1.0}};
            for (int z = 0; z < Z; ++z) terms.emplace_back(L.pq(z, t), -1.0);
            lp.add_row(RowSense::eq, 0.0, std::move(terms));
        }
        if (L.band) {
            const bool lid_on = L.step_lids[static_cast<std::size_t>(t)] != 0;
            const double r_ua = step_params.r_upper_ambient(lid_on);
            const double dt = L.dt;
            const auto p = step_params;
            // zinc upper
            lp.add_row(RowSense::eq, 0.0,
                       {{L.temp(0, t + 1), 1.0},
                        {L.temp(0, t), -1.0 + dt / p.c_zu * (1.0 / p.r_zuzl + 1.0 / p.r_wz)},
                        {L.temp(1, t), -dt / (p.c_zu * p.r_zuzl)},
                        {L.temp(2, t), -dt / (p.c_zu * p.r_wz)}});
            // zinc lower
            lp.add_row(RowSense::eq, 0.0,
                       {{L.temp(1, t + 1), 1.0},
                        {L.temp(1, t), -1.0 + dt / p.c_zl * (1.0 / p.r_zuzl + 1.0 / p.r_wz)},
                        {L.temp(0, t), -dt / (p.c_zl * p.r_zuzl)},
                        {L.temp(3, t), -dt / (p.c_zl * p.r_wz)}});
            // wall upper
            {
                std::vector<std::pair<int, double>> terms{
                    {L.temp(2, t + 1), 1.0},
                    {L.temp(2, t), -1.0 + dt / p.c_wu * (1.0 / r_ua + 1.0 / p.r_ww + 1.0 / p.r_wz)},
                    {L.temp(3, t), -dt / (p.c_wu * p.r_ww)},
                    {L.temp(0, t), -dt / (p.c_wu * p.r_wz)}};
                double rhs = dt / p.c_wu * p.t_ambient / r_ua;
                if (in.active_zones[0]) {
                    const int z = 0; // upper zone is listed first when active
                    terms.emplace_back(L.pq(z, t), -dt / p.c_wu);
                } else {
                    rhs += dt / p.c_wu * L.step_base[0][static_cast<std::size_t>(t)];
                }
                lp.add_row(RowSense::eq, rhs, std::move(terms));
            }
            // wall lower
            {
                std::vector<std::pair<int, double>> terms{
                    {L.temp(3, t + 1), 1.0},
                    {L.temp(3, t),
                     -1.0 + dt / p.c_wl * (1.0 / p.r_wla + 1.0 / p.r_ww + 1.0 / p.r_wz)},
                    {L.temp(2, t), -dt / (p.c_wl * p.r_ww)},
                    {L.temp(1, t), -dt / (p.c_wl * p.r_wz)}};
                double rhs = dt / p.c_wl * p.t_ambient / p.r_wla;
                if (in.active_zones[1]) {
                    const int z = in.active_zones[0] ? 1 : 0;
                    terms.emplace_back(L.pq(z, t), -dt / p.c_wl);
                } else {
                    rhs += dt / p.c_wl * L.step_base[1][static_cast<std::size_t>(t)];
                }
                lp.add_row(RowSense::eq, rhs, std::move(terms));
            }
        }
    }

    // Hourly slack magnitude rows: s^q_h >= |s'^q_t| for every step of the hour.
    for (int z = 0; z < Z; ++z) {
        for (int h = 0; h < H; ++h) {
            for (int k = 0; k < L.steps_per_hour; ++k) {
                const int t = h * L.steps_per_hour + k;
                lp.add_row(RowSense::ge, 0.0, {{L.sq(z, h), 1.0}, {L.sp(z, t), -1.0}});
                lp.add_row(RowSense::ge, 0.0, {{L.sq(z, h), 1.0}, {L.sp(z, t), 1.0}});
            }
        }
    }

    // Aggregations and optional block coupling.
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.pr(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.rq(z, h), -1.0);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.sh(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.sq(z, h), -L.dt);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    if (in.blocks_4h) {
        for (int b = 0; b < H / 4; ++b) {
            for (int k = 0; k < 3; ++k) {
                const int h = b * 4 + k;
                lp.add_row(RowSense::eq, 0.0, {{L.pr(h), 1.0}, {L.pr(h + 1), -1.0}});
            }
        }
    }

    return prob;
}

struct FcrSolution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> reserve_total;  // kW per hour
    std::vector<double> reserve_u, reserve_l;
    std::vector<double> slack_hourly;   // objective slack s per hour
    std::vector<double> slack_u, slack_l; // s^q per hour
    std::vector<double> power_total;    // kW per step
    std::vector<double> power_u, power_l;
    std::vector<double> slack_prime_u, slack_prime_l; // s'^q per step
    TemperatureTrace trace;             // steps + 1 states
    std::int64_t lp_iterations = 0;
};

inline FcrSolution solve_fcr(const FcrDayInput& in) {
    FcrProblem prob = build_fcr_problem(in);
    const FcrLayout& L = prob.layout;
    FcrSolution out;

    if (in.band) {
        // The initial state is part of the banded trajectory.
        if (in.initial.t_wu < in.setpoints.t_sp_u + in.band->delta_min - 1e-9 ||
            in.initial.t_wu > in.setpoints.t_sp_u + in.band->delta_max + 1e-9 ||
            in.initial.t_wl < in.setpoints.t_sp_l + in.band->delta_min - 1e-9 ||
            in.initial.t_wl > in.setpoints.t_sp_l + in.band->delta_max + 1e-9) {
            out.status = SolveStatus::infeasible;
            return out;
        }
    }

    const Solution sol = solve_lp(prob.lp);
    out.status = sol.status;
    out.lp_iterations = sol.iterations;
    if (!sol.optimal()) return out;
    out.objective = sol.objective;

    const int H = L.hours;
    const int T = L.steps;
    out.reserve_total.resize(static_cast<std::size_t>(H));
    out.reserve_u.assign(static_cast<std::size_t>(H), 0.0);
    out.reserve_l.assign(static_cast<std::size_t>(H), 0.0);
    out.slack_hourly.resize(static_cast<std::size_t>(H));
    out.slack_u.assign(static_cast<std::size_t>(H), 0.0);
    out.slack_l.assign(static_cast<std::size_t>(H), 0.0);
    out.power_u.resize(static_cast<std::size_t>(T));
    out.power_l.resize(static_cast<std::size_t>(T));
    out.power_total.resize(static_cast<std::size_t>(T));
    out.slack_prime_u.assign(static_cast<std::size_t>(T), 0.0);
    out.slack_prime_l.assign(static_cast<std::size_t>(T), 0.0);

    const auto& x = sol.x;
    for (int h = 0; h < H; ++h) {
        out.reserve_total[static_cast<std::size_t>(h)] = x[static_cast<std::size_t>(L.pr(h))];
        out.slack_hourly[static_cast<std::size_t>(h)] = x[static_cast<std::size_t>(L.sh(h))];
    }
    for (int z = 0; z < L.zone_count(); ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        auto& reserve = zone == 0 ? out.reserve_u : out.reserve_l;
        auto& slack = zone == 0 ? out.slack_u : out.slack_l;
        auto& sprime = zone == 0 ? out.slack_prime_u : out.slack_prime_l;
        for (int h = 0; h < H; ++h) {
            reserve[static_cast<std::size_t>(h)] = x[static_cast<std::size_t>(L.rq(z, h))];
            slack[static_cast<std::size_t>(h)] = x[static_cast<std::size_t>(L.sq(z, h))];
        }
        for (int t = 0; t < T; ++t) {
            sprime[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(L.sp(z, t))];
        }
    }
    for (int t = 0; t < T; ++t) {
        double total = 0.0;
        for (int zone = 0; zone < 2; ++zone) {
            double value = L.step_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(t)];
            for (int z = 0; z < L.zone_count(); ++z) {
                if (L.zones[static_cast<std::size_t>(z)] == zone) {
                    value = x[static_cast<std::size_t>(L.pq(z, t))];
                }
            }
            (zone == 0 ? out.power_u : out.power_l)[static_cast<std::size_t>(t)] = value;
            total += value;
        }
        out.power_total[static_cast<std::size_t>(t)] = total;
    }

    out.trace.reserve(static_cast<std::size_t>(T) + 1);
    if (L.band) {
        for (int t = 0; t <= T; ++t) {
            out.trace.push_back(FurnaceState{x[static_cast<std::size_t>(L.temp(0, t))],
                                             x[static_cast<std::size_t>(L.temp(1, t))],
                                             x[static_cast<std::size_t>(L.temp(2, t))],
                                             x[static_cast<std::size_t>(L.temp(3, t))]});
        }
    } else {
        FurnaceParameters step_params = in.params;
        step_params.dt = L.dt;
        FurnaceState state = in.initial;
        out.trace.push_back(state);
        for (int t = 0; t < T; ++t) {
            state = detail::step_affine(state, step_params, out.power_u[static_cast<std::size_t>(t)],
                                        out.power_l[static_cast<std::size_t>(t)],
                                        L.step_lids[static_cast<std::size_t>(t)] != 0);
            out.trace.push_back(state);
        }
    }
    return out;
}

// Equilibrium start at the setpoints, the usual day-ahead assumption.
inline FurnaceState setpoint_equilibrium(const Setpoints& sp) {
    return FurnaceState{sp.t_sp_u, sp.t_sp_l, sp.t_sp_u, sp.t_sp_l};
}

} // namespace zincflex
