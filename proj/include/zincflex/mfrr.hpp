#pragma once

// Balancing-market (upward mFRR) bidding as a mixed-integer linear program.
//
// Hourly decisions: reserved capacity per zone, a regulating price bid, and
// up/down balancing powers. Activation economics are linearized: the hour's
// acceptance indicator g couples the price bid to the balancing-spot spread,
// and the auxiliary phi carries g * reserve through a McCormick envelope.
// When the spread is positive and the bid accepted, the promised reserve has
// to be delivered or charged to the slack.
//
// Up- and down-regulation hours are flagged by binaries with start/stop
// markers; a stop of up-regulation forces an immediate rebound, and a stop of
// down-regulation requires the zinc temperatures to have caught up with the
// baseline trajectory, which runs as a second state-space block driven by the
// baseline powers. Down-regulation, when active, moves at least 10% of the
// available headroom.
//
// Sizes follow docs/problem_sizes.md.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zincflex/control.hpp"
#include "zincflex/solver/branch_bound.hpp"
#include "zincflex/solver/lp.hpp"
#include "zincflex/thermal.hpp"
#include "zincflex/timeutil.hpp"

namespace zincflex {

struct MfrrDayInput {
    BaselineProfile baseline;
    PowerLimits limits;
    FurnaceParameters params;
    Setpoints setpoints;
    FurnaceState initial;
    LidSchedule lids;                 // per minute; must be constant within each step
    std::vector<double> lambda_r;     // capacity price, DKK/kW per hour
    std::vector<double> lambda_s;     // spot, DKK/kWh per hour
    std::vector<double> lambda_b;     // balancing, DKK/kWh per hour
    double lambda_pen = 0.0;          // DKK/kWh on the slack
    double big_m_price = 0.0;         // <= 0 selects the default
    double big_m_temp = 0.0;          // <= 0 selects the default
    std::optional<TemperatureBand> band;
    int steps_per_hour = 4;
    std::array<bool, 2> active_zones{true, true};

    int hours() const { return static_cast<int>(baseline.hours()); }
};

struct MfrrLayout {
    int hours = 0;
    int steps_per_hour = 4;
    int steps = 0;
    std::vector<int> zones; // active zone ids, 0 = upper, 1 = lower
    double dt = 0.25;
    double m_price = 0.0;
    double m_temp = 0.0;

    std::array<std::vector<double>, 2> step_base; // kW per step, both zones
    std::array<std::vector<double>, 2> hour_base; // kW per hour, both zones
    LidSchedule step_lids;
    std::vector<std::uint8_t> up_indicator; // 1 when lambda_b > lambda_s

    // continuous variables
    int off_pq = 0, off_rq = 0, off_buq = 0, off_bdq = 0, off_sq = 0;
    int off_p = 0, off_pr = 0, off_bu = 0, off_bd = 0, off_s = 0, off_bid = 0, off_phi = 0;
    int off_temp = 0, off_temp_base = 0;
    // binaries
    int off_g = 0, off_uu = 0, off_ud = 0, off_yu = 0, off_yd = 0, off_zu = 0, off_zd = 0;
    int num_vars = 0;

    int zone_count() const { return static_cast<int>(zones.size()); }
    int pq(int z, int h) const { return off_pq + z * hours + h; }
    int rq(int z, int h) const { return off_rq + z * hours + h; }
    int buq(int z, int h) const { return off_buq + z * hours + h; }
    int bdq(int z, int h) const { return off_bdq + z * hours + h; }
    int sq(int z, int h) const { return off_sq + z * hours + h; }
    int p(int h) const { return off_p + h; }
    int pr(int h) const { return off_pr + h; }
    int bu(int h) const { return off_bu + h; }
    int bd(int h) const { return off_bd + h; }
    int s(int h) const { return off_s + h; }
    int bid(int h) const { return off_bid + h; }
    int phi(int h) const { return off_phi + h; }
    // state: 0 t_zu, 1 t_zl, 2 t_wu, 3 t_wl; t in [0, steps]
    int temp(int state, int t) const { return off_temp + state * (steps + 1) + t; }
    int temp_base(int state, int t) const { return off_temp_base + state * (steps + 1) + t; }
    int g(int h) const { return off_g + h; }
    int uu(int z, int h) const { return off_uu + z * hours + h; }
    int ud(int z, int h) const { return off_ud + z * hours + h; }
    int yu(int z, int h) const { return off_yu + z * hours + h; }
    int yd(int z, int h) const { return off_yd + z * hours + h; }
    int zu(int z, int h) const { return off_zu + z * hours + h; }
    int zd(int z, int h) const { return off_zd + z * hours + h; }
};

struct MfrrProblem {
    MilpProblem milp;
    MfrrLayout layout;
};

namespace mfrr_detail {

inline void validate_input(const MfrrDayInput& in) {
    in.params.validate();
    const int hours = in.hours();
    if (hours < 1) throw std::domain_error("mfrr: empty baseline");
    const std::size_t minutes = static_cast<std::size_t>(hours) * 60;
    if (in.baseline.minutes() != minutes || in.lids.size() != minutes) {
        throw std::domain_error("mfrr: baseline and lid series must cover the same minutes");
    }
    const auto hu = static_cast<std::size_t>(hours);
    if (in.lambda_r.size() != hu || in.lambda_s.size() != hu || in.lambda_b.size() != hu) {
        throw std::domain_error("mfrr: hourly price series must have one entry per hour");
    }
    for (std::size_t h = 0; h < hu; ++h) {
        if (!std::isfinite(in.lambda_r[h]) || !std::isfinite(in.lambda_s[h]) ||
            !std::isfinite(in.lambda_b[h]) || in.lambda_r[h] < 0.0) {
            throw std::domain_error("mfrr: bad price at hour " + std::to_string(h));
        }
    }
    if (!(in.lambda_pen >= 0.0)) throw std::domain_error("mfrr: lambda_pen must be >= 0");
    if (in.steps_per_hour < 1 || in.steps_per_hour > 60 || 60 % in.steps_per_hour != 0) {
        throw std::domain_error("mfrr: steps_per_hour must divide 60");
    }
    if (in.band) in.band->validate();
    if (!in.active_zones[0] && !in.active_zones[1]) {
        throw std::domain_error("mfrr: at least one zone must be active");
    }
    if (!in.initial.finite()) throw std::domain_error("mfrr: non-finite initial state");
    // Zone limits must bracket the hourly baseline.
    for (int zone = 0; zone < 2; ++zone) {
        const auto& hourly = zone == 0 ? in.baseline.hourly_u : in.baseline.hourly_l;
        const double lo = in.limits.min_of(zone);
        const double hi = in.limits.nom_of(zone);
        if (lo < 0.0 || hi < lo) throw std::domain_error("mfrr: inconsistent power limits");
        for (double base : hourly) {
            if (base < lo - 1e-9 || base > hi + 1e-9) {
                throw std::domain_error("mfrr: hourly baseline leaves the [min, nominal] range");
            }
        }
    }
}

} // namespace mfrr_detail

inline MfrrProblem build_mfrr_problem(const MfrrDayInput& in) {
    mfrr_detail::validate_input(in);

    MfrrProblem prob;
    MfrrLayout& L = prob.layout;
    L.hours = in.hours();
    L.steps_per_hour = in.steps_per_hour;
    L.steps = L.hours * L.steps_per_hour;
    L.dt = 1.0 / in.steps_per_hour;
    for (int z = 0; z < 2; ++z) {
        if (in.active_zones[static_cast<std::size_t>(z)]) L.zones.push_back(z);
    }
    const int H = L.hours;
    const int T = L.steps;
    const int Z = L.zone_count();
    const int block = 60 / L.steps_per_hour;

    L.step_base[0].resize(static_cast<std::size_t>(T));
    L.step_base[1].resize(static_cast<std::size_t>(T));
    L.step_lids.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        double base_u = 0.0, base_l = 0.0;
        const std::uint8_t lid0 = in.lids[static_cast<std::size_t>(t * block)];
        for (int m = 0; m < block; ++m) {
            const auto idx = static_cast<std::size_t>(t * block + m);
            base_u += in.baseline.minute_u[idx];
            base_l += in.baseline.minute_l[idx];
            if (in.lids[idx] != lid0) {
                throw std::domain_error(
                    "mfrr: lid schedule toggles inside one step; use a finer steps_per_hour");
            }
        }
        L.step_base[0][static_cast<std::size_t>(t)] = base_u / block;
        L.step_base[1][static_cast<std::size_t>(t)] = base_l / block;
        L.step_lids[static_cast<std::size_t>(t)] = lid0;
    }
    L.hour_base[0] = in.baseline.hourly_u;
    L.hour_base[1] = in.baseline.hourly_l;

    L.up_indicator.resize(static_cast<std::size_t>(H));
    double max_spread = 0.0;
    for (int h = 0; h < H; ++h) {
        const double diff = in.lambda_b[static_cast<std::size_t>(h)] - in.lambda_s[static_cast<std::size_t>(h)];
        L.up_indicator[static_cast<std::size_t>(h)] = diff > 0.0 ? 1 : 0;
        max_spread = std::max(max_spread, std::abs(diff));
    }
    L.m_price = in.big_m_price > 0.0 ? in.big_m_price : 10.0 * std::max(1.0, max_spread);
    L.m_temp = in.big_m_temp > 0.0
                   ? in.big_m_temp
                   : 10.0 * std::max(1.0, in.setpoints.t_sp_u - in.params.t_ambient);

    LinearProgram& lp = prob.milp.lp;

    // --- variables ---------------------------------------------------------
    L.off_pq = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        for (int h = 0; h < H; ++h) {
            lp.add_variable(in.limits.min_of(zone), in.limits.nom_of(zone), 0.0);
        }
    }
    L.off_rq = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        for (int h = 0; h < H; ++h) {
            lp.add_variable(0.0, L.hour_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(h)], 0.0);
        }
    }
    L.off_buq = lp.num_vars;
    for (int i = 0; i < Z * H; ++i) lp.add_variable(0.0, kInfinity, 0.0);
    L.off_bdq = lp.num_vars;
    for (int i = 0; i < Z * H; ++i) lp.add_variable(0.0, kInfinity, 0.0);
    L.off_sq = lp.num_vars;
    for (int z = 0; z < Z; ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        for (int h = 0; h < H; ++h) {
            lp.add_variable(0.0, L.hour_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(h)], 0.0);
        }
    }
    L.off_p = lp.num_vars;
    for (int h = 0; h < H; ++h) lp.add_variable(0.0, kInfinity, 0.0);
    L.off_pr = lp.num_vars;
    for (int h = 0; h < H; ++h) {
        lp.add_variable(0.0, kInfinity, in.lambda_r[static_cast<std::size_t>(h)]);
    }
    L.off_bu = lp.num_vars;
    for (int h = 0; h < H; ++h) {
        lp.add_variable(0.0, kInfinity, in.lambda_b[static_cast<std::size_t>(h)]);
    }
    L.off_bd = lp.num_vars;
    for (int h = 0; h < H; ++h) {
        lp.add_variable(0.0, kInfinity, -in.lambda_b[static_cast<std::size_t>(h)]);
    }
    L.off_s = lp.num_vars;
    for (int h = 0; h < H; ++h) lp.add_variable(0.0, kInfinity, -in.lambda_pen);
    L.off_bid = lp.num_vars;
    for (int h = 0; h < H; ++h) lp.add_variable(0.0, kInfinity, 0.0);
    L.off_phi = lp.num_vars;
    for (int h = 0; h < H; ++h) lp.add_variable(0.0, kInfinity, 0.0);

    const std::array<double, 4> init{in.initial.t_zu, in.initial.t_zl, in.initial.t_wu,
                                     in.initial.t_wl};
    const std::array<double, 4> sp_of{0.0, 0.0, in.setpoints.t_sp_u, in.setpoints.t_sp_l};
    L.off_temp = lp.num_vars;
    for (int state = 0; state < 4; ++state) {
        for (int t = 0; t <= T; ++t) {
            if (t == 0) {
                lp.add_variable(init[static_cast<std::size_t>(state)],
                                init[static_cast<std::size_t>(state)], 0.0);
            } else if (in.band && state >= 2) {
                lp.add_variable(sp_of[static_cast<std::size_t>(state)] + in.band->delta_min,
                                sp_of[static_cast<std::size_t>(state)] + in.band->delta_max, 0.0);
            } else {
                lp.add_variable(-kInfinity, kInfinity, 0.0);
            }
        }
    }
    L.off_temp_base = lp.num_vars;
    for (int state = 0; state < 4; ++state) {
        for (int t = 0; t <= T; ++t) {
            if (t == 0) {
                lp.add_variable(init[static_cast<std::size_t>(state)],
                                init[static_cast<std::size_t>(state)], 0.0);
            } else {
                lp.add_variable(-kInfinity, kInfinity, 0.0);
            }
        }
    }

    // binaries; g is fixed to zero where a negative spread rules it out
    L.off_g = lp.num_vars;
    for (int h = 0; h < H; ++h) {
        const double diff = in.lambda_b[static_cast<std::size_t>(h)] - in.lambda_s[static_cast<std::size_t>(h)];
        lp.add_variable(0.0, diff < -1e-12 ? 0.0 : 1.0, 0.0);
    }
    const auto add_binary_family = [&](int& offset) {
        offset = lp.num_vars;
        for (int i = 0; i < Z * H; ++i) lp.add_variable(0.0, 1.0, 0.0);
    };
    add_binary_family(L.off_uu);
    add_binary_family(L.off_ud);
    add_binary_family(L.off_yu);
    add_binary_family(L.off_yd);
    add_binary_family(L.off_zu);
    add_binary_family(L.off_zd);
    L.num_vars = lp.num_vars;
    for (int v = L.off_g; v < lp.num_vars; ++v) prob.milp.binaries.push_back(v);

    // --- rows ---------------------------------------------------------------
    // Hourly power balance first (it defines the zone powers), then the two
    // state-space blocks in time order.
    for (int z = 0; z < Z; ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        for (int h = 0; h < H; ++h) {
            lp.add_row(RowSense::eq, L.hour_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(h)],
                       {{L.pq(z, h), 1.0}, {L.buq(z, h), 1.0}, {L.bdq(z, h), -1.0}});
        }
    }

    FurnaceParameters sp = in.params;
    sp.dt = L.dt;
    const auto thermal_block = [&](bool base_block) {
        const auto temp_of = [&](int state, int t) {
            return base_block ? L.temp_base(state, t) : L.temp(state, t);
        };
        for (int t = 0; t < T; ++t) {
            const int h = t / L.steps_per_hour;
            const bool lid_on = L.step_lids[static_cast<std::size_t>(t)] != 0;
            const double r_ua = sp.r_upper_ambient(lid_on);
            const double dt = L.dt;
            lp.add_row(RowSense::eq, 0.0,
                       {{temp_of(0, t + 1), 1.0},
                        {temp_of(0, t), -1.0 + dt / sp.c_zu * (1.0 / sp.r_zuzl + 1.0 / sp.r_wz)},
                        {temp_of(1, t), -dt / (sp.c_zu * sp.r_zuzl)},
                        {temp_of(2, t), -dt / (sp.c_zu * sp.r_wz)}});
            lp.add_row(RowSense::eq, 0.0,
                       {{temp_of(1, t + 1), 1.0},
                        {temp_of(1, t), -1.0 + dt / sp.c_zl * (1.0 / sp.r_zuzl + 1.0 / sp.r_wz)},
                        {temp_of(0, t), -dt / (sp.c_zl * sp.r_zuzl)},
                        {temp_of(3, t), -dt / (sp.c_zl * sp.r_wz)}});
            for (int wall = 0; wall < 2; ++wall) {
                const int state = 2 + wall;
                const double c = wall == 0 ? sp.c_wu : sp.c_wl;
                const double r_amb = wall == 0 ? r_ua : sp.r_wla;
                std::vector<std::pair<int, double>> terms{
                    {temp_of(state, t + 1), 1.0},
                    {temp_of(state, t), -1.0 + dt / c * (1.0 / r_amb + 1.0 / sp.r_ww + 1.0 / sp.r_wz)},
                    {temp_of(wall == 0 ? 3 : 2, t), -dt / (c * sp.r_ww)},
                    {temp_of(wall, t), -dt / (c * sp.r_wz)}};
                double rhs = dt / c * sp.t_ambient / r_amb;
                if (base_block || !in.active_zones[static_cast<std::size_t>(wall)]) {
                    rhs += dt / c * L.step_base[static_cast<std::size_t>(wall)][static_cast<std::size_t>(t)];
                } else {
                    int z = 0;
                    for (int k = 0; k < Z; ++k) {
                        if (L.zones[static_cast<std::size_t>(k)] == wall) z = k;
                    }
                    terms.emplace_back(L.pq(z, h), -dt / c);
                }
                lp.add_row(RowSense::eq, rhs, std::move(terms));
            }
        }
    };
    thermal_block(false);
    thermal_block(true);

    // Zone sums of the balancing powers and the hourly aggregates.
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.bd(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.bdq(z, h), -1.0);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.bu(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.buq(z, h), -1.0);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.p(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.pq(z, h), -1.0);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.pr(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.rq(z, h), -1.0);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }
    for (int h = 0; h < H; ++h) {
        std::vector<std::pair<int, double>> terms{{L.s(h), 1.0}};
        for (int z = 0; z < Z; ++z) terms.emplace_back(L.sq(z, h), -L.dt);
        lp.add_row(RowSense::eq, 0.0, std::move(terms));
    }

    // Activation acceptance: bid vs spread, phi = g * reserve.
    const double M = L.m_price;
    for (int h = 0; h < H; ++h) {
        const double diff = in.lambda_b[static_cast<std::size_t>(h)] - in.lambda_s[static_cast<std::size_t>(h)];
        lp.add_row(RowSense::le, diff + M, {{L.bid(h), 1.0}, {L.g(h), M}});
        lp.add_row(RowSense::ge, diff, {{L.bid(h), 1.0}, {L.g(h), M}});
    }
    for (int h = 0; h < H; ++h) {
        const bool ind = L.up_indicator[static_cast<std::size_t>(h)] != 0;
        if (ind) {
            lp.add_row(RowSense::le, 0.0, {{L.bu(h), 1.0}, {L.phi(h), -1.0}});
            lp.add_row(RowSense::ge, 0.0, {{L.bu(h), 1.0}, {L.s(h), 1.0}, {L.phi(h), -1.0}});
        } else {
            lp.add_row(RowSense::le, 0.0, {{L.bu(h), 1.0}});
            lp.add_row(RowSense::ge, 0.0, {{L.bu(h), 1.0}, {L.s(h), 1.0}});
        }
    }
    for (int h = 0; h < H; ++h) {
        lp.add_row(RowSense::le, 0.0, {{L.phi(h), 1.0}, {L.g(h), -M}});
        lp.add_row(RowSense::ge, 0.0, {{L.phi(h), 1.0}, {L.g(h), M}});
        lp.add_row(RowSense::le, M, {{L.phi(h), 1.0}, {L.pr(h), -1.0}, {L.g(h), M}});
        lp.add_row(RowSense::ge, -M, {{L.phi(h), 1.0}, {L.pr(h), -1.0}, {L.g(h), -M}});
    }

    // Headroom bounds, activation gating and the 10% rebound floor.
    for (int z = 0; z < Z; ++z) {
        const int zone = L.zones[static_cast<std::size_t>(z)];
        for (int h = 0; h < H; ++h) {
            const double base = L.hour_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(h)];
            const double up_room = base - in.limits.min_of(zone);
            const double down_room = in.limits.nom_of(zone) - base;
            if (L.up_indicator[static_cast<std::size_t>(h)] != 0) {
                lp.add_row(RowSense::le, 0.0, {{L.buq(z, h), 1.0}, {L.pr(h), -1.0}});
            } else {
                lp.add_row(RowSense::le, 0.0, {{L.buq(z, h), 1.0}});
            }
            lp.add_row(RowSense::le, 0.0, {{L.buq(z, h), 1.0}, {L.uu(z, h), -up_room}});
            lp.add_row(RowSense::le, 0.0, {{L.bdq(z, h), 1.0}, {L.ud(z, h), -down_room}});
            lp.add_row(RowSense::ge, 0.0, {{L.bdq(z, h), 1.0}, {L.ud(z, h), -0.10 * down_room}});
        }
    }

    // Start/stop bookkeeping; the day begins outside both regulation states.
    for (int z = 0; z < Z; ++z) {
        for (int h = 0; h < H; ++h) {
            std::vector<std::pair<int, double>> up{{L.uu(z, h), -1.0},
                                                   {L.yu(z, h), 1.0},
                                                   {L.zu(z, h), -1.0}};
            if (h > 0) up.emplace_back(L.uu(z, h - 1), 1.0);
            lp.add_row(RowSense::eq, 0.0, std::move(up));
            lp.add_row(RowSense::le, 1.0, {{L.yu(z, h), 1.0}, {L.zu(z, h), 1.0}});

            std::vector<std::pair<int, double>> down{{L.ud(z, h), -1.0},
                                                     {L.yd(z, h), 1.0},
                                                     {L.zd(z, h), -1.0}};
            if (h > 0) down.emplace_back(L.ud(z, h - 1), 1.0);
            lp.add_row(RowSense::eq, 0.0, std::move(down));
            lp.add_row(RowSense::le, 1.0, {{L.yd(z, h), 1.0}, {L.zd(z, h), 1.0}});

            lp.add_row(RowSense::le, 1.0, {{L.uu(z, h), 1.0}, {L.ud(z, h), 1.0}});
            lp.add_row(RowSense::le, 1.0, {{L.yu(z, h), 1.0}, {L.yd(z, h), 1.0}});
            lp.add_row(RowSense::le, 1.0, {{L.zu(z, h), 1.0}, {L.zd(z, h), 1.0}});
        }
    }

    // Rebound: it starts the hour up-regulation stops, and it may only stop
    // once the zinc of the zone has caught up with the baseline trajectory
    // over the surrounding window.
    for (int z = 0; z < Z; ++z) {
        const int zinc_state = L.zones[static_cast<std::size_t>(z)] == 0 ? 0 : 1;
        for (int h = 0; h < H; ++h) {
            lp.add_row(RowSense::ge, 0.0, {{L.yd(z, h), 1.0}, {L.zu(z, h), -1.0}});
        }
        for (int h = 1; h < H; ++h) {
            // Window: the boundary step entering hour h plus all of hour h,
            // the first hour after the rebound ended when zd(h) = 1.
            std::vector<std::pair<int, double>> terms;
            for (int t = L.steps_per_hour * h; t <= L.steps_per_hour * (h + 1); ++t) {
                terms.emplace_back(L.temp(zinc_state, t), 1.0);
                terms.emplace_back(L.temp_base(zinc_state, t), -1.0);
            }
            terms.emplace_back(L.zd(z, h), -L.m_temp);
            lp.add_row(RowSense::ge, -L.m_temp, std::move(terms));
        }
    }

    // Up-regulation comes first: cumulative down starts never lead up starts.
    for (int z = 0; z < Z; ++z) {
        for (int h = 0; h < H; ++h) {
            std::vector<std::pair<int, double>> terms;
            for (int k = 0; k <= h; ++k) {
                terms.emplace_back(L.yd(z, k), 1.0);
                terms.emplace_back(L.yu(z, k), -1.0);
            }
            lp.add_row(RowSense::le, 0.0, std::move(terms));
        }
    }

    return prob;
}

struct MfrrSolution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    double mip_gap = 0.0;
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;

    std::vector<double> reserve_total, reserve_u, reserve_l; // kW per hour
    std::vector<double> bid_price;                           // DKK/kWh per hour
    std::vector<double> up_total, up_u, up_l;                // activated up-regulation, kW
    std::vector<double> down_total, down_u, down_l;          // rebound consumption, kW
    std::vector<double> slack, slack_u, slack_l;
    std::vector<double> phi;
    std::vector<double> power_u, power_l;                    // hourly dispatch, kW
    std::vector<std::uint8_t> accepted;                      // g
    std::vector<std::uint8_t> up_active_u, up_active_l, down_active_u, down_active_l;
    std::vector<std::uint8_t> up_start_u, up_start_l, up_stop_u, up_stop_l;
    std::vector<std::uint8_t> down_start_u, down_start_l, down_stop_u, down_stop_l;
    TemperatureTrace trace, base_trace; // steps + 1 states each
};

struct MfrrSolveOptions {
    double gap_tol = 1e-4;
    std::vector<double> incumbent_seed; // full variable vector of the same layout
    std::int64_t max_nodes = 200'000;
};

inline MfrrSolution solve_mfrr(const MfrrDayInput& in, const MfrrSolveOptions& opts = {}) {
    MfrrProblem prob = build_mfrr_problem(in);
    const MfrrLayout& L = prob.layout;
    MfrrSolution out;

    if (in.band) {
        if (in.initial.t_wu < in.setpoints.t_sp_u + in.band->delta_min - 1e-9 ||
            in.initial.t_wu > in.setpoints.t_sp_u + in.band->delta_max + 1e-9 ||
            in.initial.t_wl < in.setpoints.t_sp_l + in.band->delta_min - 1e-9 ||
            in.initial.t_wl > in.setpoints.t_sp_l + in.band->delta_max + 1e-9) {
            out.status = SolveStatus::infeasible;
            return out;
        }
    }

    MilpOptions milp_opts;
    milp_opts.gap_tol = opts.gap_tol;
    milp_opts.max_nodes = opts.max_nodes;
    milp_opts.incumbent_seed = opts.incumbent_seed;
    const Solution sol = solve_milp(prob.milp, milp_opts);
    out.status = sol.status;
    out.nodes = sol.nodes;
    out.lp_iterations = sol.iterations;
    out.mip_gap = sol.mip_gap;
    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::iteration_limit) {
        return out;
    }
    if (sol.x.empty()) return out;
    out.objective = sol.objective;

    const int H = L.hours;
    const auto& x = sol.x;
    const auto val = [&](int idx) { return x[static_cast<std::size_t>(idx)]; };
    const auto flag = [&](int idx) {
        return static_cast<std::uint8_t>(val(idx) > 0.5 ? 1 : 0);
    };

    out.reserve_total.resize(static_cast<std::size_t>(H));
    out.bid_price.resize(static_cast<std::size_t>(H));
    out.up_total.resize(static_cast<std::size_t>(H));
    out.down_total.resize(static_cast<std::size_t>(H));
    out.slack.resize(static_cast<std::size_t>(H));
    out.phi.resize(static_cast<std::size_t>(H));
    out.accepted.resize(static_cast<std::size_t>(H));
    const std::size_t hu = static_cast<std::size_t>(H);
    out.reserve_u.assign(hu, 0.0);
    out.reserve_l.assign(hu, 0.0);
    out.up_u.assign(hu, 0.0);
    out.up_l.assign(hu, 0.0);
    out.down_u.assign(hu, 0.0);
    out.down_l.assign(hu, 0.0);
    out.slack_u.assign(hu, 0.0);
    out.slack_l.assign(hu, 0.0);
    out.power_u.assign(hu, 0.0);
    out.power_l.assign(hu, 0.0);
    out.up_active_u.assign(hu, 0);
    out.up_active_l.assign(hu, 0);
    out.down_active_u.assign(hu, 0);
    out.down_active_l.assign(hu, 0);
    out.up_start_u.assign(hu, 0);
    out.up_start_l.assign(hu, 0);
    out.up_stop_u.assign(hu, 0);
    out.up_stop_l.assign(hu, 0);
    out.down_start_u.assign(hu, 0);
    out.down_start_l.assign(hu, 0);
    out.down_stop_u.assign(hu, 0);
    out.down_stop_l.assign(hu, 0);

    for (int h = 0; h < H; ++h) {
        const auto hh = static_cast<std::size_t>(h);
        out.reserve_total[hh] = val(L.pr(h));
        out.bid_price[hh] = val(L.bid(h));
        out.up_total[hh] = val(L.bu(h));
        out.down_total[hh] = val(L.bd(h));
        out.slack[hh] = val(L.s(h));
        out.phi[hh] = val(L.phi(h));
        out.accepted[hh] = flag(L.g(h));
    }
    for (int z = 0; z < L.zone_count(); ++z) {
        const bool upper = L.zones[static_cast<std::size_t>(z)] == 0;
        for (int h = 0; h < H; ++h) {
            const auto hh = static_cast<std::size_t>(h);
            (upper ? out.reserve_u : out.reserve_l)[hh] = val(L.rq(z, h));
            (upper ? out.up_u : out.up_l)[hh] = val(L.buq(z, h));
            (upper ? out.down_u : out.down_l)[hh] = val(L.bdq(z, h));
            (upper ? out.slack_u : out.slack_l)[hh] = val(L.sq(z, h));
            (upper ? out.power_u : out.power_l)[hh] = val(L.pq(z, h));
            (upper ? out.up_active_u : out.up_active_l)[hh] = flag(L.uu(z, h));
            (upper ? out.down_active_u : out.down_active_l)[hh] = flag(L.ud(z, h));
            (upper ? out.up_start_u : out.up_start_l)[hh] = flag(L.yu(z, h));
            (upper ? out.up_stop_u : out.up_stop_l)[hh] = flag(L.zu(z, h));
            (upper ? out.down_start_u : out.down_start_l)[hh] = flag(L.yd(z, h));
            (upper ? out.down_stop_u : out.down_stop_l)[hh] = flag(L.zd(z, h));
        }
    }
    // Inactive zones run at their baseline.
    for (int zone = 0; zone < 2; ++zone) {
        if (in.active_zones[static_cast<std::size_t>(zone)]) continue;
        auto& power = zone == 0 ? out.power_u : out.power_l;
        for (int h = 0; h < H; ++h) {
            power[static_cast<std::size_t>(h)] =
                L.hour_base[static_cast<std::size_t>(zone)][static_cast<std::size_t>(h)];
        }
    }

    out.trace.reserve(static_cast<std::size_t>(L.steps) + 1);
    out.base_trace.reserve(static_cast<std::size_t>(L.steps) + 1);
    for (int t = 0; t <= L.steps; ++t) {
        out.trace.push_back(FurnaceState{val(L.temp(0, t)), val(L.temp(1, t)), val(L.temp(2, t)),
                                         val(L.temp(3, t))});
        out.base_trace.push_back(FurnaceState{val(L.temp_base(0, t)), val(L.temp_base(1, t)),
                                              val(L.temp_base(2, t)), val(L.temp_base(3, t))});
    }
    return out;
}

// The day with the largest total positive balancing-spot spread; ties go to
// the earliest day. `start_ts` must be midnight-aligned with hourly prices.
inline CivilDate worst_day_mfrr(std::int64_t start_ts, const std::vector<double>& lambda_s,
                                const std::vector<double>& lambda_b) {
    if (lambda_s.empty() || lambda_s.size() != lambda_b.size()) {
        throw std::domain_error("worst_day_mfrr: empty or misaligned price series");
    }
    if (start_ts % kSecondsPerDay != 0) {
        throw std::domain_error("worst_day_mfrr: series must start at midnight UTC");
    }
    const std::size_t days = lambda_s.size() / 24;
    if (days == 0) throw std::domain_error("worst_day_mfrr: needs at least one complete day");
    std::size_t best_day = 0;
    double best = -1.0;
    for (std::size_t d = 0; d < days; ++d) {
        double score = 0.0;
        for (std::size_t h = 0; h < 24; ++h) {
            score += std::max(lambda_b[d * 24 + h] - lambda_s[d * 24 + h], 0.0);
        }
        if (score > best) {
            best = score;
            best_day = d;
        }
    }
    return civil_from_timestamp(start_ts + static_cast<std::int64_t>(best_day) * kSecondsPerDay);
}

} // namespace zincflex
