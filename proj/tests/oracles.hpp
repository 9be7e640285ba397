#pragma once

// Test-only oracles, independent of the production solve paths:
//  - vertex enumeration for box-bounded LPs
//  - exhaustive binary enumeration for small MILPs
//  - a quadratic-time Fourier sum for spectral checks
// plus the random problem generators the solver suites share.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "zincflex/mfrr.hpp"
#include "zincflex/rng.hpp"
#include "zincflex/solver/branch_bound.hpp"
#include "zincflex/solver/lp.hpp"
#include "zincflex/solver/simplex.hpp"

namespace zincflex::testing {

// Solves a dense n x n system by Gaussian elimination with partial pivoting.
// Returns false when the matrix is (near) singular.
inline bool dense_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& out) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-10) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double v = b[r];
        for (std::size_t c = r + 1; c < n; ++c) v -= a[r][c] * out[c];
        out[r] = v / a[r][r];
    }
    return true;
}

// Brute-force LP oracle: enumerates every basic point (each choice of n active
// constraints among rows and bounds, equality rows always active) and returns
// the best feasible objective. Requires finite bounds on every variable.
inline std::optional<double> lp_vertex_enumeration(const LinearProgram& lp) {
    const int n = lp.num_vars;
    struct Constraint {
        std::vector<double> a;
        double rhs;
        RowSense sense;
    };
    std::vector<Constraint> cons;
    for (const auto& row : lp.rows) {
        Constraint c{std::vector<double>(static_cast<std::size_t>(n), 0.0), row.rhs, row.sense};
        for (const auto& [var, coef] : row.terms) c.a[static_cast<std::size_t>(var)] += coef;
        cons.push_back(std::move(c));
    }
    for (int j = 0; j < n; ++j) {
        Constraint lo{std::vector<double>(static_cast<std::size_t>(n), 0.0),
                      lp.lower[static_cast<std::size_t>(j)], RowSense::ge};
        lo.a[static_cast<std::size_t>(j)] = 1.0;
        cons.push_back(std::move(lo));
        Constraint up{std::vector<double>(static_cast<std::size_t>(n), 0.0),
                      lp.upper[static_cast<std::size_t>(j)], RowSense::le};
        up.a[static_cast<std::size_t>(j)] = 1.0;
        cons.push_back(std::move(up));
    }

    const std::size_t total = cons.size();
    const std::size_t need = static_cast<std::size_t>(n);

    std::optional<double> best;
    std::vector<std::size_t> chosen;
    std::vector<double> x;

    const auto try_active_set = [&]() {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (std::size_t idx : chosen) {
            a.push_back(cons[idx].a);
            b.push_back(cons[idx].rhs);
        }
        if (!dense_solve(std::move(a), std::move(b), x)) return;
        for (const auto& c : cons) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) lhs += c.a[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            const double tol = 1e-7;
            if (c.sense == RowSense::le && lhs > c.rhs + tol) return;
            if (c.sense == RowSense::ge && lhs < c.rhs - tol) return;
            if (c.sense == RowSense::eq && std::abs(lhs - c.rhs) > tol) return;
        }
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        if (!best || obj > *best) best = obj;
    };

    // Every choice of n constraints treated as active; any vertex of the
    // feasible set shows up as one of the nonsingular, feasible candidates.
    std::vector<std::size_t> pick(need);
    const auto recurse = [&](auto&& self, std::size_t from, std::size_t depth) -> void {
        if (depth == need) {
            chosen.assign(pick.begin(), pick.end());
            try_active_set();
            return;
        }
        for (std::size_t i = from; i + (need - depth) <= total; ++i) {
            pick[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

// Brute-force MILP oracle: solves the LP for every assignment of the binary
// variables and keeps the best feasible objective.
inline std::optional<double> milp_enumeration(const MilpProblem& problem) {
    const std::size_t k = problem.binaries.size();
    std::optional<double> best;
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        LinearProgram lp = problem.lp;
        bool consistent = true;
        for (std::size_t i = 0; i < k; ++i) {
            const auto b = static_cast<std::size_t>(problem.binaries[i]);
            const double v = (mask >> i) & 1U ? 1.0 : 0.0;
            if (v < lp.lower[b] - 1e-9 || v > lp.upper[b] + 1e-9) {
                consistent = false;
                break;
            }
            lp.lower[b] = v;
            lp.upper[b] = v;
        }
        if (!consistent) continue;
        const Solution sol = solve_lp(lp);
        if (sol.optimal() && (!best || sol.objective > *best)) best = sol.objective;
    }
    return best;
}

// Exhaustive mFRR oracle. Binaries are not enumerated blindly: per zone and
// hour the regulation state is one of {idle, up, down} (aux:5 forbids both),
// and the start/stop markers follow uniquely from that chain, so it suffices
// to scan 3^(Z*H) regulation patterns times the free acceptance flags and
// solve the LP with all binaries fixed. Every feasible binary assignment of
// the MILP appears exactly once in this scan.
inline std::optional<double> mfrr_enumeration(const MfrrProblem& prob) {
    const MfrrLayout& L = prob.layout;
    const int H = L.hours;
    const int Z = L.zone_count();
    const int cells = Z * H;

    std::vector<int> free_g;
    for (int h = 0; h < H; ++h) {
        const auto gv = static_cast<std::size_t>(L.g(h));
        if (prob.milp.lp.lower[gv] < prob.milp.lp.upper[gv]) free_g.push_back(h);
    }

    std::uint64_t patterns = 1;
    for (int i = 0; i < cells; ++i) patterns *= 3;
    const std::uint64_t g_combos = 1ULL << free_g.size();

    std::optional<double> best;
    std::vector<int> state(static_cast<std::size_t>(cells));
    for (std::uint64_t code = 0; code < patterns; ++code) {
        std::uint64_t rest = code;
        for (int i = 0; i < cells; ++i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        LinearProgram lp = prob.milp.lp;
        const auto fix = [&lp](int var, int value) {
            lp.lower[static_cast<std::size_t>(var)] = value;
            lp.upper[static_cast<std::size_t>(var)] = value;
        };
        bool consistent = true;
        for (int z = 0; z < Z && consistent; ++z) {
            int prev_up = 0, prev_down = 0;
            for (int h = 0; h < H; ++h) {
                const int st = state[static_cast<std::size_t>(z * H + h)];
                const int up = st == 1, down = st == 2;
                fix(L.uu(z, h), up);
                fix(L.ud(z, h), down);
                const int dyu = up - prev_up, dyd = down - prev_down;
                fix(L.yu(z, h), dyu > 0);
                fix(L.zu(z, h), dyu < 0);
                fix(L.yd(z, h), dyd > 0);
                fix(L.zd(z, h), dyd < 0);
                prev_up = up;
                prev_down = down;
            }
        }
        if (!consistent) continue;
        for (std::uint64_t gmask = 0; gmask < g_combos; ++gmask) {
            LinearProgram fixed = lp;
            for (std::size_t i = 0; i < free_g.size(); ++i) {
                const int var = L.g(free_g[i]);
                const double v = (gmask >> i) & 1U ? 1.0 : 0.0;
                fixed.lower[static_cast<std::size_t>(var)] = v;
                fixed.upper[static_cast<std::size_t>(var)] = v;
            }
            const Solution sol = solve_lp(fixed);
            if (sol.optimal() && (!best || sol.objective > *best)) best = sol.objective;
        }
    }
    return best;
}

// O(N^2) discrete Fourier magnitudes for bins 1..N/2, the spectral oracle.
inline std::vector<double> naive_periodogram(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> power;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> sum(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = -2.0 * 3.141592653589793238462643383279502884 *
                                 static_cast<double>(k) * static_cast<double>(t) /
                                 static_cast<double>(n);
            sum += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        power.push_back(std::norm(sum));
    }
    return power;
}

// Random box-bounded LP with a mix of row senses, biased toward feasibility.
inline LinearProgram random_lp(Rng& rng, int max_vars = 6, int max_rows = 10) {
    LinearProgram lp;
    const int n = rng.uniform_int(2, max_vars);
    std::vector<double> interior(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double lo = rng.uniform(-5.0, 0.0);
        const double up = lo + rng.uniform(0.5, 6.0);
        lp.add_variable(lo, up, rng.uniform(-10.0, 10.0));
        interior[static_cast<std::size_t>(j)] = rng.uniform(lo, up);
    }
    const int m = rng.uniform_int(1, max_rows);
    for (int i = 0; i < m; ++i) {
        std::vector<std::pair<int, double>> terms;
        double at_interior = 0.0;
        for (int j = 0; j < n; ++j) {
            if (rng.uniform() < 0.7) {
                const double coef = rng.uniform(-5.0, 5.0);
                terms.emplace_back(j, coef);
                at_interior += coef * interior[static_cast<std::size_t>(j)];
            }
        }
        if (terms.empty()) continue;
        const double roll = rng.uniform();
        if (roll < 0.45) {
            lp.add_row(RowSense::le, at_interior + rng.uniform(-0.5, 3.0), std::move(terms));
        } else if (roll < 0.9) {
            lp.add_row(RowSense::ge, at_interior - rng.uniform(-0.5, 3.0), std::move(terms));
        } else {
            lp.add_row(RowSense::eq, at_interior, std::move(terms));
        }
    }
    return lp;
}

inline MilpProblem random_milp(Rng& rng, int max_binaries = 12) {
    MilpProblem p;
    const int k = rng.uniform_int(2, max_binaries);
    const int n_cont = rng.uniform_int(0, 3);
    for (int j = 0; j < k; ++j) {
        p.lp.add_variable(0.0, 1.0, rng.uniform(-6.0, 10.0));
        p.binaries.push_back(j);
    }
    for (int j = 0; j < n_cont; ++j) {
        p.lp.add_variable(0.0, rng.uniform(0.5, 4.0), rng.uniform(-4.0, 6.0));
    }
    const int n = p.lp.num_vars;
    const int m = rng.uniform_int(1, 8);
    for (int i = 0; i < m; ++i) {
        std::vector<std::pair<int, double>> terms;
        double worst = 0.0; // max of lhs over the box, for a never-trivial rhs
        for (int j = 0; j < n; ++j) {
            if (rng.uniform() < 0.6) {
                const double coef = rng.uniform(-3.0, 5.0);
                terms.emplace_back(j, coef);
                worst += std::max(coef * p.lp.lower[static_cast<std::size_t>(j)],
                                  coef * p.lp.upper[static_cast<std::size_t>(j)]);
            }
        }
        if (terms.empty()) continue;
        p.lp.add_row(RowSense::le, rng.uniform(0.2, 0.9) * worst, std::move(terms));
    }
    return p;
}

} // namespace zincflex::testing
