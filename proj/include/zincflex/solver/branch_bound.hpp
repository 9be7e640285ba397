#pragma once

// Branch-and-bound over binary variables with LP-relaxation bounding.
//
// Nodes are explored best-bound first; within a node the LP warm-starts from
// the parent basis, so most node solves take only a handful of pivots.
// Branching picks the most fractional binary, all ties break toward the
// lowest index, making the search fully deterministic.

#include <cmath>
#include <cstdint>
#include <memory>
#include <queue>
#include <vector>

#include "zincflex/solver/lp.hpp"
#include "zincflex/solver/simplex.hpp"

namespace zincflex {

struct MilpOptions {
    double gap_tol = 1e-4;        // relative optimality gap to prove
    double integrality_tol = 1e-6;
    std::int64_t max_nodes = 1'000'000;
    SimplexOptions lp;
    // Optional feasible point used to seed the incumbent (e.g. the solution
    // of a more constrained variant of the same problem).
    std::vector<double> incumbent_seed;
};

namespace detail {

struct BnbNode {
    double bound = 0.0;
    std::int64_t id = 0;
    std::shared_ptr<const std::vector<std::uint8_t>> basis;
    // Binary fixings accumulated from the root: (variable, value).
    std::shared_ptr<const std::vector<std::pair<int, int>>> fixings;
};

struct NodeOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound; // larger bound first
        return a.id > b.id;                               // then older node first
    }
};

} // namespace detail

inline Solution solve_milp(const MilpProblem& problem, const MilpOptions& opts = {}) {
    problem.validate();

    LinearProgram lp = problem.lp;
    for (int b : problem.binaries) {
        const auto bu = static_cast<std::size_t>(b);
        const double lo = std::max(lp.lower[bu], 0.0);
        const double up = std::min(lp.upper[bu], 1.0);
        if (lo > up) {
            Solution sol;
            sol.status = SolveStatus::infeasible;
            return sol;
        }
        lp.lower[bu] = lo;
        lp.upper[bu] = up;
    }

    SimplexSolver solver(lp, opts.lp);

    const double int_tol = opts.integrality_tol;
    // Most fractional binary, or -1 when the point is integral.
    const auto fractional_binary = [&](const std::vector<double>& x) {
        int worst = -1;
        double worst_dist = int_tol;
        for (int b : problem.binaries) {
            const double v = x[static_cast<std::size_t>(b)];
            const double dist = std::abs(v - std::round(v));
            if (dist > worst_dist) {
                worst_dist = dist;
                worst = b;
            }
        }
        return worst;
    };

    Solution best;
    best.status = SolveStatus::infeasible;
    bool have_incumbent = false;
    double incumbent = -kInfinity;

    if (!opts.incumbent_seed.empty() &&
        opts.incumbent_seed.size() == static_cast<std::size_t>(lp.num_vars)) {
        bool integral = true;
        for (int b : problem.binaries) {
            const double v = opts.incumbent_seed[static_cast<std::size_t>(b)];
            if (std::abs(v - std::round(v)) > 1e-5) {
                integral = false;
                break;
            }
        }
        if (integral && max_violation(lp, opts.incumbent_seed) <= 1e-5) {
            have_incumbent = true;
            incumbent = objective_value(lp, opts.incumbent_seed);
            best.status = SolveStatus::optimal;
            best.x = opts.incumbent_seed;
            best.objective = incumbent;
        }
    }

    std::int64_t next_id = 0;
    std::int64_t nodes_processed = 0;
    std::int64_t lp_iterations = 0;
    double pruned_bound = -kInfinity; // tightest bound discarded by gap pruning

    std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>, detail::NodeOrder> open;

    Solution root = solver.solve();
    lp_iterations += root.iterations;
    ++nodes_processed;
    const auto prune_threshold = [&]() {
        return have_incumbent ? incumbent + opts.gap_tol * std::max(1.0, std::abs(incumbent))
                              : -kInfinity;
    };

    const auto accept_incumbent = [&](const Solution& sol) {
        if (!have_incumbent || sol.objective > incumbent) {
            have_incumbent = true;
            incumbent = sol.objective;
            best.status = SolveStatus::optimal;
            best.x = sol.x;
            best.objective = sol.objective;
        }
    };

    // Root LP and, if fractional, a rounding dive to get an early incumbent.
    if (root.status == SolveStatus::unbounded || root.status == SolveStatus::iteration_limit) {
        best.status = root.status;
        return best;
    }
    if (root.status == SolveStatus::optimal) {
        const int frac = fractional_binary(root.x);
        if (frac < 0) {
            accept_incumbent(root);
        } else {
            open.push(detail::BnbNode{
                root.objective, next_id++,
                std::make_shared<const std::vector<std::uint8_t>>(solver.basis()),
                std::make_shared<const std::vector<std::pair<int, int>>>()});

            std::vector<std::pair<int, int>> rounded;
            rounded.reserve(problem.binaries.size());
            for (int b : problem.binaries) {
                rounded.emplace_back(
                    b, std::round(root.x[static_cast<std::size_t>(b)]) >= 1.0 ? 1 : 0);
            }
            for (const auto& [var, val] : rounded) {
                solver.set_bounds(var, val, val);
            }
            Solution dive = solver.solve();
            lp_iterations += dive.iterations;
            if (dive.status == SolveStatus::optimal) accept_incumbent(dive);
            for (int b : problem.binaries) {
                solver.set_bounds(b, lp.lower[static_cast<std::size_t>(b)],
                                  lp.upper[static_cast<std::size_t>(b)]);
            }
        }
    }

    bool node_budget_hit = false;
    while (!open.empty()) {
        if (nodes_processed >= opts.max_nodes) {
            node_budget_hit = true;
            pruned_bound = std::max(pruned_bound, open.top().bound);
            break;
        }
        detail::BnbNode node = open.top();
        open.pop();
        if (node.bound <= prune_threshold()) {
            pruned_bound = std::max(pruned_bound, node.bound);
            continue;
        }

        // Restore the node's subproblem: root bounds plus its fixings.
        for (int b : problem.binaries) {
            solver.set_bounds(b, lp.lower[static_cast<std::size_t>(b)],
                              lp.upper[static_cast<std::size_t>(b)]);
        }
        for (const auto& [var, val] : *node.fixings) {
            solver.set_bounds(var, val, val);
        }
        solver.set_basis(*node.basis);

        Solution sol = solver.solve();
        lp_iterations += sol.iterations;
        ++nodes_processed;
        if (sol.status == SolveStatus::unbounded || sol.status == SolveStatus::iteration_limit) {
            best.status = sol.status;
            best.nodes = nodes_processed;
            best.iterations = lp_iterations;
            return best;
        }
        if (sol.status != SolveStatus::optimal) continue; // infeasible subtree
        if (sol.objective <= prune_threshold()) {
            pruned_bound = std::max(pruned_bound, sol.objective);
            continue;
        }

        const int frac = fractional_binary(sol.x);
        if (frac < 0) {
            accept_incumbent(sol);
            continue;
        }

        auto basis = std::make_shared<const std::vector<std::uint8_t>>(solver.basis());
        for (int value = 0; value <= 1; ++value) {
            auto fixings = std::make_shared<std::vector<std::pair<int, int>>>(*node.fixings);
            fixings->emplace_back(frac, value);
            open.push(detail::BnbNode{sol.objective, next_id++, basis,
                                      std::shared_ptr<const std::vector<std::pair<int, int>>>(
                                          std::move(fixings))});
        }
    }

    best.nodes = nodes_processed;
    best.iterations = lp_iterations;
    if (have_incumbent) {
        const double bound = std::max(pruned_bound, incumbent);
        best.mip_gap = std::max(0.0, (bound - incumbent) / std::max(1.0, std::abs(incumbent)));
        best.status = node_budget_hit ? SolveStatus::iteration_limit : SolveStatus::optimal;
    } else if (node_budget_hit) {
        best.status = SolveStatus::iteration_limit;
    }
    return best;
}

inline Solution solve_milp(const MilpProblem& problem, double gap_tol) {
    MilpOptions opts;
    opts.gap_tol = gap_tol;
    return solve_milp(problem, opts);
}

} // namespace zincflex
