#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "oracles.hpp"
#include "zincflex/solver/branch_bound.hpp"
#include "zincflex/solver/lp.hpp"
#include "zincflex/solver/simplex.hpp"

using namespace zincflex;

TEST_CASE("basic LP cases") {
    SECTION("single bounded variable") {
        LinearProgram lp;
        lp.add_variable(0.0, 1.0, 1.0);
        const Solution sol = solve_lp(lp);
        REQUIRE(sol.optimal());
        CHECK(sol.objective == Catch::Approx(1.0));
        CHECK(sol.x[0] == Catch::Approx(1.0));
    }

    SECTION("shared capacity face") {
        LinearProgram lp;
        const int x = lp.add_variable(0.0, 1.0, 1.0);
        const int y = lp.add_variable(0.0, 1.0, 1.0);
        lp.add_row(RowSense::le, 1.0, {{x, 1.0}, {y, 1.0}});
        const Solution sol = solve_lp(lp);
        REQUIRE(sol.optimal());
        CHECK(sol.objective == Catch::Approx(1.0));
    }

    SECTION("infeasible rows are detected") {
        LinearProgram lp;
        const int x = lp.add_variable(0.0, 10.0, 1.0);
        lp.add_row(RowSense::le, 1.0, {{x, 1.0}});
        lp.add_row(RowSense::ge, 2.0, {{x, 1.0}});
        CHECK(solve_lp(lp).status == SolveStatus::infeasible);
    }

    SECTION("unbounded detection") {
        LinearProgram lp;
        lp.add_variable(0.0, kInfinity, 1.0);
        CHECK(solve_lp(lp).status == SolveStatus::unbounded);
    }

    SECTION("negative lower bounds and free variables") {
        LinearProgram lp;
        const int x = lp.add_variable(-kInfinity, kInfinity, -1.0);
        lp.add_row(RowSense::ge, -3.0, {{x, 1.0}});
        const Solution sol = solve_lp(lp);
        REQUIRE(sol.optimal());
        CHECK(sol.x[0] == Catch::Approx(-3.0));
        CHECK(sol.objective == Catch::Approx(3.0));
    }

    SECTION("malformed problems are rejected") {
        LinearProgram lp;
        lp.add_variable(0.0, 1.0, 1.0);
        lp.add_row(RowSense::le, 1.0, {{5, 1.0}});
        CHECK_THROWS_AS(solve_lp(lp), std::domain_error);
    }
}

TEST_CASE("random LPs match the vertex enumeration oracle") {
    Rng rng(314159);
    int feasible_count = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const LinearProgram lp = testing::random_lp(rng);
        const Solution sol = solve_lp(lp);
        const auto oracle = testing::lp_vertex_enumeration(lp);
        INFO("trial " << trial);
        if (oracle) {
            REQUIRE(sol.optimal());
            CHECK(std::abs(sol.objective - *oracle) <=
                  1e-8 * std::max(1.0, std::abs(*oracle)));
            ++feasible_count;
        } else {
            CHECK(sol.status == SolveStatus::infeasible);
        }
    }
    CHECK(feasible_count > 100); // the generator is meant to be mostly feasible
}

TEST_CASE("weak duality spot-check on feasible dual points") {
    // For max c'x s.t. Ax <= b, x in [l,u]: any y >= 0 gives the bound
    // y'b + sum_j max over [l_j,u_j] of (c_j - y'A_j) x_j.
    Rng rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        LinearProgram lp;
        const int n = rng.uniform_int(2, 5);
        for (int j = 0; j < n; ++j) {
            lp.add_variable(rng.uniform(-2.0, 0.0), rng.uniform(0.0, 3.0), rng.uniform(-5.0, 5.0));
        }
        const int m = rng.uniform_int(1, 6);
        std::vector<std::vector<double>> dense(static_cast<std::size_t>(m),
                                               std::vector<double>(static_cast<std::size_t>(n)));
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < n; ++j) {
                const double coef = rng.uniform(-4.0, 4.0);
                dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = coef;
                terms.emplace_back(j, coef);
            }
            lp.add_row(RowSense::le, rng.uniform(0.0, 6.0), std::move(terms));
        }
        const Solution sol = solve_lp(lp);
        if (!sol.optimal()) continue;
        for (int k = 0; k < 5; ++k) {
            std::vector<double> y(static_cast<std::size_t>(m));
            for (double& v : y) v = rng.uniform(0.0, 2.0);
            double bound = 0.0;
            for (int i = 0; i < m; ++i) bound += y[static_cast<std::size_t>(i)] * lp.rows[static_cast<std::size_t>(i)].rhs;
            for (int j = 0; j < n; ++j) {
                double red = lp.objective[static_cast<std::size_t>(j)];
                for (int i = 0; i < m; ++i) {
                    red -= y[static_cast<std::size_t>(i)] * dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                }
                bound += std::max(red * lp.lower[static_cast<std::size_t>(j)],
                                  red * lp.upper[static_cast<std::size_t>(j)]);
            }
            CHECK(sol.objective <= bound + 1e-7);
        }
    }
}

TEST_CASE("LP solves are deterministic") {
    Rng rng(555);
    const LinearProgram lp = testing::random_lp(rng);
    const Solution a = solve_lp(lp);
    const Solution b = solve_lp(lp);
    REQUIRE(a.status == b.status);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
    CHECK(a.objective == b.objective);
}

TEST_CASE("basic MILP cases") {
    SECTION("fixed binaries reduce to the LP") {
        MilpProblem p;
        const int a = p.lp.add_variable(1.0, 1.0, 3.0);
        const int b = p.lp.add_variable(0.0, 0.0, 2.0);
        p.lp.add_row(RowSense::le, 2.0, {{a, 1.0}, {b, 1.0}});
        p.binaries = {a, b};
        const Solution sol = solve_milp(p, 1e-6);
        REQUIRE(sol.optimal());
        CHECK(sol.objective == Catch::Approx(3.0));
        CHECK(sol.mip_gap <= 1e-6);
    }

    SECTION("tiny knapsack") {
        MilpProblem p;
        const int a = p.lp.add_variable(0.0, 1.0, 3.0);
        const int b = p.lp.add_variable(0.0, 1.0, 2.0);
        p.lp.add_row(RowSense::le, 1.0, {{a, 1.0}, {b, 1.0}});
        p.binaries = {a, b};
        const Solution sol = solve_milp(p, 1e-6);
        REQUIRE(sol.optimal());
        CHECK(sol.objective == Catch::Approx(3.0));
        CHECK(sol.x[a] == Catch::Approx(1.0).margin(1e-6));
        CHECK(sol.x[b] == Catch::Approx(0.0).margin(1e-6));
    }

    SECTION("infeasible MILP reports status") {
        MilpProblem p;
        const int a = p.lp.add_variable(0.0, 1.0, 1.0);
        p.lp.add_row(RowSense::ge, 0.5, {{a, 1.0}});
        p.lp.add_row(RowSense::le, 0.6, {{a, 1.0}});
        p.binaries = {a};
        CHECK(solve_milp(p, 1e-6).status == SolveStatus::infeasible);
    }
}

TEST_CASE("random MILPs match exhaustive enumeration") {
    Rng rng(424242);
    int feasible_count = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const MilpProblem p = testing::random_milp(rng);
        const Solution sol = solve_milp(p, 1e-6);
        const auto oracle = testing::milp_enumeration(p);
        INFO("trial " << trial << " binaries " << p.binaries.size());
        if (oracle) {
            REQUIRE(sol.optimal());
            CHECK(std::abs(sol.objective - *oracle) <= 1e-6 * std::max(1.0, std::abs(*oracle)));
            ++feasible_count;
        } else {
            CHECK(sol.status == SolveStatus::infeasible);
        }
    }
    CHECK(feasible_count > 25);
}

TEST_CASE("MILP objective never exceeds its LP relaxation") {
    Rng rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const MilpProblem p = testing::random_milp(rng);
        const Solution relax = solve_lp(p.lp);
        const Solution sol = solve_milp(p, 1e-6);
        if (sol.optimal()) {
            REQUIRE(relax.optimal());
            CHECK(sol.objective <= relax.objective + 1e-7);
        }
    }
}

TEST_CASE("incumbent seeding accepts a feasible point and never worsens") {
    MilpProblem p;
    const int a = p.lp.add_variable(0.0, 1.0, 3.0);
    const int b = p.lp.add_variable(0.0, 1.0, 2.0);
    p.lp.add_row(RowSense::le, 1.0, {{a, 1.0}, {b, 1.0}});
    p.binaries = {a, b};
    MilpOptions opts;
    opts.incumbent_seed = {0.0, 1.0}; // feasible, objective 2
    const Solution sol = solve_milp(p, opts);
    REQUIRE(sol.optimal());
    CHECK(sol.objective == Catch::Approx(3.0));
}

TEST_CASE("LP text dump includes all sections") {
    MilpProblem p;
    const int a = p.lp.add_variable(0.0, 1.0, 3.0, "pick_a");
    p.lp.add_variable(-kInfinity, kInfinity, 0.0, "slackish");
    p.lp.add_row(RowSense::le, 1.0, {{a, 1.0}});
    p.binaries = {a};
    const std::string text = to_lp_text(p);
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Bounds") != std::string::npos);
    CHECK(text.find("Binaries") != std::string::npos);
    CHECK(text.find("pick_a") != std::string::npos);
    CHECK(text.find("slackish free") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}
