#pragma once

// Bounded-variable revised simplex.
//
// The problem is held in computational form: every row becomes an equality
// a'x + s = rhs with a logical (slack) variable s whose bounds encode the row
// sense. The basis is factorized with Eigen's sparse LU and kept current
// between refactorizations through product-form eta updates.
//
// Feasibility is reached with a composite phase 1 that minimizes the total
// bound violation of the basic variables, so the solver can start from any
// basis. That is also what makes warm starts after bound changes cheap, which
// branch-and-bound relies on.
//
// Pricing is Dantzig with a switch to Bland's rule after a run of degenerate
// pivots. All tie-breaks are by lowest index, so identical inputs produce
// identical pivot sequences and bit-identical solutions.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zincflex/solver/lp.hpp"

namespace zincflex {

struct SimplexOptions {
    double feasibility_tol = 1e-7;
    double optimality_tol = 1e-7;
    double pivot_tol = 1e-7;
    int refactor_interval = 100;
    int bland_threshold = 60;
    std::int64_t max_iterations = 5'000'000;
};

class SimplexSolver {
  public:
    enum class VarStatus : std::uint8_t { at_lower = 0, at_upper = 1, free_zero = 2, basic = 3 };

    explicit SimplexSolver(const LinearProgram& lp, SimplexOptions opts = {})
        : opts_(opts), n_(lp.num_vars), m_(static_cast<int>(lp.rows.size())) {
        lp.validate();
        const int total = n_ + m_;
        lower_.resize(total);
        upper_.resize(total);
        cost_.assign(static_cast<std::size_t>(total), 0.0);
        objective_ = lp.objective;
        for (int j = 0; j < n_; ++j) {
            lower_[j] = lp.lower[static_cast<std::size_t>(j)];
            upper_[j] = lp.upper[static_cast<std::size_t>(j)];
            cost_[j] = -lp.objective[static_cast<std::size_t>(j)]; // minimize internally
        }
        rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            const auto& row = lp.rows[static_cast<std::size_t>(i)];
            rhs_[i] = row.rhs;
            const int logical = n_ + i;
            switch (row.sense) {
                case RowSense::le:
                    lower_[logical] = 0.0;
                    upper_[logical] = kInfinity;
                    break;
                case RowSense::ge:
                    lower_[logical] = -kInfinity;
                    upper_[logical] = 0.0;
                    break;
                case RowSense::eq:
                    lower_[logical] = 0.0;
                    upper_[logical] = 0.0;
                    break;
            }
        }
        build_columns(lp);
        cold_start();
    }

    int num_vars() const { return n_; }
    int num_rows() const { return m_; }

    // Tighten or relax bounds of a structural variable; keeps the basis.
    void set_bounds(int var, double lo, double up) {
        if (var < 0 || var >= n_) throw std::domain_error("set_bounds: variable out of range");
        if (std::isnan(lo) || std::isnan(up) || lo > up) {
            throw std::domain_error("set_bounds: invalid interval");
        }
        lower_[var] = lo;
        upper_[var] = up;
        if (status_[var] != VarStatus::basic) {
            if (status_[var] == VarStatus::at_lower && !std::isfinite(lo)) {
                status_[var] = std::isfinite(up) ? VarStatus::at_upper : VarStatus::free_zero;
            }
            if (status_[var] == VarStatus::at_upper && !std::isfinite(up)) {
                status_[var] = std::isfinite(lo) ? VarStatus::at_lower : VarStatus::free_zero;
            }
        }
        values_stale_ = true;
    }

    std::vector<std::uint8_t> basis() const {
        std::vector<std::uint8_t> snap(status_.size());
        for (std::size_t j = 0; j < status_.size(); ++j) {
            snap[j] = static_cast<std::uint8_t>(status_[j]);
        }
        return snap;
    }

    void set_basis(const std::vector<std::uint8_t>& snap) {
        if (snap.size() != status_.size()) {
            throw std::domain_error("set_basis: snapshot size mismatch");
        }
        basic_vars_.clear();
        for (std::size_t j = 0; j < snap.size(); ++j) {
            status_[j] = static_cast<VarStatus>(snap[j]);
            if (status_[j] == VarStatus::basic) basic_vars_.push_back(static_cast<int>(j));
        }
        if (static_cast<int>(basic_vars_.size()) != m_) {
            throw std::domain_error("set_basis: basis size mismatch");
        }
        lu_valid_ = false;
        values_stale_ = true;
    }

    Solution solve() {
        Solution sol;
        iterations_ = 0;
        if (!lu_valid_) {
            if (!factorize()) {
                // Singular basis snapshot; fall back to a cold start.
                cold_start();
                if (!factorize()) throw std::runtime_error("simplex: singular start basis");
            }
        } else if (values_stale_) {
            refresh_values();
        }

        degenerate_run_ = 0;
        const SolveStatus status = iterate();
        sol.status = status;
        sol.iterations = iterations_;
        if (status == SolveStatus::optimal) {
            // Re-solve the basic system once more so the reported vertex is
            // free of accumulated eta roundoff.
            if (!etas_.empty()) factorize();
            sol.x.assign(x_.begin(), x_.begin() + n_);
            sol.objective = 0.0;
            for (int j = 0; j < n_; ++j) sol.objective += objective_[static_cast<std::size_t>(j)] * x_[j];
        }
        return sol;
    }

  private:
    struct Eta {
        int row = 0;
        double pivot = 0.0;
        std::vector<std::pair<int, double>> entries; // includes the pivot row entry
    };

    SimplexOptions opts_;
    int n_ = 0;
    int m_ = 0;
    std::vector<double> lower_, upper_, cost_, objective_;
    std::vector<double> rhs_;
    // structural columns, CSC
    std::vector<int> col_ptr_, col_row_;
    std::vector<double> col_val_;

    std::vector<VarStatus> status_;
    std::vector<int> basic_vars_;   // variable basic in each row slot
    std::vector<int> basis_pos_;    // inverse map, -1 when nonbasic
    std::vector<double> x_;         // current values, structural + logical

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    Eigen::SparseMatrix<double> basis_matrix_;
    std::vector<Eta> etas_;
    bool lu_valid_ = false;
    bool values_stale_ = true;
    std::int64_t iterations_ = 0;
    int degenerate_run_ = 0;

    Eigen::VectorXd work_w_, work_y_, work_rhs_;

    void build_columns(const LinearProgram& lp) {
        std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n_));
        for (int i = 0; i < m_; ++i) {
            for (const auto& [var, coef] : lp.rows[static_cast<std::size_t>(i)].terms) {
                cols[static_cast<std::size_t>(var)].emplace_back(i, coef);
            }
        }
        col_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (int j = 0; j < n_; ++j) {
            auto& c = cols[static_cast<std::size_t>(j)];
            std::sort(c.begin(), c.end());
            // merge duplicate row entries
            std::size_t out = 0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (out > 0 && c[out - 1].first == c[k].first) {
                    c[out - 1].second += c[k].second;
                } else {
                    c[out++] = c[k];
                }
            }
            c.resize(out);
            col_ptr_[static_cast<std::size_t>(j) + 1] =
                col_ptr_[static_cast<std::size_t>(j)] + static_cast<int>(out);
        }
        col_row_.resize(static_cast<std::size_t>(col_ptr_[static_cast<std::size_t>(n_)]));
        col_val_.resize(col_row_.size());
        for (int j = 0; j < n_; ++j) {
            int at = col_ptr_[static_cast<std::size_t>(j)];
            for (const auto& [row, coef] : cols[static_cast<std::size_t>(j)]) {
                col_row_[static_cast<std::size_t>(at)] = row;
                col_val_[static_cast<std::size_t>(at)] = coef;
                ++at;
            }
        }
    }

    template <typename Fn>
    void for_column(int j, Fn&& fn) const {
        if (j < n_) {
            for (int k = col_ptr_[static_cast<std::size_t>(j)];
                 k < col_ptr_[static_cast<std::size_t>(j) + 1]; ++k) {
                fn(col_row_[static_cast<std::size_t>(k)], col_val_[static_cast<std::size_t>(k)]);
            }
        } else {
            fn(j - n_, 1.0);
        }
    }

    double default_value(int j) const {
        if (status_[j] == VarStatus::at_lower) return lower_[j];
        if (status_[j] == VarStatus::at_upper) return upper_[j];
        return 0.0;
    }

    // Picks a structurally triangular starting basis: a column can cover the
    // first row it appears in; uncovered rows keep their logical.
    void cold_start() {
        status_.assign(static_cast<std::size_t>(n_ + m_), VarStatus::at_lower);
        for (int j = 0; j < n_ + m_; ++j) {
            if (std::isfinite(lower_[j])) {
                status_[j] = VarStatus::at_lower;
            } else if (std::isfinite(upper_[j])) {
                status_[j] = VarStatus::at_upper;
            } else {
                status_[j] = VarStatus::free_zero;
            }
        }

        struct Candidate {
            int var = -1;
            bool free = false;
            double range = 0.0;
            double coef = 0.0;
        };
        std::vector<Candidate> pick(static_cast<std::size_t>(m_));
        for (int j = 0; j < n_; ++j) {
            const int begin = col_ptr_[static_cast<std::size_t>(j)];
            const int end = col_ptr_[static_cast<std::size_t>(j) + 1];
            if (begin == end) continue;
            int first_row = col_row_[static_cast<std::size_t>(begin)];
            double first_coef = col_val_[static_cast<std::size_t>(begin)];
            double max_abs = 0.0;
            for (int k = begin; k < end; ++k) {
                max_abs = std::max(max_abs, std::abs(col_val_[static_cast<std::size_t>(k)]));
            }
            if (std::abs(first_coef) < 1e-7 || std::abs(first_coef) < 0.01 * max_abs) continue;
            Candidate cand;
            cand.var = j;
            cand.free = !std::isfinite(lower_[j]) && !std::isfinite(upper_[j]);
            cand.range = std::min(upper_[j] - lower_[j], 1e30);
            cand.coef = std::abs(first_coef);
            Candidate& best = pick[static_cast<std::size_t>(first_row)];
            const auto better = [](const Candidate& a, const Candidate& b) {
                if (a.free != b.free) return a.free;
                if (a.range != b.range) return a.range > b.range;
                if (a.coef != b.coef) return a.coef > b.coef;
                return a.var < b.var;
            };
            if (best.var < 0 || better(cand, best)) best = cand;
        }
        basic_vars_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            const int var = pick[static_cast<std::size_t>(i)].var >= 0
                                ? pick[static_cast<std::size_t>(i)].var
                                : n_ + i;
            basic_vars_[static_cast<std::size_t>(i)] = var;
            status_[var] = VarStatus::basic;
        }
        lu_valid_ = false;
        values_stale_ = true;
    }

    bool factorize() {
        basis_pos_.assign(static_cast<std::size_t>(n_ + m_), -1);
        for (int i = 0; i < m_; ++i) basis_pos_[basic_vars_[static_cast<std::size_t>(i)]] = i;

        if (m_ > 0) {
            std::vector<Eigen::Triplet<double>> trips;
            for (int i = 0; i < m_; ++i) {
                for_column(basic_vars_[static_cast<std::size_t>(i)],
                           [&](int row, double coef) { trips.emplace_back(row, i, coef); });
            }
            basis_matrix_.resize(m_, m_);
            basis_matrix_.setFromTriplets(trips.begin(), trips.end());
            lu_.compute(basis_matrix_);
            if (lu_.info() != Eigen::Success) return false;
        }
        etas_.clear();
        lu_valid_ = true;
        refresh_values();
        return true;
    }

    void refresh_values() {
        x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
        work_rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) work_rhs_[i] = rhs_[static_cast<std::size_t>(i)];
        for (int j = 0; j < n_ + m_; ++j) {
            if (status_[j] == VarStatus::basic) continue;
            const double v = default_value(j);
            x_[j] = v;
            if (v != 0.0) {
                for_column(j, [&](int row, double coef) { work_rhs_[row] -= coef * v; });
            }
        }
        ftran(work_rhs_);
        for (int i = 0; i < m_; ++i) x_[basic_vars_[static_cast<std::size_t>(i)]] = work_rhs_[i];
        values_stale_ = false;
    }

    void ftran(Eigen::VectorXd& v) {
        if (m_ == 0) return;
        v = lu_.solve(v);
        for (const Eta& e : etas_) {
            const double pivot_val = v[e.row] / e.pivot;
            if (pivot_val != 0.0) {
                for (const auto& [i, w] : e.entries) {
                    if (i != e.row) v[i] -= w * pivot_val;
                }
            }
            v[e.row] = pivot_val;
        }
    }

    void btran(Eigen::VectorXd& v) {
        if (m_ == 0) return;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double dot = 0.0;
            for (const auto& [i, w] : it->entries) {
                if (i != it->row) dot += w * v[i];
            }
            v[it->row] = (v[it->row] - dot) / it->pivot;
        }
        v = lu_.adjoint().solve(v);
    }

    double violation(int var) const {
        if (x_[var] < lower_[var]) return lower_[var] - x_[var];
        if (x_[var] > upper_[var]) return x_[var] - upper_[var];
        return 0.0;
    }

    SolveStatus iterate() {
        const double ftol = opts_.feasibility_tol;
        const double dtol = opts_.optimality_tol;
        work_y_.resize(m_);
        work_w_.resize(m_);

        while (true) {
            if (iterations_ >= opts_.max_iterations) return SolveStatus::iteration_limit;

            // Phase selection: any basic variable outside its bounds puts us
            // in phase 1 with unit costs toward feasibility.
            bool phase1 = false;
            for (int i = 0; i < m_ && !phase1; ++i) {
                phase1 = violation(basic_vars_[static_cast<std::size_t>(i)]) > ftol;
            }

            for (int i = 0; i < m_; ++i) {
                const int var = basic_vars_[static_cast<std::size_t>(i)];
                if (phase1) {
                    if (x_[var] < lower_[var] - ftol) {
                        work_y_[i] = -1.0;
                    } else if (x_[var] > upper_[var] + ftol) {
                        work_y_[i] = 1.0;
                    } else {
                        work_y_[i] = 0.0;
                    }
                } else {
                    work_y_[i] = cost_[static_cast<std::size_t>(var)];
                }
            }
            btran(work_y_);

            const bool bland = degenerate_run_ > opts_.bland_threshold;
            int entering = -1;
            int direction = 0;
            double best_score = dtol;
            for (int j = 0; j < n_ + m_; ++j) {
                const VarStatus st = status_[j];
                if (st == VarStatus::basic) continue;
                if (lower_[j] == upper_[j]) continue; // fixed
                double d = phase1 ? 0.0 : cost_[static_cast<std::size_t>(j)];
                for_column(j, [&](int row, double coef) { d -= work_y_[row] * coef; });
                int dir = 0;
                if (st == VarStatus::at_lower && d < -dtol) {
                    dir = 1;
                } else if (st == VarStatus::at_upper && d > dtol) {
                    dir = -1;
                } else if (st == VarStatus::free_zero && std::abs(d) > dtol) {
                    dir = d < 0.0 ? 1 : -1;
                }
                if (dir == 0) continue;
                if (bland) {
                    entering = j;
                    direction = dir;
                    break;
                }
                if (std::abs(d) > best_score) {
                    best_score = std::abs(d);
                    entering = j;
                    direction = dir;
                }
            }

            if (entering < 0) {
                if (!phase1) return SolveStatus::optimal;
                // No way to reduce the remaining infeasibility.
                return SolveStatus::infeasible;
            }

            work_w_.setZero();
            for_column(entering, [&](int row, double coef) { work_w_[row] = coef; });
            ftran(work_w_);

            // Ratio test. The entering variable moves by step >= 0 in
            // `direction`; basic i changes at rate -direction * w_i.
            double max_step = kInfinity;
            if (std::isfinite(lower_[entering]) && std::isfinite(upper_[entering])) {
                max_step = upper_[entering] - lower_[entering];
            }
            int leave_pos = -1;
            bool leave_to_upper = false;
            double best_pivot = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double w = work_w_[i];
                if (std::abs(w) < opts_.pivot_tol) continue;
                const int var = basic_vars_[static_cast<std::size_t>(i)];
                const double rate = -direction * w;
                const double xv = x_[var];
                double step = kInfinity;
                bool to_upper = false;
                if (phase1 && xv < lower_[var] - ftol) {
                    if (rate > 0.0) {
                        step = (lower_[var] - xv) / rate;
                        to_upper = false;
                    }
                } else if (phase1 && xv > upper_[var] + ftol) {
                    if (rate < 0.0) {
                        step = (xv - upper_[var]) / -rate;
                        to_upper = true;
                    }
                } else if (rate > 0.0) {
                    if (std::isfinite(upper_[var])) {
                        step = (upper_[var] - xv) / rate;
                        to_upper = true;
                    }
                } else {
                    if (std::isfinite(lower_[var])) {
                        step = (xv - lower_[var]) / -rate;
                        to_upper = false;
                    }
                }
                if (step == kInfinity) continue;
                step = std::max(step, 0.0);
                bool take = false;
                if (step < max_step - 1e-12) {
                    take = true;
                } else if (step < max_step + 1e-12 && leave_pos >= 0) {
                    // Tie: prefer the larger pivot, then the lower index
                    // (exact lowest index under Bland).
                    if (bland) {
                        take = var < basic_vars_[static_cast<std::size_t>(leave_pos)];
                    } else {
                        take = std::abs(w) > best_pivot;
                    }
                } else if (step <= max_step && leave_pos < 0) {
                    take = true;
                }
                if (take) {
                    max_step = std::min(step, max_step);
                    leave_pos = i;
                    leave_to_upper = to_upper;
                    best_pivot = std::abs(w);
                }
            }

            ++iterations_;

            if (max_step == kInfinity) {
                return phase1 ? SolveStatus::infeasible : SolveStatus::unbounded;
            }

            if (max_step > ftol) {
                degenerate_run_ = 0;
            } else {
                ++degenerate_run_;
            }

            if (leave_pos < 0) {
                // Bound flip: the entering variable traverses its whole range.
                for (int i = 0; i < m_; ++i) {
                    const double w = work_w_[i];
                    if (w != 0.0) {
                        x_[basic_vars_[static_cast<std::size_t>(i)]] -= direction * max_step * w;
                    }
                }
                x_[entering] += direction * max_step;
                status_[entering] =
                    direction > 0 ? VarStatus::at_upper : VarStatus::at_lower;
                continue;
            }

            // Pivot: update values, swap basis slot, record the eta column.
            for (int i = 0; i < m_; ++i) {
                const double w = work_w_[i];
                if (w != 0.0) {
                    x_[basic_vars_[static_cast<std::size_t>(i)]] -= direction * max_step * w;
                }
            }
            const int leaving = basic_vars_[static_cast<std::size_t>(leave_pos)];
            x_[leaving] = leave_to_upper ? upper_[leaving] : lower_[leaving];
            status_[leaving] = leave_to_upper ? VarStatus::at_upper : VarStatus::at_lower;
            x_[entering] += direction * max_step;
            status_[entering] = VarStatus::basic;
            basic_vars_[static_cast<std::size_t>(leave_pos)] = entering;
            basis_pos_[leaving] = -1;
            basis_pos_[entering] = leave_pos;

            Eta eta;
            eta.row = leave_pos;
            eta.pivot = work_w_[leave_pos];
            for (int i = 0; i < m_; ++i) {
                if (work_w_[i] != 0.0) eta.entries.emplace_back(i, work_w_[i]);
            }
            etas_.push_back(std::move(eta));

            if (static_cast<int>(etas_.size()) >= opts_.refactor_interval ||
                std::abs(work_w_[leave_pos]) < 1e-9) {
                if (!factorize()) {
                    cold_start();
                    if (!factorize()) throw std::runtime_error("simplex: singular basis");
                }
            }
        }
    }
};

inline Solution solve_lp(const LinearProgram& lp, SimplexOptions opts = {}) {
    SimplexSolver solver(lp, opts);
    return solver.solve();
}

} // namespace zincflex
