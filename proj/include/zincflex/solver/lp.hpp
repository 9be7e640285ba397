#pragma once

// Solver-agnostic problem containers: a bounded linear program in row form,
// its mixed-binary extension, and the solution record both solvers return.
// Objectives are always maximized.

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zincflex {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense : char { le = 'L', eq = 'E', ge = 'G' };

struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, double>> terms;
        RowSense sense = RowSense::le;
        double rhs = 0.0;
    };

    int num_vars = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> objective;
    std::vector<Row> rows;
    std::vector<std::string> var_names; // optional, parallel to variables when used

    int add_variable(double lo, double up, double obj, std::string name = {}) {
        lower.push_back(lo);
        upper.push_back(up);
        objective.push_back(obj);
        if (!name.empty() || !var_names.empty()) {
            var_names.resize(static_cast<std::size_t>(num_vars), "");
            var_names.push_back(std::move(name));
        }
        return num_vars++;
    }

    int add_row(RowSense sense, double rhs, std::vector<std::pair<int, double>> terms) {
        rows.push_back(Row{std::move(terms), sense, rhs});
        return static_cast<int>(rows.size()) - 1;
    }

    std::string name_of(int var) const {
        if (var < static_cast<int>(var_names.size()) && !var_names[static_cast<std::size_t>(var)].empty()) {
            return var_names[static_cast<std::size_t>(var)];
        }
        return "x" + std::to_string(var);
    }

    void validate() const {
        if (num_vars <= 0) {
            throw std::domain_error("LinearProgram: no variables declared");
        }
        if (lower.size() != static_cast<std::size_t>(num_vars) ||
            upper.size() != static_cast<std::size_t>(num_vars) ||
            objective.size() != static_cast<std::size_t>(num_vars)) {
            throw std::domain_error("LinearProgram: bound/objective arrays out of sync");
        }
        for (int j = 0; j < num_vars; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (std::isnan(lower[ju]) || std::isnan(upper[ju]) || lower[ju] > upper[ju]) {
                throw std::domain_error("LinearProgram: invalid bounds on " + name_of(j));
            }
            if (!std::isfinite(objective[ju])) {
                throw std::domain_error("LinearProgram: non-finite objective on " + name_of(j));
            }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!std::isfinite(rows[i].rhs)) {
                throw std::domain_error("LinearProgram: non-finite rhs in row " +
                                        std::to_string(i));
            }
            for (const auto& [var, coef] : rows[i].terms) {
                if (var < 0 || var >= num_vars) {
                    throw std::domain_error("LinearProgram: row " + std::to_string(i) +
                                            " references undeclared variable " +
                                            std::to_string(var));
                }
                if (!std::isfinite(coef)) {
                    throw std::domain_error("LinearProgram: non-finite coefficient in row " +
                                            std::to_string(i));
                }
            }
        }
    }
};

struct MilpProblem {
    LinearProgram lp;
    std::vector<int> binaries; // variable indices restricted to {0,1}

    void validate() const {
        lp.validate();
        for (int b : binaries) {
            if (b < 0 || b >= lp.num_vars) {
                throw std::domain_error("MilpProblem: binary index " + std::to_string(b) +
                                        " out of range");
            }
        }
    }
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    double mip_gap = 0.0; // proven relative gap, MILP only
    std::int64_t iterations = 0;
    std::int64_t nodes = 0;

    bool optimal() const { return status == SolveStatus::optimal; }
};

// Largest absolute constraint/bound violation of a candidate point. Used by
// tests and by the incumbent carry-over in sweeps.
inline double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        worst = std::max(worst, lp.lower[ju] - x[ju]);
        worst = std::max(worst, x[ju] - lp.upper[ju]);
    }
    for (const auto& row : lp.rows) {
        double lhs = 0.0;
        for (const auto& [var, coef] : row.terms) lhs += coef * x[static_cast<std::size_t>(var)];
        switch (row.sense) {
            case RowSense::le: worst = std::max(worst, lhs - row.rhs); break;
            case RowSense::ge: worst = std::max(worst, row.rhs - lhs); break;
            case RowSense::eq: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
        }
    }
    return worst;
}

inline double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
    double obj = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) {
        obj += lp.objective[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    return obj;
}

namespace detail {

inline void append_terms(std::ostringstream& os, const LinearProgram& lp,
                         const std::vector<std::pair<int, double>>& terms) {
    for (const auto& [var, coef] : terms) {
        os << (coef >= 0.0 ? " +" : " -");
        os << std::abs(coef) << ' ' << lp.name_of(var);
    }
}

} // namespace detail

// Plain-text dump in the conventional LP file layout; see docs/lp_format.md.
inline std::string to_lp_text(const LinearProgram& lp, const std::vector<int>& binaries = {}) {
    std::ostringstream os;
    os.precision(17);
    os << "Maximize\n obj:";
    std::vector<std::pair<int, double>> obj_terms;
    for (int j = 0; j < lp.num_vars; ++j) {
        if (lp.objective[static_cast<std::size_t>(j)] != 0.0) {
            obj_terms.emplace_back(j, lp.objective[static_cast<std::size_t>(j)]);
        }
    }
    detail::append_terms(os, lp, obj_terms);
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        os << " r" << i << ':';
        detail::append_terms(os, lp, lp.rows[i].terms);
        switch (lp.rows[i].sense) {
            case RowSense::le: os << " <= "; break;
            case RowSense::ge: os << " >= "; break;
            case RowSense::eq: os << " = "; break;
        }
        os << lp.rows[i].rhs << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < lp.num_vars; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const double lo = lp.lower[ju];
        const double up = lp.upper[ju];
        os << ' ';
        if (lo == -kInfinity && up == kInfinity) {
            os << lp.name_of(j) << " free\n";
            continue;
        }
        if (lo != -kInfinity) {
            os << lo << " <= ";
        }
        os << lp.name_of(j);
        if (up != kInfinity) {
            os << " <= " << up;
        }
        os << '\n';
    }
    if (!binaries.empty()) {
        os << "Binaries\n";
        for (int b : binaries) os << ' ' << lp.name_of(b) << '\n';
    }
    os << "End\n";
    return os.str();
}

inline std::string to_lp_text(const MilpProblem& p) { return to_lp_text(p.lp, p.binaries); }

} // namespace zincflex
