#include "obmrr/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace obmrr {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    std::size_t m, n, art_begin, cols;  // cols excludes the rhs cell
    std::vector<std::vector<double>> t; // m rows, cols + 1 entries each
    std::vector<double> z;              // reduced-cost row, cols + 1 entries
    std::vector<std::size_t> basis;     // per row
    long iterations = 0;

    double& rhs(std::size_t r) { return t[r][cols]; }

    void pivot(std::size_t r, std::size_t c) {
        const double inv = 1.0 / t[r][c];
        for (auto& v : t[r]) v *= inv;
        t[r][c] = 1.0;  // squash roundoff on the pivot itself
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || t[i][c] == 0.0) continue;
            const double f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
            t[i][c] = 0.0;
        }
        if (z[c] != 0.0) {
            const double f = z[c];
            for (std::size_t j = 0; j <= cols; ++j) z[j] -= f * t[r][j];
            z[c] = 0.0;
        }
        basis[r] = c;
        ++iterations;
    }

    // Bland: smallest eligible entering index, leaving row by min ratio with
    // ties broken on the smallest basis index.
    LpStatus iterate(std::size_t allowed_cols, long max_iterations) {
        for (;;) {
            std::size_t enter = allowed_cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (z[j] > kEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed_cols) return LpStatus::Optimal;

            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r) {
                if (t[r][enter] <= kEps) continue;
                const double ratio = rhs(r) / t[r][enter];
                if (ratio < best - kEps ||
                    (ratio < best + kEps && (leave == m || basis[r] < basis[leave]))) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave == m) return LpStatus::Unbounded;
            pivot(leave, enter);
            if (iterations >= max_iterations) return LpStatus::IterLimit;
        }
    }

    // z[j] = c[j] - c_B . column(j) for the extended cost vector c
    void rebuild_z(const std::vector<double>& c_ext) {
        z.assign(cols + 1, 0.0);
        for (std::size_t j = 0; j <= cols; ++j) {
            double v = j < c_ext.size() ? c_ext[j] : 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                const double cb = basis[r] < c_ext.size() ? c_ext[basis[r]] : 0.0;
                if (cb != 0.0) v -= cb * t[r][j];
            }
            z[j] = v;
        }
        z[cols] = 0.0;
        // recompute the rhs cell of z as minus the current objective value
        for (std::size_t r = 0; r < m; ++r) {
            const double cb = basis[r] < c_ext.size() ? c_ext[basis[r]] : 0.0;
            if (cb != 0.0) z[cols] -= cb * rhs(r);
        }
    }
};

}  // namespace

void LpProblem::validate() const {
    if (rows.size() != rhs.size())
        throw std::invalid_argument("lp: row/rhs count mismatch");
    for (const auto& row : rows)
        if (row.size() != objective.size())
            throw std::invalid_argument("lp: row width does not match variable count");
    for (double v : objective)
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
    for (double v : rhs)
        if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite rhs");
    for (const auto& row : rows)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite coefficient");
}

LpSolution solve_lp(const LpProblem& problem, long max_iterations) {
    problem.validate();
    const std::size_t m = problem.num_rows();
    const std::size_t n = problem.num_vars();

    // columns: structural | slack per row | artificials for negative-rhs rows
    std::vector<std::size_t> art_rows;
    for (std::size_t r = 0; r < m; ++r)
        if (problem.rhs[r] < 0.0) art_rows.push_back(r);

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.art_begin = n + m;
    tb.cols = n + m + art_rows.size();
    tb.t.assign(m, std::vector<double>(tb.cols + 1, 0.0));
    tb.basis.resize(m);

    for (std::size_t r = 0; r < m; ++r) {
        const double sign = problem.rhs[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tb.t[r][j] = sign * problem.rows[r][j];
        tb.t[r][n + r] = sign;
        tb.t[r][tb.cols] = sign * problem.rhs[r];
        tb.basis[r] = n + r;
    }
    for (std::size_t k = 0; k < art_rows.size(); ++k) {
        tb.t[art_rows[k]][tb.art_begin + k] = 1.0;
        tb.basis[art_rows[k]] = tb.art_begin + k;
    }

    LpSolution sol;

    if (!art_rows.empty()) {
        // phase 1: maximize minus the sum of artificials
        std::vector<double> c1(tb.cols, 0.0);
        for (std::size_t k = 0; k < art_rows.size(); ++k) c1[tb.art_begin + k] = -1.0;
        tb.rebuild_z(c1);
        const LpStatus st = tb.iterate(tb.cols, max_iterations);
        if (st == LpStatus::IterLimit) {
            sol.status = LpStatus::IterLimit;
            sol.iterations = tb.iterations;
            return sol;
        }
        double infeas = 0.0;
        for (std::size_t r = 0; r < m; ++r)
            if (tb.basis[r] >= tb.art_begin) infeas += tb.rhs(r);
        if (infeas > kEps * (1.0 + std::fabs(infeas))) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = tb.iterations;
            return sol;
        }
        // drive leftover artificials out of the basis; an all-zero row is
        // redundant and stays inert
        for (std::size_t r = 0; r < m; ++r) {
            if (tb.basis[r] < tb.art_begin) continue;
            for (std::size_t j = 0; j < tb.art_begin; ++j) {
                if (std::fabs(tb.t[r][j]) > kEps) {
                    tb.pivot(r, j);
                    break;
                }
            }
        }
    }

    // phase 2 over structural and slack columns only
    std::vector<double> c2(problem.objective);
    c2.resize(tb.cols, 0.0);
    tb.rebuild_z(c2);
    const LpStatus st = tb.iterate(tb.art_begin, max_iterations);

    sol.iterations = tb.iterations;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (tb.basis[r] < n) sol.x[tb.basis[r]] = tb.rhs(r);
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
    sol.dual.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) sol.dual[r] = -tb.z[n + r];
    sol.status = st;
    return sol;
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterLimit: return "iteration-limit";
    }
    return "unknown";
}

}  // namespace obmrr
