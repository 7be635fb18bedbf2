#include "obmrr/factor_lp.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace obmrr {

namespace {

// one <= row of the grid LP in variables y = (Gamma, beta1, beta2)
struct GridRow {
    double a[3];
    double b;
    std::string label;
};

std::string point_label(const char* family, double p, double r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s @ p=%.4f r=%.4f", family, p, r);
    return buf;
}

// The residual families rearranged as a.y <= b.
std::vector<GridRow> build_rows(double gamma, long steps) {
    std::vector<GridRow> rows;
    rows.push_back({{1.0, -1.0, 0.0}, 0.0, "case3a"});
    rows.push_back({{0.0, -1.0, 1.0}, 0.0, "beta1>=beta2"});
    const double n = static_cast<double>(steps);
    for (long ip = 0; ip <= steps; ++ip) {
        const double p = static_cast<double>(ip) / n;
        for (long ir = 0; ir <= ip; ++ir) {
            const double r = static_cast<double>(ir) / n;
            const double u = p - r;
            const double f = std::min(1.0 - p, (1.0 - r) / 2.0);
            rows.push_back({{1.0, f, -(f + 1.5 * p - 1.0)}, 1.0 - p / 2.0,
                            point_label("case1", p, r)});
            rows.push_back({{1.0, f + r / 2.0, -(f + r / 2.0 - 1.0)}, 1.0,
                            point_label("case2", p, r)});
            rows.push_back({{1.0, -(r - f), -((1.0 + 2.0 * gamma) * u + p + f - 1.0)},
                            1.0 - p, point_label("case3b", p, r)});
            rows.push_back({{0.0, -r / 2.0, -((1.0 + 2.0 * gamma) * u - p + r / 2.0)}, 0.0,
                            point_label("superiority", p, r)});
        }
    }
    return rows;
}

}  // namespace

double min_residual_on_grid(double Gamma, double beta1, double beta2, double gamma,
                            long steps) {
    if (steps < 1) throw std::invalid_argument("grid steps must be >= 1");
    double worst = beta1 - Gamma;  // case3a, once
    const double n = static_cast<double>(steps);
    for (long ip = 0; ip <= steps; ++ip) {
        for (long ir = 0; ir <= ip; ++ir) {
            const ConstraintPoint<double> pt{static_cast<double>(ip) / n,
                                             static_cast<double>(ir) / n};
            const auto res = constraint_residuals(Gamma, beta1, beta2, gamma, pt);
            worst = std::min({worst, res.case1, res.case2, res.case3b, res.superiority});
        }
    }
    return worst;
}

FactorLpResult solve_factor_lp(double gamma, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw std::invalid_argument("grid_step must be in (0, 0.1]");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must be in [0, 1]");
    const long steps = std::lround(1.0 / grid_step);
    const auto rows = build_rows(gamma, steps);

    // The grid LP has thousands of rows but three variables, so solve its
    // dual: min b.lambda st A'lambda >= c, lambda >= 0, with c = (1,0,0).
    // The original (Gamma, beta1, beta2) come back as the duals of the
    // three dual rows.
    LpProblem dual;
    const std::size_t k = rows.size();
    dual.objective.resize(k);
    dual.rows.assign(3, std::vector<double>(k, 0.0));
    dual.rhs = {-1.0, 0.0, 0.0};
    for (std::size_t col = 0; col < k; ++col) {
        dual.objective[col] = -rows[col].b;
        for (int v = 0; v < 3; ++v) dual.rows[v][col] = -rows[col].a[v];
    }

    const LpSolution sol = solve_lp(dual);
    FactorLpResult out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.grid_step = grid_step;
    out.grid_points = (steps + 1) * (steps + 2) / 2;
    if (sol.status != LpStatus::Optimal) return out;

    out.gamma_star = -sol.value;  // strong duality: min b.lambda = grid optimum
    out.beta1 = sol.dual[1];
    out.beta2 = sol.dual[2];
    // sol.dual[0] is Gamma again; prefer the objective value, they agree to
    // solver tolerance
    for (std::size_t col = 0; col < k; ++col)
        if (sol.x[col] > 1e-7) out.tight.push_back(rows[col].label);

    out.min_residual_fine =
        min_residual_on_grid(out.gamma_star, out.beta1, out.beta2, gamma, steps * 10);
    return out;
}

}  // namespace obmrr
