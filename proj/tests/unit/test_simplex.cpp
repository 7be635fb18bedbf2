#include <doctest.h>

#include <cmath>
#include <obmrr/rng.hpp>
#include <obmrr/simplex.hpp>
#include <vector>

using namespace obmrr;

namespace {

// Brute-force oracle for tiny LPs: enumerate every choice of n active
// hyperplanes among {rows, x_i = 0}, solve by Gaussian elimination, keep the
// best feasible point. Valid because a feasible bounded LP with x >= 0
// attains its optimum at a vertex.
double brute_force_lp(const LpProblem& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    std::vector<std::vector<double>> planes;  // coeffs then rhs
    for (std::size_t r = 0; r < m; ++r) {
        auto row = lp.rows[r];
        row.push_back(lp.rhs[r]);
        planes.push_back(row);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> row(n + 1, 0.0);
        row[j] = 1.0;
        planes.push_back(row);
    }

    double best = -1.0;  // "no feasible vertex found"
    bool found = false;
    std::vector<std::size_t> pick(n);
    const std::size_t total = planes.size();

    auto feasible = [&](const std::vector<double>& x) {
        for (std::size_t j = 0; j < n; ++j)
            if (x[j] < -1e-7) return false;
        for (std::size_t r = 0; r < m; ++r) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[r][j] * x[j];
            if (lhs > lp.rhs[r] + 1e-7) return false;
        }
        return true;
    };

    // iterate over all n-subsets of the planes
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    for (;;) {
        // solve the n x n system
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
        for (std::size_t i = 0; i < n; ++i) a[i] = planes[idx[i]];
        bool singular = false;
        for (std::size_t col = 0; col < n && !singular; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
            if (std::fabs(a[piv][col]) < 1e-9) {
                singular = true;
                break;
            }
            std::swap(a[col], a[piv]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = a[r][col] / a[col][col];
                for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
            }
        }
        if (!singular) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
            if (feasible(x)) {
                double val = 0.0;
                for (std::size_t j = 0; j < n; ++j) val += lp.objective[j] * x[j];
                if (!found || val > best) best = val;
                found = true;
            }
        }
        // next combination
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == total - n + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    REQUIRE(found);
    return best;
}

}  // namespace

TEST_CASE("solve_lp on the one-variable box") {
    LpProblem lp;
    lp.objective = {1.0};
    lp.rows = {{1.0}};
    lp.rhs = {1.0};
    const auto sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(1.0));
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.dual[0] == doctest::Approx(1.0));
}

TEST_CASE("solve_lp recovers duals with strong duality") {
    LpProblem lp;
    lp.objective = {3.0, 2.0};
    lp.rows = {{1.0, 1.0}, {1.0, 0.0}};
    lp.rhs = {4.0, 2.0};
    const auto sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(10.0));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(2.0));
    // y1 = 2, y2 = 1 is the unique dual optimum
    CHECK(sol.dual[0] == doctest::Approx(2.0));
    CHECK(sol.dual[1] == doctest::Approx(1.0));
    const double dual_value = sol.dual[0] * 4.0 + sol.dual[1] * 2.0;
    CHECK(dual_value == doctest::Approx(sol.value));
}

TEST_CASE("solve_lp detects infeasibility and unboundedness") {
    LpProblem infeasible;
    infeasible.objective = {1.0};
    infeasible.rows = {{1.0}};
    infeasible.rhs = {-1.0};  // x <= -1 with x >= 0
    CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

    LpProblem unbounded;
    unbounded.objective = {1.0, 0.0};
    unbounded.rows = {{1.0, -1.0}};
    unbounded.rhs = {1.0};
    CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("solve_lp terminates on the classic cycling example") {
    // Beale's degenerate LP; Bland's rule must terminate
    LpProblem lp;
    lp.objective = {0.75, -150.0, 0.02, -6.0};
    lp.rows = {{0.25, -60.0, -1.0 / 25.0, 9.0},
               {0.5, -90.0, -1.0 / 50.0, 3.0},
               {0.0, 0.0, 1.0, 0.0}};
    lp.rhs = {0.0, 0.0, 1.0};
    const auto sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("solve_lp needs phase 1 for negative rhs") {
    // x >= 1 encoded as -x <= -1, maximize -x: optimum at x = 1
    LpProblem lp;
    lp.objective = {-1.0};
    lp.rows = {{-1.0}};
    lp.rhs = {-1.0};
    const auto sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(-1.0));
    CHECK(sol.x[0] == doctest::Approx(1.0));
}

TEST_CASE("solve_lp agrees with the brute-force vertex oracle on random LPs") {
    Rng rng(99);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        LpProblem lp;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 2);  // 2..3
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform01() * 4);  // 2..5
        lp.objective.resize(n);
        for (auto& c : lp.objective) c = std::floor(rng.uniform01() * 7.0) - 3.0;
        lp.rows.assign(m, std::vector<double>(n));
        lp.rhs.resize(m);
        for (std::size_t r = 0; r < m; ++r) {
            for (auto& a : lp.rows[r]) a = std::floor(rng.uniform01() * 7.0) - 3.0;
            lp.rhs[r] = std::floor(rng.uniform01() * 4.0);  // 0..3: origin feasible
        }
        const auto sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal) continue;  // unbounded cases skipped
        ++solved;
        CHECK(sol.value == doctest::Approx(brute_force_lp(lp)).epsilon(1e-6));
        // primal feasibility and nonnegative duals
        for (std::size_t r = 0; r < m; ++r) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[r][j] * sol.x[j];
            CHECK(lhs <= lp.rhs[r] + 1e-7);
            CHECK(sol.dual[r] >= -1e-9);
        }
        // complementary slackness: y_i (b_i - A_i x) = 0
        for (std::size_t r = 0; r < m; ++r) {
            double slack = lp.rhs[r];
            for (std::size_t j = 0; j < n; ++j) slack -= lp.rows[r][j] * sol.x[j];
            CHECK(std::fabs(sol.dual[r] * slack) < 1e-6);
        }
        // strong duality
        double dual_value = 0.0;
        for (std::size_t r = 0; r < m; ++r) dual_value += sol.dual[r] * lp.rhs[r];
        CHECK(dual_value == doctest::Approx(sol.value).epsilon(1e-6));
    }
    CHECK(solved > 100);  // most random instances are bounded
}
