#ifndef OBMRR_SIMPLEX_HPP
#define OBMRR_SIMPLEX_HPP

#include <string>
#include <vector>

namespace obmrr {

/// maximize c.x  subject to  A x <= b, x >= 0.
struct LpProblem {
    std::vector<double> objective;           // c, one per variable
    std::vector<std::vector<double>> rows;   // A, sense <=
    std::vector<double> rhs;                 // b

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
    void validate() const;  // throws std::invalid_argument on shape mismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> x;     // primal, one per variable
    std::vector<double> dual;  // one per row, >= 0
    long iterations = 0;
};

/// Dense two-phase primal simplex with Bland's rule, which cannot cycle.
/// Duals are read off the optimal tableau and satisfy complementary
/// slackness to ~1e-9 for well-scaled inputs. The iteration cap is a
/// safety net; on IterLimit the reported value is the current basic
/// solution's objective, not a certified bound.
LpSolution solve_lp(const LpProblem& problem, long max_iterations = 500000);

}  // namespace obmrr

#endif
