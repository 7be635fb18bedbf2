#ifndef OBMRR_FACTOR_LP_HPP
#define OBMRR_FACTOR_LP_HPP

#include <string>
#include <vector>

#include "obmrr/accounting.hpp"
#include "obmrr/numeric.hpp"
#include "obmrr/simplex.hpp"

namespace obmrr {

/// One (p, r) evaluation point of the feasibility constraint families, with
/// u = p - r and phi = min{1-p, (1-r)/2} derived.
template <class Num>
struct ConstraintPoint {
    Num p, r;

    void validate() const {
        if (!(Num(0) <= r && r <= p && p <= Num(1)))
            throw std::domain_error("constraint point: need 0 <= r <= p <= 1");
    }
    Num u() const { return p - r; }
    Num phi_value() const { return phi(p, r); }
};

/// LHS - RHS for the five families, all >= 0 at a feasible parameter choice:
///   case1       randomized round containing the edge's offline vertex
///   case2       deterministic round containing it
///   case3a      beta1 >= Gamma (point-independent)
///   case3b      randomized round not containing it, previous occurrence
///               still inside the window
///   superiority twice the randomized score covers the deterministic score
template <class Num>
struct ResidualSet {
    Num case1, case2, case3a, case3b, superiority;

    Num min() const {
        Num m = case1;
        if (case2 < m) m = case2;
        if (case3a < m) m = case3a;
        if (case3b < m) m = case3b;
        if (superiority < m) m = superiority;
        return m;
    }
};

template <class Num>
ResidualSet<Num> constraint_residuals(const Num& Gamma, const Num& beta1, const Num& beta2,
                                      const Num& gamma, const ConstraintPoint<Num>& pt) {
    pt.validate();
    const Num p = pt.p, r = pt.r, u = pt.u(), f = pt.phi_value();
    const Num one(1);
    ResidualSet<Num> res;
    res.case1 = one - p / 2 + beta2 * (f + 3 * p / 2 - one) - beta1 * f - Gamma;
    res.case2 = one + beta2 * (f + r / 2 - one) - beta1 * (f + r / 2) - Gamma;
    res.case3a = beta1 - Gamma;
    res.case3b = one - p + beta2 * ((one + 2 * gamma) * u + p + f - one) +
                 beta1 * (r - f) - Gamma;
    res.superiority = beta1 * r / 2 + beta2 * ((one + 2 * gamma) * u - p + r / 2);
    return res;
}

/// Closed-form feasible point: Gamma = beta1 = (3+4g)/(6+6g), beta2 =
/// 1/(2+2g). At g = 1/32 this is (50/99, 50/99, 16/33).
template <class Num>
Params<Num> analytic_params(const Num& gamma) {
    if (!(gamma >= Num(0) && gamma <= Num(1)))
        throw std::domain_error("analytic_params: need gamma in [0, 1]");
    Params<Num> params;
    params.gamma = gamma;
    params.beta1 = (Num(3) + 4 * gamma) / (Num(6) + 6 * gamma);
    params.beta2 = Num(1) / (Num(2) + 2 * gamma);
    params.Gamma = params.beta1;
    return params;
}

struct FactorLpResult {
    double gamma_star = 0.0;  // optimal Gamma on the grid
    double beta1 = 0.0;
    double beta2 = 0.0;
    double grid_step = 0.0;
    long grid_points = 0;
    // verification sweep of the returned params at step/10
    double min_residual_fine = 0.0;
    std::vector<std::string> tight;  // active constraints at the optimum
    LpStatus status = LpStatus::Optimal;
    long iterations = 0;
};

/// Maximize Gamma over (Gamma, beta1, beta2) subject to all residual
/// families >= 0 at every grid point with the given step (plus the global
/// rows), solved through the shared simplex on the dualized program. The
/// returned params are re-verified on a 10x finer grid.
FactorLpResult solve_factor_lp(double gamma, double grid_step);

/// Minimum residual of fixed params over the (p, r) grid with `steps`
/// subdivisions of [0, 1]; sweeps all five families.
double min_residual_on_grid(double Gamma, double beta1, double beta2, double gamma,
                            long steps);

}  // namespace obmrr

#endif
