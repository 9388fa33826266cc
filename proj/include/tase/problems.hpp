#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tase/problem.hpp"
#include "tase/splitting.hpp"
#include "tase/tase_operator.hpp"

namespace tase {

// u' = (A + B) u + forcing * 1 with the simultaneously diagonalizable pair; B is scaled by bscale.
SplitProblem example41(double forcing = 10.0, double bscale = 1.0);
// Same forcing and initial state with a non-commuting pair.
SplitProblem example52(double forcing = 10.0);
SplitProblem fisher_kolmogorov(int M = 100, double D = 2e-2, double eps = 1e-2);
SplitProblem burgers(int M = 1024, double eps = 1e-2, double kappa = 1.0);
SplitProblem fitzhugh_nagumo(int M = 1024, double D = 0.01, double a = -0.7, double b = 0.8, double tau = 12.5,
                             double kappa = 1.0);
// u' = lambda u + cos t, A = lambda, closed-form solution attached.
SplitProblem forced_scalar(double lambda = -2.0, double u0 = 1.0);

// Periodic fourth-order stencils on M points with spacing h.
Matrix periodic_laplacian4(int M, double h);
Matrix periodic_derivative4(int M, double h);

// Affine constant-coefficient solution u* + exp(J t)(u0 - u*), u* = -J^{-1} g.
std::function<Vector(double)> affine_exact(const Matrix& J, const Vector& g, const Vector& u0, double t0);

struct NonlinearBounds {
    double upsilon_lb = 0.0;
    double upsilon_ub = 1.5;
};

// Real interval containing W_1(-A, B(xi)) for the FK splitting with xi in the bounds.
std::pair<double, double> fk_fov_bounds(const SplitProblem& fk, const NonlinearBounds& bounds);
// Both inequalities of the FK criterion; k = inf gives the unconditional check.
StabilityVerdict fk_stability_check(const SplitProblem& fk, const TaseOperator& op, double k,
                                    const NonlinearBounds& bounds);

// chi(p, k, lambda) = -c_p / (k T_p(k lambda)) - lambda
double scalar_logistic_chi(const TaseOperator& op, double k, double lambda);
// Minimizer of g' over [lb, ub].
double safe_xi(const std::function<double(double)>& gprime, double lb, double ub);

std::vector<std::string> problem_names();
// Registry: ex41, ex52, fk, burgers, fhn, forced_scalar. Unknown parameter keys raise ConfigError.
SplitProblem make_problem(const std::string& name, const std::map<std::string, double>& params = {});

}  // namespace tase
