#pragma once

#include <string>
#include <vector>

#include "tase/problem.hpp"
#include "tase/tableau.hpp"
#include "tase/tase_operator.hpp"

namespace tase {

// Which matrix sits inside T_p(k .): the splitting matrix A or the Jacobian at (t0, u0).
enum class OperatorMatrix { A, J0 };

struct TaseMethod {
    TaseOperator op;
    ExplicitTableau tableau;
    OperatorMatrix matrix = OperatorMatrix::A;

    std::string name() const;
    // TRKp: standard weights plus the shipped s = p tableau.
    static TaseMethod trk(int p, OperatorMatrix matrix = OperatorMatrix::A);
};

struct RunStats {
    long f_evals = 0;
    long solves = 0;
    long factorizations = 0;
    double wall_seconds = 0.0;
};

enum class ExplicitPolicy { Auto, Never, Always };

struct IntegrateOptions {
    double overflow_guard = 1e100;
    long store_every = 1;        // keep every n-th state (0 keeps only the endpoints)
    ExplicitPolicy explicit_operator = ExplicitPolicy::Auto;
};

struct IntegrationRun {
    double k = 0.0;
    long steps = 0;              // completed steps
    std::vector<double> times;
    std::vector<Vector> states;
    Vector final_state;
    double final_time = 0.0;
    double max_norm = 0.0;       // max over completed steps of ||u_n||_inf
    bool blew_up = false;
    double blowup_time = 0.0;
    RunStats stats;
};

// One step of the TASE-RK scheme with the operator already prepared in `solver`.
Vector tase_rk_step(const SplitProblem& problem, const ExplicitTableau& tableau, TaseSolver& solver, double t,
                    const Vector& u, double k, long* f_evals = nullptr);
// Convenience form using problem.A.
Vector tase_rk_step(const SplitProblem& problem, const ExplicitTableau& tableau, const TaseOperator& op,
                    double t, const Vector& u, double k);

long step_count(double t0, double t_end, double k);

IntegrationRun integrate(const SplitProblem& problem, const TaseMethod& method, double k, double t_end,
                         const IntegrateOptions& opts = {});
IntegrationRun integrate_steps(const SplitProblem& problem, const TaseMethod& method, double k, long n_steps,
                               const IntegrateOptions& opts = {});

// Classical explicit RK with the given tableau and no operator (reference runs).
IntegrationRun integrate_explicit(const SplitProblem& problem, const ExplicitTableau& tableau, double k,
                                  double t_end, const IntegrateOptions& opts = {});

}  // namespace tase
