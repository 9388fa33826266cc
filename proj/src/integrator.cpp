#include "tase/integrator.hpp"

#include <chrono>
#include <cmath>

#include "tase/errors.hpp"
#include "run_loop.hpp"

namespace tase {

std::string TaseMethod::name() const {
    std::string n = "trk" + std::to_string(op.p());
    if (matrix == OperatorMatrix::J0) n += "-J";
    return n;
}

TaseMethod TaseMethod::trk(int p, OperatorMatrix matrix) {
    return TaseMethod{TaseOperator::standard(p), tableau_for_order(p), matrix};
}

Vector tase_rk_step(const SplitProblem& problem, const ExplicitTableau& tableau, TaseSolver& solver, double t,
                    const Vector& u, double k, long* f_evals) {
    const int s = tableau.s;
    std::vector<Vector> K(s);
    for (int i = 0; i < s; ++i) {
        Vector U = u;
        for (int j = 0; j < i; ++j)
            if (tableau.alpha(i, j) != 0.0) U.noalias() += (k * tableau.alpha(i, j)) * K[j];
        if (!U.allFinite()) throw NonFiniteState("non-finite stage value at t = " + std::to_string(t));
        K[i] = solver.apply(problem.f(t + tableau.c(i) * k, U));
        if (f_evals) ++*f_evals;
    }
    Vector next = u;
    for (int j = 0; j < s; ++j)
        if (tableau.b(j) != 0.0) next.noalias() += (k * tableau.b(j)) * K[j];
    if (!next.allFinite()) throw NonFiniteState("non-finite state at t = " + std::to_string(t + k));
    return next;
}

Vector tase_rk_step(const SplitProblem& problem, const ExplicitTableau& tableau, const TaseOperator& op,
                    double t, const Vector& u, double k) {
    TaseSolver solver(op);
    solver.prepare(problem.A, k);
    return tase_rk_step(problem, tableau, solver, t, u, k);
}

long step_count(double t0, double t_end, double k) {
    if (!(k > 0.0)) throw DomainError("step size must be positive");
    if (t_end < t0) throw DomainError("t_end must not precede t0");
    return std::lround((t_end - t0) / k);
}

using Clock = std::chrono::steady_clock;

IntegrationRun integrate_steps(const SplitProblem& problem, const TaseMethod& method, double k, long n_steps,
                               const IntegrateOptions& opts) {
    if (!(k > 0.0)) throw DomainError("step size must be positive");
    if (method.tableau.s != method.op.p())
        throw DomainError("tableau stage count must equal the operator order");
    const auto start = Clock::now();
    TaseSolver solver(method.op);
    const Matrix M = method.matrix == OperatorMatrix::A ? problem.A : problem.J0();
    solver.prepare(M, k);
    const Eigen::Index n = M.rows();
    bool use_explicit = opts.explicit_operator == ExplicitPolicy::Always;
    if (opts.explicit_operator == ExplicitPolicy::Auto)
        use_explicit = n >= 200 && n_steps * method.tableau.s > 2 * n;
    solver.set_explicit(use_explicit);
    long f_evals = 0;
    IntegrationRun run = detail::run_loop(problem, k, n_steps, opts, [&](double t, const Vector& u) {
        return tase_rk_step(problem, method.tableau, solver, t, u, k, &f_evals);
    });
    run.stats.f_evals = f_evals;
    run.stats.solves = solver.solves();
    run.stats.factorizations = solver.factorizations();
    run.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return run;
}

IntegrationRun integrate(const SplitProblem& problem, const TaseMethod& method, double k, double t_end,
                         const IntegrateOptions& opts) {
    return integrate_steps(problem, method, k, step_count(problem.t0, t_end, k), opts);
}

IntegrationRun integrate_explicit(const SplitProblem& problem, const ExplicitTableau& tableau, double k,
                                  double t_end, const IntegrateOptions& opts) {
    const auto start = Clock::now();
    const long n_steps = step_count(problem.t0, t_end, k);
    long f_evals = 0;
    const int s = tableau.s;
    IntegrationRun run = detail::run_loop(problem, k, n_steps, opts, [&](double t, const Vector& u) {
        std::vector<Vector> K(s);
        for (int i = 0; i < s; ++i) {
            Vector U = u;
            for (int j = 0; j < i; ++j)
                if (tableau.alpha(i, j) != 0.0) U.noalias() += (k * tableau.alpha(i, j)) * K[j];
            K[i] = problem.f(t + tableau.c(i) * k, U);
            ++f_evals;
        }
        Vector next = u;
        for (int j = 0; j < s; ++j) next.noalias() += (k * tableau.b(j)) * K[j];
        if (!next.allFinite()) throw NonFiniteState("non-finite state");
        return next;
    });
    run.stats.f_evals = f_evals;
    run.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return run;
}

}  // namespace tase
