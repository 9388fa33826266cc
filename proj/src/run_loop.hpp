#pragma once

#include <chrono>

#include "tase/errors.hpp"
#include "tase/integrator.hpp"

namespace tase::detail {

template <class Stepper>
IntegrationRun run_loop(const SplitProblem& problem, double k, long n_steps, const IntegrateOptions& opts,
                        Stepper&& step) {
    IntegrationRun run;
    run.k = k;
    const auto start = std::chrono::steady_clock::now();
    Vector u = problem.u0;
    run.max_norm = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
    run.times.push_back(problem.t0);
    run.states.push_back(u);
    for (long n = 0; n < n_steps; ++n) {
        const double t = problem.t0 + static_cast<double>(n) * k;
        const double t_next = problem.t0 + static_cast<double>(n + 1) * k;
        Vector next;
        try {
            next = step(t, u);
        } catch (const NonFiniteState&) {
            run.blew_up = true;
            run.blowup_time = t_next;
            break;
        }
        const double nrm = next.size() ? next.cwiseAbs().maxCoeff() : 0.0;
        if (nrm > opts.overflow_guard) {
            run.blew_up = true;
            run.blowup_time = t_next;
            break;
        }
        u = std::move(next);
        run.max_norm = std::max(run.max_norm, nrm);
        run.steps = n + 1;
        const bool last = n + 1 == n_steps;
        if (last || (opts.store_every > 0 && (n + 1) % opts.store_every == 0)) {
            run.times.push_back(t_next);
            run.states.push_back(u);
        }
    }
    run.final_state = u;
    run.final_time = problem.t0 + static_cast<double>(run.steps) * k;
    if (run.times.back() != run.final_time) {
        run.times.push_back(run.final_time);
        run.states.push_back(u);
    }
    run.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}


}  // namespace tase::detail
