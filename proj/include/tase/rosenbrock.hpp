#pragma once

#include <string>

#include "tase/integrator.hpp"
#include "tase/problem.hpp"

namespace tase {

// (I - gamma_ii k J) k_i = k f(t + a_i k, u + sum_j alpha_ij k_j) + k J sum_j gamma_ij k_j + gamma_i k^2 f_t
// u_{n+1} = u_n + sum_i b_i k_i
struct RowTableau {
    int s = 0;
    Matrix alpha;   // strictly lower
    Matrix gamma;   // lower, positive diagonal
    Vector b;
    std::string name;

    void validate() const;
};

RowTableau ros2();
RowTableau linear_implicit_euler();
RowTableau load_row_tableau(const std::string& path);
RowTableau parse_row_tableau(const std::string& json_text);

enum class JacobianMode { Exact, Frozen };

Vector row_step(const SplitProblem& problem, const RowTableau& tableau, double t, const Vector& u, double k,
                JacobianMode mode = JacobianMode::Exact);

IntegrationRun row_integrate(const SplitProblem& problem, const RowTableau& tableau, double k, double t_end,
                             JacobianMode mode = JacobianMode::Exact, const IntegrateOptions& opts = {});

}  // namespace tase
