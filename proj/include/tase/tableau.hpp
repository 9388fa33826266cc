#pragma once

#include <string>

#include "tase/dense.hpp"

namespace tase {

struct ExplicitTableau {
    int s = 0;
    Matrix alpha;   // strictly lower triangular
    Vector b;
    Vector c;       // row sums of alpha
    std::string name;

    // Throws DomainError on shape or consistency violations.
    void validate() const;
};

ExplicitTableau make_tableau(std::string name, const Matrix& alpha, const Vector& b);

ExplicitTableau forward_euler();
ExplicitTableau heun2();
ExplicitTableau kutta3();
ExplicitTableau classic_rk4();

// s = p tableau shipped for order p in 1..4.
ExplicitTableau tableau_for_order(int p);

}  // namespace tase
