#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "tase/dense.hpp"

namespace tase {

struct SplitProblem {
    std::string name;
    std::function<Vector(double t, const Vector& u)> f;
    std::function<Matrix(double t, const Vector& u)> jacobian;
    Matrix A;
    Vector u0;
    double t0 = 0.0;
    double te = 1.0;
    std::map<std::string, double> params;
    bool autonomous = true;

    // Set for u' = J u + g with constant J and g.
    std::optional<Matrix> linear_J;
    std::optional<Vector> linear_g;
    // Closed-form solution when one is known.
    std::function<Vector(double t)> exact;

    Eigen::Index dim() const { return u0.size(); }
    Matrix J0() const { return jacobian(t0, u0); }
    // B = J(t0, u0) - A
    Matrix B() const { return J0() - A; }
};

}  // namespace tase
