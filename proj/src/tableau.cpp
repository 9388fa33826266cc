#include "tase/tableau.hpp"

#include <cmath>

#include "tase/errors.hpp"

namespace tase {

void ExplicitTableau::validate() const {
    if (s < 1 || alpha.rows() != s || alpha.cols() != s || b.size() != s || c.size() != s)
        throw DomainError("tableau " + name + ": inconsistent dimensions");
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j)
            if (alpha(i, j) != 0.0) throw DomainError("tableau " + name + ": alpha must be strictly lower");
    if (std::abs(b.sum() - 1.0) > 1e-14) throw DomainError("tableau " + name + ": weights must sum to 1");
    for (int i = 0; i < s; ++i)
        if (std::abs(alpha.row(i).sum() - c(i)) > 1e-14)
            throw DomainError("tableau " + name + ": nodes must equal alpha row sums");
}

ExplicitTableau make_tableau(std::string name, const Matrix& alpha, const Vector& b) {
    ExplicitTableau t;
    t.s = static_cast<int>(b.size());
    t.alpha = alpha;
    t.b = b;
    t.c = alpha.rowwise().sum();
    t.name = std::move(name);
    t.validate();
    return t;
}

ExplicitTableau forward_euler() {
    return make_tableau("euler", Matrix::Zero(1, 1), Vector::Ones(1));
}

ExplicitTableau heun2() {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 0) = 1.0;
    Vector b(2);
    b << 0.5, 0.5;
    return make_tableau("heun2", a, b);
}

ExplicitTableau kutta3() {
    Matrix a = Matrix::Zero(3, 3);
    a(1, 0) = 0.5;
    a(2, 0) = -1.0;
    a(2, 1) = 2.0;
    Vector b(3);
    b << 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0;
    return make_tableau("kutta3", a, b);
}

ExplicitTableau classic_rk4() {
    Matrix a = Matrix::Zero(4, 4);
    a(1, 0) = 0.5;
    a(2, 1) = 0.5;
    a(3, 2) = 1.0;
    Vector b(4);
    b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
    return make_tableau("rk4", a, b);
}

ExplicitTableau tableau_for_order(int p) {
    switch (p) {
        case 1: return forward_euler();
        case 2: return heun2();
        case 3: return kutta3();
        case 4: return classic_rk4();
        default: throw DomainError("no shipped tableau for order " + std::to_string(p));
    }
}

}  // namespace tase
