#include "tase/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "tase/errors.hpp"
#include "tase/stability.hpp"

namespace tase {

namespace {

Matrix ex41_A() {
    Matrix A(3, 3);
    A << -40, 30, 30,
         30, -71.0 / 2, -69.0 / 2,
         30, -69.0 / 2, -71.0 / 2;
    return A;
}

Matrix ex41_B() {
    Matrix B(3, 3);
    B << -74.0 / 3, 38.0 / 3, 38.0 / 3,
         38.0 / 3, -233.0 / 12, -215.0 / 12,
         38.0 / 3, -215.0 / 12, -233.0 / 12;
    return B;
}

SplitProblem affine_problem(std::string name, const Matrix& A, const Matrix& B, double forcing) {
    SplitProblem pr;
    pr.name = std::move(name);
    const Matrix J = A + B;
    const Vector g = Vector::Constant(3, forcing);
    pr.A = A;
    pr.u0 = Vector(3);
    pr.u0 << 200, 300, 100;
    pr.t0 = 0.0;
    pr.te = 30.0;
    pr.f = [J, g](double, const Vector& u) -> Vector { return J * u + g; };
    pr.jacobian = [J](double, const Vector&) { return J; };
    pr.linear_J = J;
    pr.linear_g = g;
    pr.exact = affine_exact(J, g, pr.u0, pr.t0);
    pr.params["forcing"] = forcing;
    return pr;
}

inline Eigen::Index wrap(Eigen::Index i, Eigen::Index M) { return ((i % M) + M) % M; }

// Applies the periodic pentadiagonal stencil c[-2..2] / scale.
Vector periodic_apply(const Vector& u, const double (&c)[5], double scale) {
    const Eigen::Index M = u.size();
    Vector out(M);
    for (Eigen::Index m = 0; m < M; ++m) {
        double s = 0.0;
        for (int d = -2; d <= 2; ++d) s += c[d + 2] * u(wrap(m + d, M));
        out(m) = s / scale;
    }
    return out;
}

constexpr double kLap4[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
constexpr double kDer4[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};

Matrix periodic_matrix(int M, const double (&c)[5], double scale) {
    Matrix L = Matrix::Zero(M, M);
    for (Eigen::Index m = 0; m < M; ++m)
        for (int d = -2; d <= 2; ++d) L(m, wrap(m + d, M)) += c[d + 2] / scale;
    return L;
}

}  // namespace

Matrix periodic_laplacian4(int M, double h) { return periodic_matrix(M, kLap4, h * h); }
Matrix periodic_derivative4(int M, double h) { return periodic_matrix(M, kDer4, h); }

std::function<Vector(double)> affine_exact(const Matrix& J, const Vector& g, const Vector& u0, double t0) {
    const Vector ustar = -J.partialPivLu().solve(g);
    const Vector d0 = u0 - ustar;
    if (is_symmetric(J)) {
        const SymmetricEigen e = eig_symmetric(J, true);
        const Vector c = e.vectors.transpose() * d0;
        return [e, c, ustar, t0](double t) -> Vector {
            const Vector decay = (e.values * (t - t0)).array().exp();
            return ustar + e.vectors * (decay.array() * c.array()).matrix();
        };
    }
    const EigenDecomposition e = eig_general(J, true);
    const CVector c = e.vectors.partialPivLu().solve(d0.cast<cplx>());
    return [e, c, ustar, t0](double t) -> Vector {
        const CVector decay = (e.values * (t - t0)).array().exp();
        return ustar + (e.vectors * (decay.array() * c.array()).matrix()).real();
    };
}

SplitProblem example41(double forcing, double bscale) {
    SplitProblem pr = affine_problem("ex41", ex41_A(), bscale * ex41_B(), forcing);
    pr.params["bscale"] = bscale;
    return pr;
}

SplitProblem example52(double forcing) {
    Matrix A = Matrix::Zero(3, 3);
    A.diagonal() << -10, -4, -30;
    Matrix B(3, 3);
    B << -3, 15, 0,
         -15, -3, 0,
         0, 0, -15;
    return affine_problem("ex52", A, B, forcing);
}

SplitProblem fisher_kolmogorov(int M, double D, double eps) {
    if (M < 3) throw DomainError("fisher_kolmogorov: M must be at least 3");
    const double h = 2.0 / M;
    const int n = M - 1;
    const double c = D / (h * h);
    SplitProblem pr;
    pr.name = "fk";
    pr.A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        pr.A(i, i) = -2.0 * c;
        if (i > 0) pr.A(i, i - 1) = c;
        if (i + 1 < n) pr.A(i, i + 1) = c;
    }
    pr.u0.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + (i + 1) * h;
        pr.u0(i) = 1.0 + 0.5 * std::exp(-x) * std::sin(M_PI * x);
    }
    pr.f = [c, eps, n](double, const Vector& u) -> Vector {
        Vector out(n);
        for (int i = 0; i < n; ++i) {
            const double left = i > 0 ? u(i - 1) : 1.0;
            const double right = i + 1 < n ? u(i + 1) : 1.0;
            out(i) = c * (left - 2.0 * u(i) + right) + eps * u(i) * (1.0 - u(i));
        }
        return out;
    };
    const Matrix A = pr.A;
    pr.jacobian = [A, eps](double, const Vector& u) -> Matrix {
        Matrix J = A;
        J.diagonal().array() += eps * (1.0 - 2.0 * u.array());
        return J;
    };
    pr.t0 = 0.0;
    pr.te = 20.0;
    pr.params = {{"M", M}, {"D", D}, {"eps", eps}, {"h", h}};
    return pr;
}

SplitProblem burgers(int M, double eps, double kappa) {
    if (M < 8) throw DomainError("burgers: M must be at least 8");
    if (!(kappa > 0.0)) throw DomainError("burgers: kappa must be positive");
    const double h = 2.0 * M_PI / M;
    const Matrix L1 = periodic_laplacian4(M, h);
    const Matrix L2 = periodic_derivative4(M, h);
    SplitProblem pr;
    pr.name = "burgers";
    pr.A = kappa * eps * L1;
    pr.A.diagonal().array() -= 2.0 * kappa;
    pr.u0.resize(M);
    for (int m = 0; m < M; ++m) pr.u0(m) = 0.5 * (1.0 - std::cos(m * h));
    pr.f = [eps, h](double, const Vector& u) -> Vector {
        const Vector sq = u.array().square();
        return eps * periodic_apply(u, kLap4, h * h) - 0.5 * periodic_apply(sq, kDer4, h);
    };
    pr.jacobian = [L1, L2, eps](double, const Vector& u) -> Matrix {
        return eps * L1 - L2 * u.asDiagonal();
    };
    pr.t0 = 0.0;
    pr.te = 4.0;
    pr.params = {{"M", M}, {"eps", eps}, {"kappa", kappa}, {"h", h}};
    return pr;
}

SplitProblem fitzhugh_nagumo(int M, double D, double a, double b, double tau, double kappa) {
    if (M < 8) throw DomainError("fitzhugh_nagumo: M must be at least 8");
    if (!(kappa > 0.0)) throw DomainError("fitzhugh_nagumo: kappa must be positive");
    const double h = 10.0 / M;
    const Matrix L1 = periodic_laplacian4(M, h);
    SplitProblem pr;
    pr.name = "fhn";
    pr.A = Matrix::Zero(2 * M, 2 * M);
    pr.A.topLeftCorner(M, M) = kappa * D * L1;
    pr.A.topLeftCorner(M, M).diagonal().array() -= kappa;
    pr.A.bottomRightCorner(M, M).diagonal().setConstant(-kappa * b / tau);
    auto phi = [](double s) { return 1.0 + std::exp(-10.0 * M_PI * std::sinh(s)); };
    pr.u0.resize(2 * M);
    for (int m = 0; m < M; ++m) {
        const double x = m * h;
        pr.u0(m) = -1.5 + 3.0 / phi(x - 1.5) - 3.0 / phi(x - 2.0);
        pr.u0(M + m) = -3.0 / (4.0 * phi(x - 1.5));
    }
    pr.f = [M, D, a, b, tau, h](double, const Vector& u) -> Vector {
        const auto v = u.head(M);
        const auto w = u.tail(M);
        Vector out(2 * M);
        out.head(M) = D * periodic_apply(v, kLap4, h * h) + v - v.array().cube().matrix() / 3.0 - w;
        out.tail(M) = (v.array() - a - b * w.array()).matrix() / tau;
        return out;
    };
    pr.jacobian = [L1, M, D, b, tau](double, const Vector& u) -> Matrix {
        Matrix J = Matrix::Zero(2 * M, 2 * M);
        J.topLeftCorner(M, M) = D * L1;
        J.topLeftCorner(M, M).diagonal().array() += 1.0 - u.head(M).array().square();
        J.topRightCorner(M, M).diagonal().setConstant(-1.0);
        J.bottomLeftCorner(M, M).diagonal().setConstant(1.0 / tau);
        J.bottomRightCorner(M, M).diagonal().setConstant(-b / tau);
        return J;
    };
    pr.t0 = 0.0;
    pr.te = 200.0;
    pr.params = {{"M", M}, {"D", D}, {"a", a}, {"b", b}, {"tau", tau}, {"kappa", kappa}, {"h", h}};
    return pr;
}

SplitProblem forced_scalar(double lambda, double u0) {
    SplitProblem pr;
    pr.name = "forced_scalar";
    pr.autonomous = false;
    pr.A = Matrix::Constant(1, 1, lambda);
    pr.u0 = Vector::Constant(1, u0);
    pr.f = [lambda](double t, const Vector& u) -> Vector { return lambda * u + Vector::Constant(1, std::cos(t)); };
    pr.jacobian = [lambda](double, const Vector&) { return Matrix::Constant(1, 1, lambda); };
    const double ca = -lambda / (1.0 + lambda * lambda);
    const double cb = 1.0 / (1.0 + lambda * lambda);
    pr.exact = [=](double t) -> Vector {
        return Vector::Constant(1, ca * std::cos(t) + cb * std::sin(t) + (u0 - ca) * std::exp(lambda * t));
    };
    pr.t0 = 0.0;
    pr.te = 1.0;
    pr.params = {{"lambda", lambda}, {"u0", u0}};
    return pr;
}

std::pair<double, double> fk_fov_bounds(const SplitProblem& fk, const NonlinearBounds& bounds) {
    if (bounds.upsilon_lb > bounds.upsilon_ub) throw DomainError("fk_fov_bounds: upsilon_lb > upsilon_ub");
    const double M = fk.params.at("M"), D = fk.params.at("D"), eps = fk.params.at("eps"), h = fk.params.at("h");
    const double l_min = 2.0 * D / (h * h) * (1.0 + std::cos((M - 1.0) * M_PI / M));
    const double l_max = 2.0 * D / (h * h) * (1.0 + std::cos(M_PI / M));
    const double b_lo = eps * (1.0 - 2.0 * bounds.upsilon_ub);
    const double b_hi = eps * (1.0 - 2.0 * bounds.upsilon_lb);
    const double lower = b_lo < 0.0 ? b_lo / l_min : b_lo / l_max;
    const double upper = b_hi > 0.0 ? b_hi / l_min : b_hi / l_max;
    return {lower, upper};
}

StabilityVerdict fk_stability_check(const SplitProblem& fk, const TaseOperator& op, double k,
                                    const NonlinearBounds& bounds) {
    const auto [lower, upper] = fk_fov_bounds(fk, bounds);
    double hat;
    if (std::isinf(k)) {
        hat = op.hat_t_limit();
    } else {
        const double lambda1 = -2.0 * fk.params.at("D") / std::pow(fk.params.at("h"), 2) *
                               (1.0 + std::cos(M_PI / fk.params.at("M")));
        hat = op.hat_t(k * lambda1);
    }
    const double left = 1.0 + rp_real_extent(op.p()) / hat;
    StabilityVerdict v;
    v.condition = "FK-bounds";
    v.p = op.p();
    v.k = k;
    v.q = 1.0;
    v.samples = 2;
    const double m1 = lower - left, m2 = 1.0 - upper;
    v.margin = std::min(m1, m2);
    v.holds = m1 >= 0.0 && m2 >= 0.0;
    if (!v.holds) v.witness = cplx(m1 < m2 ? -lower : -upper, 0.0);
    v.inconclusive = std::abs(v.margin) < kInconclusiveBand;
    return v;
}

double scalar_logistic_chi(const TaseOperator& op, double k, double lambda) {
    if (!(lambda < 0.0) || !(k > 0.0)) throw DomainError("scalar_logistic_chi: need lambda < 0 and k > 0");
    return -rp_real_extent(op.p()) / (k * op.scalar(k * lambda)) - lambda;
}

double safe_xi(const std::function<double(double)>& gprime, double lb, double ub) {
    if (lb > ub) throw DomainError("safe_xi: empty interval");
    if (lb == ub) return lb;
    const int n = 2000;
    double best_x = lb, best = gprime(lb);
    for (int i = 1; i <= n; ++i) {
        const double x = lb + (ub - lb) * i / n;
        const double g = gprime(x);
        if (g < best) {
            best = g;
            best_x = x;
        }
    }
    // golden-section refinement inside the neighbouring cells
    double a = std::max(lb, best_x - (ub - lb) / n), b = std::min(ub, best_x + (ub - lb) / n);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100 && b - a > 1e-15 * std::max(1.0, std::abs(best_x)); ++it) {
        const double x1 = b - r * (b - a), x2 = a + r * (b - a);
        if (gprime(x1) <= gprime(x2))
            b = x2;
        else
            a = x1;
    }
    const double mid = 0.5 * (a + b);
    return gprime(mid) < best ? mid : best_x;
}

std::vector<std::string> problem_names() { return {"ex41", "ex52", "fk", "burgers", "fhn", "forced_scalar"}; }

SplitProblem make_problem(const std::string& name, const std::map<std::string, double>& params) {
    std::set<std::string> allowed;
    if (name == "ex41") allowed = {"forcing", "bscale"};
    else if (name == "ex52") allowed = {"forcing"};
    else if (name == "fk") allowed = {"M", "D", "eps"};
    else if (name == "burgers") allowed = {"M", "eps", "kappa"};
    else if (name == "fhn") allowed = {"M", "D", "a", "b", "tau", "kappa"};
    else if (name == "forced_scalar") allowed = {"lambda", "u0"};
    else throw ConfigError("unknown problem '" + name + "'");
    allowed.insert("te");
    for (const auto& [key, value] : params) {
        if (!allowed.count(key)) throw ConfigError("problem " + name + " has no parameter '" + key + "'");
        if (!std::isfinite(value)) throw ConfigError("parameter " + key + " must be finite");
    }
    auto get = [&](const char* key, double def) {
        auto it = params.find(key);
        return it == params.end() ? def : it->second;
    };
    auto get_int = [&](const char* key, int def) {
        const double v = get(key, def);
        if (v != std::floor(v)) throw ConfigError(std::string("parameter ") + key + " must be an integer");
        return static_cast<int>(v);
    };
    SplitProblem pr;
    if (name == "ex41") pr = example41(get("forcing", 10.0), get("bscale", 1.0));
    else if (name == "ex52") pr = example52(get("forcing", 10.0));
    else if (name == "fk") pr = fisher_kolmogorov(get_int("M", 100), get("D", 2e-2), get("eps", 1e-2));
    else if (name == "burgers") pr = burgers(get_int("M", 1024), get("eps", 1e-2), get("kappa", 1.0));
    else if (name == "fhn")
        pr = fitzhugh_nagumo(get_int("M", 1024), get("D", 0.01), get("a", -0.7), get("b", 0.8), get("tau", 12.5),
                             get("kappa", 1.0));
    else pr = forced_scalar(get("lambda", -2.0), get("u0", 1.0));
    if (params.count("te")) {
        if (!(params.at("te") > pr.t0)) throw ConfigError("te must exceed t0");
        pr.te = params.at("te");
    }
    return pr;
}

}  // namespace tase
