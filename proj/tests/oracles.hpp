#pragma once

// Independent reference computations used by the tests. None of these call into the library's
// numerical routines beyond plain Eigen arithmetic.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

// beta from the moment conditions sum_j beta_j omega_j^m = [m == 0], m = 0..p-1
inline std::vector<double> beta_vandermonde(const std::vector<double>& omega) {
    const int p = static_cast<int>(omega.size());
    Eigen::MatrixXd V(p, p);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
    rhs(0) = 1.0;
    for (int m = 0; m < p; ++m)
        for (int j = 0; j < p; ++j) V(m, j) = std::pow(omega[j], m);
    const Eigen::VectorXd b = V.fullPivLu().solve(rhs);
    return {b.data(), b.data() + p};
}

inline cplx tase_scalar(const std::vector<double>& omega, cplx z) {
    const auto beta = beta_vandermonde(omega);
    cplx s = 0.0;
    for (std::size_t j = 0; j < omega.size(); ++j) s += beta[j] / (1.0 - omega[j] * z);
    return s;
}

// One step of the s-stage TASE-RK scheme on u' = (lambda + gamma) u with operator T(k lambda),
// carried out stage by stage.
inline cplx mode_factor(const Eigen::MatrixXd& alpha, const Eigen::VectorXd& b, const std::vector<double>& omega,
                        double k, double lambda, cplx gamma) {
    const int s = static_cast<int>(b.size());
    const cplx T = tase_scalar(omega, k * lambda);
    std::vector<cplx> K(s);
    for (int i = 0; i < s; ++i) {
        cplx U = 1.0;
        for (int j = 0; j < i; ++j) U += k * alpha(i, j) * K[j];
        K[i] = T * (lambda + gamma) * U;
    }
    cplx u = 1.0;
    for (int j = 0; j < s; ++j) u += k * b(j) * K[j];
    return u;
}

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

inline cplx taylor_exp(int p, cplx z) {
    cplx s = 0.0, term = 1.0;
    for (int q = 0; q <= p; ++q) {
        s += term;
        term *= z / static_cast<double>(q + 1);
    }
    return s;
}

// Largest c with |R_p(-x)| <= 1 on [0, c], by scanning then bisection.
inline double real_extent(int p) {
    double x = 0.0;
    const double dx = 1e-3;
    while (std::abs(taylor_exp(p, -(x + dx))) <= 1.0) x += dx;
    double lo = x, hi = x + dx;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::abs(taylor_exp(p, -mid)) <= 1.0 ? lo : hi) = mid;
    }
    return lo;
}

// T-hat limit as y -> -inf, evaluated at a very negative y.
inline double hat_limit_numeric(const std::vector<double>& omega) {
    const double y = -1e9;
    return (y * tase_scalar(omega, y)).real();
}

// Right real-axis end of the unconditional diagram: largest mu with |R_p(hat*(1+mu))| <= 1, scanning mu
// from -1 upward.
inline double mu_star(int p, const std::vector<double>& omega) {
    const double hat = hat_limit_numeric(omega);
    auto ok = [&](double mu) { return std::abs(taylor_exp(p, hat * (1.0 + mu))) <= 1.0 + 1e-14; };
    double mu = -1.0;
    const double dmu = 1e-3;
    while (ok(mu + dmu) && mu < 100.0) mu += dmu;
    double lo = mu, hi = mu + dmu;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Support function of W(X) in direction theta, estimated from random unit vectors: max Re(e^{i theta} <x, X x>).
inline std::vector<cplx> random_fov_points(const Eigen::MatrixXcd& X, int count, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    std::vector<cplx> out;
    out.reserve(count);
    const Eigen::Index n = X.rows();
    for (int c = 0; c < count; ++c) {
        Eigen::VectorXcd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(nd(rng), nd(rng));
        x.normalize();
        out.push_back(x.dot(X * x));
    }
    return out;
}

// Centred finite-difference directional derivative.
template <class F>
Eigen::VectorXd fd_directional(F&& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v, double h = 1e-6) {
    return (f(u + h * v) - f(u - h * v)) / (2.0 * h);
}

// Polynomial in a matrix via Horner.
inline Eigen::MatrixXd matrix_poly(const std::vector<double>& w, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(X.rows(), X.cols());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        R = (R * X).eval();
        R.diagonal().array() += *it;
    }
    return R;
}

inline Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

// Multiset distance between two complex lists via greedy nearest matching.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (const cplx& z : a) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < b.size(); ++j)
            if (std::abs(b[j] - z) < std::abs(b[best] - z)) best = j;
        worst = std::max(worst, std::abs(b[best] - z));
        b.erase(b.begin() + static_cast<long>(best));
    }
    return worst;
}

// Point-in-convex-polygon with tolerance; the vertices run counterclockwise.
inline bool in_hull(const std::vector<cplx>& poly, cplx z, double tol) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const cplx a = poly[i], b = poly[(i + 1) % poly.size()];
        if (std::abs(b - a) < 1e-14) continue;
        const double cross = ((b - a) * std::conj(z - a)).imag();
        if (cross > tol * std::abs(b - a)) return false;
    }
    return true;
}

// Commuting pair Q diag(lambda) Q^T, Q diag(gamma) Q^T with lambda in [-100, -1], mu in [-1.5, 1.5].
struct CommutingPair {
    Eigen::MatrixXd A, B;
    Eigen::VectorXd lambda, gamma;
};

inline CommutingPair random_commuting(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Eigen::MatrixXd Q = random_orthogonal(n, rng);
    Eigen::VectorXd lam(n), gam(n);
    for (int i = 0; i < n; ++i) {
        lam(i) = -std::pow(10.0, 2.0 * u(rng));
        gam(i) = lam(i) * (3.0 * u(rng) - 1.5);
    }
    return {Q * lam.asDiagonal() * Q.transpose(), Q * gam.asDiagonal() * Q.transpose(), lam, gam};
}

}  // namespace oracle
