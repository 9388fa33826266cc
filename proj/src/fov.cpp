#include "tase/fov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "tase/errors.hpp"

namespace tase {

std::vector<cplx> FovBoundary::hull_samples(int count) const {
    std::vector<cplx> out;
    if (points.empty() || count <= 0) return out;
    cplx centroid = 0.0;
    for (const cplx& z : points) centroid += z;
    centroid /= static_cast<double>(points.size());
    const int per_ray = 4;
    const int rays = std::max(1, count / per_ray);
    for (int r = 0; r < rays; ++r) {
        const cplx& p = points[(static_cast<std::size_t>(r) * points.size()) / rays];
        for (int f = 1; f <= per_ray; ++f) out.push_back(centroid + (0.2 * f) * (p - centroid));
    }
    return out;
}

std::vector<cplx> FovBoundary::samples(int interior) const {
    std::vector<cplx> out = points;
    const auto inner = hull_samples(interior);
    out.insert(out.end(), inner.begin(), inner.end());
    return out;
}

namespace {

// Largest eigenpair of a Hermitian operator by thick-restart Lanczos with full reorthogonalization.
// Driven one product at a time so that several angles can share a matrix product. The leading half
// of the Ritz vectors is kept across restarts, which matters when the top of the spectrum is clustered.
class Lanczos {
public:
    Lanczos(const CVector& x0, const FovOptions& o)
        : o_(o), m_(static_cast<int>(std::min<Eigen::Index>(o.krylov_dim, x0.size()))),
          V_(x0.size(), m_ + 1), T_(CMatrix::Zero(m_, m_)), x_(x0) {
        V_.col(0) = x0 / x0.norm();
    }

    bool done() const { return done_; }
    auto current() const { return V_.col(j_); }
    const CVector& vector() const { return x_; }
    double value() const { return value_; }

    // w = H * current()
    void feed(CVector w) {
        const Eigen::Index n = V_.rows();
        const int j = j_;
        CVector h = V_.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V_.leftCols(j + 1) * h;
        const CVector h2 = V_.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V_.leftCols(j + 1) * h2;
        h += h2;
        for (int i = 0; i <= j; ++i) {
            T_(i, j) = h(i);
            T_(j, i) = std::conj(h(i));
        }
        T_(j, j) = h(j).real();
        const double beta = w.norm();
        const double scale = T_.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff();
        if (beta <= 1e-13 * scale || j + 1 == n) {
            ritz(j + 1, 0.0);
            done_ = true;
            return;
        }
        V_.col(j + 1) = w / beta;
        if (j + 1 < m_) {
            ++j_;
            return;
        }
        ritz(m_, beta);
    }

private:
    void ritz(int used, double beta) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(T_.topLeftCorner(used, used));
        const Vector& theta = es.eigenvalues();
        const CMatrix& Y = es.eigenvectors();
        value_ = theta(used - 1);
        x_ = V_.leftCols(used) * Y.col(used - 1);
        x_.normalize();
        if (beta == 0.0) return;
        const double hscale = std::max({std::abs(theta(0)), std::abs(value_), 1e-300});
        const double residual = beta * std::abs(Y(used - 1, used - 1));
        if (residual <= o_.tol * hscale || (restart_ >= 2 && std::abs(value_ - prev_) <= 1e-14 * hscale)) {
            done_ = true;
            return;
        }
        if (++restart_ >= o_.max_restarts) {
            // the Ritz value is within `residual` of an eigenvalue of H
            if (residual > 1e-6 * hscale)
                throw NoConvergence("fov: Lanczos did not converge");
            done_ = true;
            return;
        }
        prev_ = value_;
        // compress onto the top Ritz vectors plus the residual direction
        const int k = std::min(std::max(1, m_ / 2), used - 1);
        const CMatrix Yk = Y.rightCols(k);
        const CMatrix Vk = V_.leftCols(used) * Yk;
        const CVector next = V_.col(used);
        T_.setZero();
        for (int i = 0; i < k; ++i) {
            V_.col(i) = Vk.col(i);
            T_(i, i) = theta(used - k + i);
            T_(i, k) = beta * Yk(used - 1, i);
            T_(k, i) = std::conj(T_(i, k));
        }
        V_.col(k) = next;
        j_ = k;
    }

    const FovOptions& o_;
    int m_;
    CMatrix V_;
    CMatrix T_;
    CVector x_;
    int j_ = 0;
    int restart_ = 0;
    double value_ = 0.0;
    double prev_ = NAN;
    bool done_ = false;
};

void perturb(CVector& x, std::mt19937_64& rng, double eps) {
    std::normal_distribution<double> nd;
    const double s = eps * x.norm() / std::sqrt(static_cast<double>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += s * cplx(nd(rng), nd(rng));
    x.normalize();
}

CVector random_start(Eigen::Index n, std::mt19937_64& rng) {
    CVector x = CVector::Ones(n);
    perturb(x, rng, 1.0);
    return x;
}

double angle(int j, int n_theta) { return 2.0 * M_PI * j / n_theta; }

}  // namespace

FovBoundary fov(const Matrix& X, int n_theta, const FovOptions& opts) {
    if (X.rows() != X.cols()) throw DomainError("fov: matrix must be square");
    if (n_theta < 16) throw DomainError("fov: n_theta must be at least 16");
    const Eigen::Index n = X.rows();
    FovBoundary out;
    out.angles.resize(n_theta);
    out.points.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) out.angles[j] = angle(j, n_theta);
    const int half = n_theta / 2;

    if (n <= opts.dense_max) {
        const CMatrix Xc = X.cast<cplx>();
        for (int j = 0; j <= half; ++j) {
            const cplx e = std::polar(1.0, out.angles[j]);
            const CMatrix H = 0.5 * (e * Xc + std::conj(e) * Xc.adjoint());
            CVector x;
            hermitian_top_eigenpair(H, x);
            out.points[j] = x.dot(Xc * x);
        }
    } else {
        const Matrix S = 0.5 * (X + X.transpose());
        const Matrix K = 0.5 * (X - X.transpose());
        std::mt19937_64 rng(12345);
        std::vector<CVector> found(half + 1);
        const int batch = std::max(1, opts.batch);
        for (int j0 = 0; j0 <= half; j0 += batch) {
            const int nb = std::min(batch, half + 1 - j0);
            std::vector<Lanczos> runs;
            runs.reserve(nb);
            for (int b = 0; b < nb; ++b) {
                CVector x0 = j0 == 0 ? random_start(n, rng) : found[j0 + b - batch];
                if (j0 > 0) perturb(x0, rng, 1e-3);
                runs.emplace_back(x0, opts);
            }
            // real and imaginary parts of all active vectors go through one product with S and K
            Matrix V2(n, 2 * nb), P(n, 2 * nb), Q(n, 2 * nb);
            std::vector<int> active;
            while (true) {
                active.clear();
                for (int b = 0; b < nb; ++b)
                    if (!runs[b].done()) active.push_back(b);
                if (active.empty()) break;
                const Eigen::Index na = static_cast<Eigen::Index>(active.size());
                for (Eigen::Index a = 0; a < na; ++a) {
                    V2.col(a) = runs[active[a]].current().real();
                    V2.col(na + a) = runs[active[a]].current().imag();
                }
                P.leftCols(2 * na).noalias() = S * V2.leftCols(2 * na);
                Q.leftCols(2 * na).noalias() = K * V2.leftCols(2 * na);
                for (Eigen::Index a = 0; a < na; ++a) {
                    const double th = out.angles[j0 + active[a]];
                    const double c = std::cos(th), sn = std::sin(th);
                    CVector w(n);
                    w.real() = c * P.col(a) - sn * Q.col(na + a);
                    w.imag() = c * P.col(na + a) + sn * Q.col(a);
                    runs[active[a]].feed(std::move(w));
                }
            }
            for (int b = 0; b < nb; ++b) {
                const CVector& x = runs[b].vector();
                found[j0 + b] = x;
                Matrix xv(n, 2);
                xv.col(0) = x.real();
                xv.col(1) = x.imag();
                const Matrix Px = X * xv;
                const CVector Xx = Px.col(0).cast<cplx>() + cplx(0.0, 1.0) * Px.col(1).cast<cplx>();
                out.points[j0 + b] = x.dot(Xx);
            }
        }
    }
    for (int j = half + 1; j < n_theta; ++j) out.points[j] = std::conj(out.points[n_theta - j]);
    out.max_real = -INFINITY;
    for (const cplx& z : out.points) out.max_real = std::max(out.max_real, z.real());
    return out;
}

FovBoundary fov(const CMatrix& X, int n_theta, const FovOptions& opts) {
    if (X.rows() != X.cols()) throw DomainError("fov: matrix must be square");
    if (n_theta < 16) throw DomainError("fov: n_theta must be at least 16");
    if (X.imag().isZero(0.0)) return fov(Matrix(X.real()), n_theta, opts);
    const Eigen::Index n = X.rows();
    FovBoundary out;
    out.angles.resize(n_theta);
    out.points.resize(n_theta);
    std::mt19937_64 rng(12345);
    CVector x = random_start(n, rng);
    for (int j = 0; j < n_theta; ++j) {
        out.angles[j] = angle(j, n_theta);
        const cplx e = std::polar(1.0, out.angles[j]);
        const CMatrix H = 0.5 * (e * X + std::conj(e) * X.adjoint());
        if (n <= opts.dense_max) {
            hermitian_top_eigenpair(H, x);
        } else {
            if (j > 0) perturb(x, rng, 1e-3);
            Lanczos run(x, opts);
            while (!run.done()) run.feed(H * run.current());
            x = run.vector();
        }
        out.points[j] = x.dot(X * x);
    }
    out.max_real = -INFINITY;
    for (const cplx& z : out.points) out.max_real = std::max(out.max_real, z.real());
    return out;
}

void write_fov_csv(std::ostream& out, const FovBoundary& w) {
    out << "theta,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", w.angles[i], w.points[i].real(),
                      w.points[i].imag());
        out << buf;
    }
}

}  // namespace tase
