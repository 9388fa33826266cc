#include "tase/tase_operator.hpp"

#include <cmath>
#include <string>

#include "tase/errors.hpp"

namespace tase {

std::vector<double> tase_weights(int p, const std::vector<double>& omega) {
    if (p < 1 || static_cast<int>(omega.size()) != p)
        throw DomainError("tase_weights: need exactly p weights");
    for (double w : omega)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("tase_weights: omega must be positive");
    std::vector<double> beta(p);
    for (int j = 0; j < p; ++j) {
        const double inv_j = 1.0 / omega[j];
        double denom = 1.0;
        for (int l = 0; l < p; ++l) {
            if (l == j) continue;
            const double diff = inv_j - 1.0 / omega[l];
            if (std::abs(diff) < 1e-12)
                throw DuplicateOmega("tase_weights: omega values " + std::to_string(omega[j]) + " and " +
                                     std::to_string(omega[l]) + " coincide");
            denom *= diff;
        }
        beta[j] = std::pow(inv_j, p - 1) / denom;
    }
    return beta;
}

TaseOperator::TaseOperator(int p, std::vector<double> omega)
    : p_(p), omega_(std::move(omega)), beta_(tase_weights(p_, omega_)) {}

TaseOperator TaseOperator::standard(int p) {
    switch (p) {
        case 1: return TaseOperator(1, {1.0});
        case 2: return TaseOperator(2, {3.0, 1.5});
        case 3: return TaseOperator(3, {2.3147, 1.8796, 1.5822});
        case 4: return TaseOperator(4, {3.9396, 2.4506, 2.2271, 2.0612});
        default: throw DomainError("TaseOperator::standard: p must be 1, 2, 3 or 4");
    }
}

cplx TaseOperator::scalar(cplx z) const {
    cplx sum = 0.0;
    for (int j = 0; j < p_; ++j) {
        const cplx d = 1.0 - omega_[j] * z;
        if (d == 0.0) throw PoleHit("T_p: 1 - omega_j z vanishes");
        sum += beta_[j] / d;
    }
    return sum;
}

double TaseOperator::scalar(double y) const { return scalar(cplx(y, 0.0)).real(); }

double TaseOperator::hat_t(double y) const {
    if (!(y < 0.0)) throw DomainError("hat_t: y must be negative");
    if (std::isinf(y)) return hat_t_limit();
    double sum = 0.0;
    for (int j = 0; j < p_; ++j) sum += beta_[j] * y / (1.0 - omega_[j] * y);
    return sum;
}

double TaseOperator::hat_t_limit() const {
    double sum = 0.0;
    for (int j = 0; j < p_; ++j) sum += beta_[j] / omega_[j];
    return -sum;
}

TaseSolver::TaseSolver(TaseOperator op) : op_(std::move(op)) {}

void TaseSolver::prepare(const Matrix& A, double k) {
    if (ready_ && k == k_ && A.rows() == A_.rows() && A.cols() == A_.cols() && A == A_) return;
    if (A.rows() != A.cols()) throw SolveFailure("TaseSolver: A must be square");
    A_ = A;
    k_ = k;
    have_explicit_ = false;
    const bool sym = is_symmetric(A);
    factors_.assign(op_.p(), Factor{});
    for (int j = 0; j < op_.p(); ++j) {
        Matrix M = -op_.omega()[j] * k * A;
        M.diagonal().array() += 1.0;
        Factor& f = factors_[j];
        if (sym) {
            f.llt.compute(M);
            f.spd = f.llt.info() == Eigen::Success;
        }
        if (!f.spd) {
            f.lu.compute(M);
            const double piv = f.lu.matrixLU().diagonal().cwiseAbs().minCoeff();
            if (!(piv > 0.0) || !std::isfinite(piv))
                throw SolveFailure("TaseSolver: I - omega k A is singular");
        }
        ++factorizations_;
    }
    ready_ = true;
}

Vector TaseSolver::solve(std::size_t j, const Vector& v) const {
    const Factor& f = factors_[j];
    return f.spd ? Vector(f.llt.solve(v)) : Vector(f.lu.solve(v));
}

Vector TaseSolver::apply(const Vector& v) {
    if (!ready_) throw SolveFailure("TaseSolver: prepare() not called");
    if (use_explicit_) return dense_operator() * v;
    Vector out = Vector::Zero(v.size());
    for (int j = 0; j < op_.p(); ++j) {
        out.noalias() += op_.beta()[j] * solve(j, v);
        ++solves_;
    }
    return out;
}

const Matrix& TaseSolver::dense_operator() {
    if (!ready_) throw SolveFailure("TaseSolver: prepare() not called");
    if (!have_explicit_) {
        const Eigen::Index n = A_.rows();
        const Matrix I = Matrix::Identity(n, n);
        explicit_ = Matrix::Zero(n, n);
        for (int j = 0; j < op_.p(); ++j) {
            const Factor& f = factors_[j];
            if (f.spd)
                explicit_.noalias() += op_.beta()[j] * f.llt.solve(I);
            else
                explicit_.noalias() += op_.beta()[j] * f.lu.solve(I);
            ++solves_;
        }
        have_explicit_ = true;
    }
    return explicit_;
}

Vector apply_tase(const TaseOperator& op, const Matrix& A, double k, const Vector& v) {
    TaseSolver s(op);
    s.prepare(A, k);
    return s.apply(v);
}

}  // namespace tase
