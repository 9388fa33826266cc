#pragma once

#include <vector>

#include "tase/dense.hpp"

namespace tase {

std::vector<double> tase_weights(int p, const std::vector<double>& omega);

// T_p(z) = sum_j beta_j / (1 - omega_j z)
class TaseOperator {
public:
    TaseOperator(int p, std::vector<double> omega);

    // Standard weights of the method family; p = 1 uses omega = 1.
    static TaseOperator standard(int p);

    int p() const { return p_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& beta() const { return beta_; }

    cplx scalar(cplx z) const;
    double scalar(double y) const;
    // y * T_p(y), y < 0
    double hat_t(double y) const;
    // limit of hat_t as y -> -inf
    double hat_t_limit() const;

private:
    int p_;
    std::vector<double> omega_;
    std::vector<double> beta_;
};

// Factorizations of (I - omega_j k A), reused while A and k stay fixed.
class TaseSolver {
public:
    explicit TaseSolver(TaseOperator op);

    // Refactorizes only when A or k differ from the cached pair.
    void prepare(const Matrix& A, double k);
    bool prepared() const { return ready_; }

    Vector apply(const Vector& v);
    // Explicit T_p(kA); built once from the cached factors.
    const Matrix& dense_operator();
    // Switch apply() to a product with the explicit operator.
    void set_explicit(bool on) { use_explicit_ = on; }

    const TaseOperator& op() const { return op_; }
    long solves() const { return solves_; }
    long factorizations() const { return factorizations_; }

private:
    struct Factor {
        bool spd = false;
        Eigen::LLT<Matrix> llt;
        Eigen::PartialPivLU<Matrix> lu;
    };
    Vector solve(std::size_t j, const Vector& v) const;

    TaseOperator op_;
    Matrix A_;
    double k_ = 0.0;
    bool ready_ = false;
    std::vector<Factor> factors_;
    Matrix explicit_;
    bool have_explicit_ = false;
    bool use_explicit_ = false;
    long solves_ = 0;
    long factorizations_ = 0;
};

Vector apply_tase(const TaseOperator& op, const Matrix& A, double k, const Vector& v);

}  // namespace tase
