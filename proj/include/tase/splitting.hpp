#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tase/dense.hpp"
#include "tase/fov.hpp"
#include "tase/stability.hpp"
#include "tase/tase_operator.hpp"

namespace tase {

// J = A + B with A symmetric; negative definiteness is checked where a theorem needs it.
class Splitting {
public:
    Splitting(Matrix A, Matrix B);

    const Matrix& A() const { return A_; }
    const Matrix& B() const { return B_; }
    Matrix J() const { return A_ + B_; }
    Eigen::Index dim() const { return A_.rows(); }

    // ||AB - BA||_F <= 1e-10 ||A||_F ||B||_F, computed once.
    bool commuting() const;
    double commutator_norm() const;
    const SymmetricEigen& eigA() const;
    // Most negative eigenvalue of A.
    double lambda_min() const;
    // Throws NotPositiveDefinite unless all eigenvalues of A are negative.
    void require_negative_definite() const;

    Splitting restrict(const std::vector<Eigen::Index>& idx) const;

private:
    struct Cache;
    Matrix A_, B_;
    std::shared_ptr<Cache> cache_;
};

struct StabilityVerdict {
    std::string condition;
    bool holds = false;
    bool inconclusive = false;     // |margin| below 1e-6
    double margin = 0.0;
    std::optional<cplx> witness;
    double p = NAN, k = NAN, q = NAN, kappa = NAN;
    double power_probe = NAN;      // ||RT^256||_2, spectral radius check only
    std::size_t samples = 0;

    std::string to_json() const;
};

inline constexpr double kInconclusiveBand = 1e-6;

// mu with each sample checked against q; `negate` flips samples before the test.
StabilityVerdict inclusion_verdict(std::string condition, const DiagramQuery& q, const std::vector<cplx>& mus,
                                   bool negate = false);

std::vector<cplx> generalized_eigenvalues(const Splitting& s);

struct ModePair {
    double lambda;
    cplx gamma;
    cplx mu;
};

// Pairs (lambda_i, gamma_i) from a shared eigenbasis; throws NotSimultaneouslyDiagonalizable.
std::vector<ModePair> common_eigenpairs(const Splitting& s);

StabilityVerdict check_prop41(const Splitting& s, const TaseOperator& op, double k);
StabilityVerdict check_thm44(const Splitting& s, const TaseOperator& op, double k);
StabilityVerdict check_thm45_unconditional(const Splitting& s, const TaseOperator& op);

Matrix fov_q_matrix(const Splitting& s, double q);
FovBoundary fov_q(const Splitting& s, double q, int n_theta, const FovOptions& opts = {});

// -W subset of D_{y,p}, sampled on the boundary plus interior hull points.
StabilityVerdict fov_inclusion(std::string condition, const FovBoundary& w, const DiagramQuery& q);

StabilityVerdict check_thm53(const Splitting& s, const TaseOperator& op, double k, double q, int n_theta);
StabilityVerdict check_thm53(const Splitting& s, const TaseOperator& op, double k, double q,
                             const FovBoundary& w);
std::pair<StabilityVerdict, StabilityVerdict> check_thm55(const Splitting& s, const TaseOperator& op, double q,
                                                          int n_theta);
std::pair<StabilityVerdict, StabilityVerdict> check_thm55(const Splitting& s, const TaseOperator& op, double q,
                                                          const FovBoundary& w,
                                                          const std::vector<cplx>& generalized);

// mu(kappa A, B) = -1 + mu(A, J) / kappa
std::vector<cplx> kappa_transform(const std::vector<cplx>& muJ, double kappa);
// W_q(-kappa A, B) = 1 + W_q(-A, J) / kappa
FovBoundary kappa_transform(const FovBoundary& fovJ, double kappa);

// sum_{q<=p} Z^q / q! with Z = k T_p(kA) (A + B)
Matrix amplification_matrix(const Splitting& s, const TaseOperator& op, double k);
StabilityVerdict spectral_radius_check(const Splitting& s, const TaseOperator& op, double k);

}  // namespace tase
