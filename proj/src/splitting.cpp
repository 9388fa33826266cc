#include "tase/splitting.hpp"

#include <algorithm>
#include <mutex>

#include <json.hpp>

#include "tase/errors.hpp"

namespace tase {

struct Splitting::Cache {
    std::once_flag comm_once, eig_once;
    double comm_norm = 0.0;
    bool commuting = false;
    SymmetricEigen eig;
};

Splitting::Splitting(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)), cache_(std::make_shared<Cache>()) {
    if (A_.rows() != A_.cols() || B_.rows() != A_.rows() || B_.cols() != A_.cols())
        throw DomainError("Splitting: A and B must be square of equal size");
    if (!is_symmetric(A_)) throw NotSymmetric("Splitting: A must be symmetric");
}

double Splitting::commutator_norm() const {
    std::call_once(cache_->comm_once, [this] {
        const Matrix C = A_ * B_ - B_ * A_;
        cache_->comm_norm = C.norm();
        cache_->commuting = cache_->comm_norm <= 1e-10 * A_.norm() * B_.norm();
    });
    return cache_->comm_norm;
}

bool Splitting::commuting() const {
    commutator_norm();
    return cache_->commuting;
}

const SymmetricEigen& Splitting::eigA() const {
    std::call_once(cache_->eig_once, [this] { cache_->eig = eig_symmetric(A_, true); });
    return cache_->eig;
}

double Splitting::lambda_min() const { return eigA().values.size() ? eigA().values(0) : 0.0; }

void Splitting::require_negative_definite() const {
    if (eigA().values.size() && eigA().values.maxCoeff() >= 0.0)
        throw NotPositiveDefinite("Splitting: -A is not positive definite");
}

Splitting Splitting::restrict(const std::vector<Eigen::Index>& idx) const {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix a(m, m), b(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            if (idx[i] < 0 || idx[i] >= dim() || idx[j] < 0 || idx[j] >= dim())
                throw DomainError("Splitting::restrict: index out of range");
            a(i, j) = A_(idx[i], idx[j]);
            b(i, j) = B_(idx[i], idx[j]);
        }
    return Splitting(a, b);
}

std::string StabilityVerdict::to_json() const {
    using nlohmann::json;
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    json j;
    j["condition"] = condition;
    j["holds"] = holds;
    j["inconclusive"] = inconclusive;
    j["margin"] = margin;
    j["witness"] = witness ? json::array({witness->real(), witness->imag()}) : json(nullptr);
    j["params"] = {{"p", std::isnan(p) ? json(nullptr) : json(static_cast<int>(p))}, {"k", num(k)}, {"q", num(q)}, {"kappa", num(kappa)}};
    if (!std::isnan(power_probe)) j["power_probe"] = power_probe;
    j["samples"] = samples;
    return j.dump();
}

StabilityVerdict inclusion_verdict(std::string condition, const DiagramQuery& q, const std::vector<cplx>& mus,
                                   bool negate) {
    StabilityVerdict v;
    v.condition = std::move(condition);
    v.p = q.p();
    v.holds = true;
    v.margin = INFINITY;
    v.samples = mus.size();
    cplx worst = 0.0;
    for (const cplx& m : mus) {
        const cplx mu = negate ? -m : m;
        const double slack = diagram_slack(q, mu);
        if (!in_diagram(q, mu)) v.holds = false;
        if (slack < v.margin) {
            v.margin = slack;
            worst = mu;
        }
    }
    if (mus.empty()) v.margin = 1.0;
    if (!v.holds) v.witness = worst;
    v.inconclusive = std::abs(v.margin) < kInconclusiveBand;
    return v;
}

std::vector<cplx> generalized_eigenvalues(const Splitting& s) {
    const Eigen::PartialPivLU<Matrix> lu(s.A());
    if (s.dim() > 0 && !(lu.rcond() > 1e-14)) throw SingularA("generalized_eigenvalues: A is singular");
    const Matrix X = lu.solve(s.B());
    const CVector ev = eig_general(X).values;
    return std::vector<cplx>(ev.data(), ev.data() + ev.size());
}

std::vector<ModePair> common_eigenpairs(const Splitting& s) {
    if (!s.commuting())
        throw NotSimultaneouslyDiagonalizable("A and B do not commute (||AB - BA||_F = " +
                                              std::to_string(s.commutator_norm()) + ")");
    const SymmetricEigen& e = s.eigA();
    const Eigen::Index n = s.dim();
    const Matrix C = e.vectors.transpose() * s.B() * e.vectors;
    const double lam_scale = n ? e.values.cwiseAbs().maxCoeff() : 0.0;
    std::vector<ModePair> out;
    Eigen::Index start = 0;
    double off = 0.0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && e.values(end) - e.values(end - 1) <= 1e-10 * lam_scale) ++end;
        const Eigen::Index m = end - start;
        for (Eigen::Index i = start; i < end; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (j < start || j >= end) off = std::max(off, std::abs(C(i, j)));
        const CVector gam = eig_general(C.block(start, start, m, m)).values;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double lam = e.values(start + i);
            if (lam == 0.0) throw SingularA("common_eigenpairs: A is singular");
            out.push_back({lam, gam(i), gam(i) / lam});
        }
        start = end;
    }
    if (off > 1e-8 * std::max(1.0, s.B().cwiseAbs().maxCoeff()))
        throw NotSimultaneouslyDiagonalizable("eigenbasis of A does not block-diagonalize B");
    return out;
}

StabilityVerdict check_prop41(const Splitting& s, const TaseOperator& op, double k) {
    if (!(k > 0.0)) throw DomainError("check_prop41: k must be positive");
    StabilityVerdict v;
    v.condition = "Prop4.1";
    v.holds = true;
    v.margin = INFINITY;
    cplx worst = 0.0;
    for (const ModePair& m : common_eigenpairs(s)) {
        if (!(m.lambda < 0.0)) throw NotPositiveDefinite("check_prop41: A must be negative definite");
        const DiagramQuery q = DiagramQuery::at(op, k * m.lambda);
        const double slack = diagram_slack(q, m.mu);
        if (!in_diagram(q, m.mu)) v.holds = false;
        if (slack < v.margin) {
            v.margin = slack;
            worst = m.mu;
        }
        ++v.samples;
    }
    if (!v.holds) v.witness = worst;
    v.inconclusive = std::abs(v.margin) < kInconclusiveBand;
    v.p = op.p();
    v.k = k;
    return v;
}

StabilityVerdict check_thm44(const Splitting& s, const TaseOperator& op, double k) {
    if (!s.commuting()) throw NotSimultaneouslyDiagonalizable("check_thm44: A and B do not commute");
    s.require_negative_definite();
    StabilityVerdict v =
        inclusion_verdict("Thm4.4", DiagramQuery::at(op, k * s.lambda_min()), generalized_eigenvalues(s));
    v.k = k;
    return v;
}

StabilityVerdict check_thm45_unconditional(const Splitting& s, const TaseOperator& op) {
    if (!s.commuting()) throw NotSimultaneouslyDiagonalizable("check_thm45: A and B do not commute");
    return inclusion_verdict("Thm4.5", DiagramQuery::limit(op), generalized_eigenvalues(s));
}

Matrix fov_q_matrix(const Splitting& s, double q) {
    s.require_negative_definite();
    SymmetricEigen negA = s.eigA();
    negA.values = -negA.values.reverse().eval();
    negA.vectors = negA.vectors.rowwise().reverse().eval();
    const Matrix left = fractional_power_spd(negA, q / 2.0 - 1.0);
    const Matrix right = fractional_power_spd(negA, -q / 2.0);
    return left * s.B() * right;
}

FovBoundary fov_q(const Splitting& s, double q, int n_theta, const FovOptions& opts) {
    return fov(fov_q_matrix(s, q), n_theta, opts);
}

StabilityVerdict fov_inclusion(std::string condition, const FovBoundary& w, const DiagramQuery& q) {
    return inclusion_verdict(std::move(condition), q, w.samples(64), true);
}

StabilityVerdict check_thm53(const Splitting& s, const TaseOperator& op, double k, double q,
                             const FovBoundary& w) {
    if (!(k > 0.0)) throw DomainError("check_thm53: k must be positive");
    s.require_negative_definite();
    StabilityVerdict v = fov_inclusion("Thm5.3", w, DiagramQuery::at(op, k * s.lambda_min()));
    v.k = k;
    v.q = q;
    return v;
}

StabilityVerdict check_thm53(const Splitting& s, const TaseOperator& op, double k, double q, int n_theta) {
    return check_thm53(s, op, k, q, fov_q(s, q, n_theta));
}

std::pair<StabilityVerdict, StabilityVerdict> check_thm55(const Splitting&, const TaseOperator& op, double q,
                                                          const FovBoundary& w,
                                                          const std::vector<cplx>& generalized) {
    const DiagramQuery lim = DiagramQuery::limit(op);
    StabilityVerdict suff = fov_inclusion("Thm5.5-suff", w, lim);
    suff.q = q;
    StabilityVerdict nec = inclusion_verdict("Thm5.5-nec", lim, generalized);
    return {suff, nec};
}

std::pair<StabilityVerdict, StabilityVerdict> check_thm55(const Splitting& s, const TaseOperator& op, double q,
                                                          int n_theta) {
    return check_thm55(s, op, q, fov_q(s, q, n_theta), generalized_eigenvalues(s));
}

std::vector<cplx> kappa_transform(const std::vector<cplx>& muJ, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("kappa_transform: kappa must be positive");
    std::vector<cplx> out;
    out.reserve(muJ.size());
    for (const cplx& m : muJ) out.push_back(-1.0 + m / kappa);
    return out;
}

FovBoundary kappa_transform(const FovBoundary& fovJ, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("kappa_transform: kappa must be positive");
    FovBoundary out = fovJ;
    out.max_real = -INFINITY;
    for (cplx& z : out.points) {
        z = 1.0 + z / kappa;
        out.max_real = std::max(out.max_real, z.real());
    }
    return out;
}

Matrix amplification_matrix(const Splitting& s, const TaseOperator& op, double k) {
    TaseSolver solver(op);
    solver.prepare(s.A(), k);
    const Matrix Z = k * solver.dense_operator() * s.J();
    const Eigen::Index n = s.dim();
    Matrix R = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int q = 1; q <= op.p(); ++q) {
        term = (term * Z / static_cast<double>(q)).eval();
        R += term;
    }
    return R;
}

StabilityVerdict spectral_radius_check(const Splitting& s, const TaseOperator& op, double k) {
    const Matrix R = amplification_matrix(s, op, k);
    const CVector ev = eig_general(R).values;
    StabilityVerdict v;
    v.condition = "SpectralRadius";
    v.p = op.p();
    v.k = k;
    v.samples = static_cast<std::size_t>(ev.size());
    Eigen::Index imax = 0;
    const double rho = ev.size() ? ev.cwiseAbs().maxCoeff(&imax) : 0.0;
    v.holds = rho <= 1.0 + 1e-10;
    v.margin = 1.0 - rho;
    v.inconclusive = std::abs(v.margin) < kInconclusiveBand;
    if (!v.holds) v.witness = ev(imax);
    Matrix P = R;
    for (int i = 0; i < 8; ++i) P = (P * P).eval();
    v.power_probe = P.norm();
    return v;
}

}  // namespace tase
