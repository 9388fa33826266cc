#include "tase/stability.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "tase/errors.hpp"

namespace tase {

cplx rp(int p, cplx z) {
    if (p < 1 || p > 4) throw DomainError("rp: p must be in 1..4");
    cplx sum = 1.0, term = 1.0;
    for (int q = 1; q <= p; ++q) {
        term *= z / static_cast<double>(q);
        sum += term;
    }
    return sum;
}

bool in_rp(int p, cplx z) {
    return std::abs(rp(p, z)) <= 1.0 + kMembershipTol && z.real() <= kMembershipTol;
}

double rp_real_extent(int p) {
    switch (p) {
        case 1:
        case 2: return 2.0;
        case 3: {
            const double a = -4.0 + std::sqrt(17.0);
            return -(std::cbrt(a) - 1.0 - 1.0 / std::cbrt(a));
        }
        case 4: {
            const double x = -43.0 + 9.0 * std::sqrt(29.0);
            return -(std::cbrt(4.0) * std::cbrt(x) - 4.0 - 10.0 * std::cbrt(2.0 / x)) / 3.0;
        }
        default: throw DomainError("rp_real_extent: p must be in 1..4");
    }
}

cplx rt(const TaseOperator& op, cplx z) { return rp(op.p(), op.scalar(z) * z); }

double DiagramQuery::hat() const { return infinite() ? op.hat_t_limit() : op.hat_t(y); }

DiagramQuery DiagramQuery::at(const TaseOperator& op, double y) {
    if (!(y < 0.0)) throw DomainError("diagram query needs y < 0");
    return DiagramQuery{op, y};
}

DiagramQuery DiagramQuery::limit(const TaseOperator& op) { return DiagramQuery{op, -kInfinity}; }

cplx rt_tilde(const DiagramQuery& q, cplx mu) { return rp(q.p(), q.hat() * (1.0 + mu)); }

bool in_diagram(const DiagramQuery& q, cplx mu) {
    return std::abs(rt_tilde(q, mu)) <= 1.0 + kMembershipTol && mu.real() >= -1.0 - kMembershipTol;
}

double diagram_slack(const DiagramQuery& q, cplx mu) {
    return std::min(1.0 - std::abs(rt_tilde(q, mu)), 1.0 + mu.real());
}

namespace {

// Roots of R_p(z) = target via the companion matrix, polished by Newton.
std::vector<cplx> rp_level_roots(int p, cplx target) {
    // monic: z^p + p!/(p-1)! z^{p-1} + ... + p!(1 - target)
    std::vector<cplx> coef(p + 1);  // coef[q] multiplies z^q in p! * (R_p(z) - target)
    double fact = 1.0;
    for (int q = 1; q <= p; ++q) fact *= q;
    double qfact = 1.0;
    for (int q = 0; q <= p; ++q) {
        if (q > 0) qfact *= q;
        coef[q] = fact / qfact;
    }
    coef[0] -= fact * target;
    CMatrix C = CMatrix::Zero(p, p);
    for (int i = 1; i < p; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < p; ++i) C(i, p - 1) = -coef[i];
    Eigen::ComplexEigenSolver<CMatrix> es(C, false);
    if (es.info() != Eigen::Success) throw RootFindingFailure("companion eigenvalues failed");
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + p);
    for (cplx& z : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx g = rp(p, z) - target;
            const cplx dg = p > 1 ? rp(p - 1, z) : cplx(1.0);
            if (dg == 0.0) break;
            const cplx step = g / dg;
            z -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
    }
    return roots;
}

}  // namespace

BoundaryCurve boundary(const DiagramQuery& q, int n_theta) {
    if (n_theta < 8) throw DomainError("boundary: n_theta must be at least 8");
    const double h = q.hat();
    BoundaryCurve out;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = 2.0 * M_PI * i / n_theta;
        const cplx target = std::polar(1.0, theta);
        bool any = false;
        for (const cplx& z : rp_level_roots(q.p(), target)) {
            const cplx mu = -1.0 + z / h;
            if (mu.real() < -1.0 - kMembershipTol) continue;
            const double res = std::abs(rt_tilde(q, mu) - target);
            if (res > 1e-8) continue;
            out.thetas.push_back(theta);
            out.points.push_back(mu);
            out.residuals.push_back(res);
            any = true;
        }
        if (!any) throw RootFindingFailure("boundary: no admissible root at theta = " + std::to_string(theta));
    }
    return out;
}

void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve) {
    out << "theta,re_mu,im_mu,residual\n";
    char buf[128];
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", curve.thetas[i], curve.points[i].real(),
                      curve.points[i].imag(), curve.residuals[i]);
        out << buf;
    }
}

std::pair<double, double> real_axis_endpoints(const DiagramQuery& q) {
    return {-1.0, -1.0 - rp_real_extent(q.p()) / q.hat()};
}

double kstar_real(const TaseOperator& op, const std::vector<ModeRatio>& pairs) {
    const int p = op.p();
    const double c = rp_real_extent(p);
    const double mu_star = real_axis_endpoints(DiagramQuery::limit(op)).second;
    double best = kInfinity;
    for (const ModeRatio& m : pairs) {
        if (!(m.lambda < 0.0)) throw DomainError("kstar_real: eigenvalues of A must be negative");
        if (m.mu < -1.0) throw InvalidMu("kstar_real: mu = " + std::to_string(m.mu) + " lies left of -1");
        if (m.mu <= mu_star) continue;
        double k;
        if (p == 2) {
            const double mu = m.mu;
            k = (-8.0 + mu - std::sqrt(28.0 + 20.0 * mu + mu * mu)) / (9.0 * m.lambda * (mu - 1.0));
        } else {
            // mu_r(k lambda) is decreasing in k; find where it crosses mu.
            auto excess = [&](double kk) { return -1.0 - c / op.hat_t(kk * m.lambda) - m.mu; };
            double hi = 1.0 / -m.lambda;
            while (excess(hi) > 0.0) hi *= 2.0;
            double lo = hi;
            while (excess(lo) <= 0.0) lo *= 0.5;
            for (int it = 0; it < 300 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (excess(mid) > 0.0 ? lo : hi) = mid;
            }
            k = lo;
        }
        best = std::min(best, k);
    }
    return best;
}

}  // namespace tase
