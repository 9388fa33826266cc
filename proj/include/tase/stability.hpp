#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "tase/dense.hpp"
#include "tase/tase_operator.hpp"

namespace tase {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kMembershipTol = 1e-12;

// Truncated exponential 1 + z + ... + z^p / p!
cplx rp(int p, cplx z);
bool in_rp(int p, cplx z);
// Right end of R_p on the negative real axis: R_p(-c_p) = +-1.
double rp_real_extent(int p);

// RT_p(z) = R_p(z T_p(z))
cplx rt(const TaseOperator& op, cplx z);

struct DiagramQuery {
    TaseOperator op;
    double y = -kInfinity;   // negative, or -inf for the unconditional diagram

    int p() const { return op.p(); }
    bool infinite() const { return std::isinf(y); }
    double hat() const;

    static DiagramQuery at(const TaseOperator& op, double y);
    static DiagramQuery limit(const TaseOperator& op);
};

cplx rt_tilde(const DiagramQuery& q, cplx mu);
bool in_diagram(const DiagramQuery& q, cplx mu);
// Signed slack min(1 - |RT~|, 1 + Re mu); non-negative inside the diagram.
double diagram_slack(const DiagramQuery& q, cplx mu);

struct BoundaryCurve {
    std::vector<double> thetas;
    std::vector<cplx> points;
    std::vector<double> residuals;
};

BoundaryCurve boundary(const DiagramQuery& q, int n_theta);
void write_boundary_csv(std::ostream& out, const BoundaryCurve& curve);

// (-1, mu_r) where the diagram meets the real axis.
std::pair<double, double> real_axis_endpoints(const DiagramQuery& q);

struct ModeRatio {
    double lambda;   // eigenvalue of A, negative
    double mu;       // generalized eigenvalue, real
};

// Largest k with mu_i in D_{k lambda_i, p} for all i; +inf when unbounded.
double kstar_real(const TaseOperator& op, const std::vector<ModeRatio>& pairs);

}  // namespace tase
