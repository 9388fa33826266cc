#pragma once

#include <iosfwd>
#include <vector>

#include "tase/dense.hpp"

namespace tase {

struct FovBoundary {
    std::vector<double> angles;
    std::vector<cplx> points;       // support point for each angle
    double max_real = 0.0;

    // Points centroid + f (p_i - centroid) for f in {0.2, 0.4, 0.6, 0.8} over evenly spread p_i.
    std::vector<cplx> hull_samples(int count = 64) const;
    std::vector<cplx> samples(int interior = 64) const;
};

struct FovOptions {
    int dense_max = 256;            // above this size the leading eigenpair comes from Lanczos
    int krylov_dim = 40;
    int max_restarts = 400;
    double tol = 1e-10;             // residual tolerance relative to ||H||
    int batch = 16;                 // angles advanced together so they share one matrix product
};

// Johnson's support-point construction at angles 2 pi j / n_theta.
FovBoundary fov(const Matrix& X, int n_theta, const FovOptions& opts = {});
FovBoundary fov(const CMatrix& X, int n_theta, const FovOptions& opts = {});

void write_fov_csv(std::ostream& out, const FovBoundary& w);

}  // namespace tase
