#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tase {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenDecomposition {
    CVector values;
    CMatrix vectors;          // columns, empty unless requested
    bool symmetric = false;
    bool has_vectors() const { return vectors.size() > 0; }
};

struct SymmetricEigen {
    Vector values;            // ascending
    Matrix vectors;           // orthonormal columns, empty unless requested
};

// Relative max-norm deviation of X from its transpose.
double symmetry_deviation(const Matrix& X);
bool is_symmetric(const Matrix& X, double rel_tol = 1e-12);

Vector solve_spd(const Matrix& M, const Vector& rhs);

EigenDecomposition eig_general(const Matrix& X, bool want_vectors = false);
SymmetricEigen eig_symmetric(const Matrix& X, bool want_vectors = true);

// Largest eigenpair of a Hermitian matrix (dense path).
double hermitian_top_eigenpair(const CMatrix& H, CVector& x);

Matrix fractional_power_spd(const Matrix& M, double r);
// Same from an existing decomposition of M.
Matrix fractional_power_spd(const SymmetricEigen& eig, double r);

double spectral_radius(const Matrix& X);

// {"rows": n, "cols": m, "data": [...]} with complex entries as [re, im].
Matrix read_matrix_json(const std::string& text);
CMatrix read_cmatrix_json(const std::string& text);
Matrix load_matrix_json(const std::string& path);
std::string matrix_to_json(const Matrix& X);
std::string matrix_to_json(const CMatrix& X);

}  // namespace tase
