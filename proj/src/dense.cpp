#include "tase/dense.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <lapacke.h>
#include <json.hpp>

#include "tase/errors.hpp"

namespace tase {

double symmetry_deviation(const Matrix& X) {
    if (X.rows() != X.cols()) return INFINITY;
    double scale = X.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (X - X.transpose()).cwiseAbs().maxCoeff() / scale;
}

bool is_symmetric(const Matrix& X, double rel_tol) {
    return X.rows() == X.cols() && symmetry_deviation(X) <= rel_tol;
}

Vector solve_spd(const Matrix& M, const Vector& rhs) {
    if (M.rows() != M.cols() || M.rows() != rhs.size())
        throw SolveFailure("solve_spd: dimension mismatch");
    if (!is_symmetric(M)) throw NotSymmetric("solve_spd: matrix is not symmetric");
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("solve_spd: non-positive pivot in Cholesky factorization");
    return llt.solve(rhs);
}

EigenDecomposition eig_general(const Matrix& X, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(X.rows());
    if (X.rows() != X.cols()) throw DomainError("eig_general: matrix must be square");
    if (!X.allFinite()) throw DomainError("eig_general: non-finite entries");
    EigenDecomposition out;
    out.values.resize(n);
    if (n == 0) return out;

    Matrix a = X;
    Vector wr(n), wi(n);
    Matrix vr;
    if (want_vectors) vr.resize(n, n);
    lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n,
                                    wr.data(), wi.data(), nullptr, 1,
                                    want_vectors ? vr.data() : nullptr, n);
    if (info > 0) throw NoConvergence("eig_general: QR iteration failed to converge");
    if (info < 0) throw DomainError("eig_general: invalid argument to dgeev");

    for (lapack_int i = 0; i < n; ++i) out.values(i) = cplx(wr(i), wi(i));
    if (want_vectors) {
        out.vectors.resize(n, n);
        for (lapack_int j = 0; j < n; ++j) {
            if (wi(j) != 0.0 && j + 1 < n) {
                for (lapack_int r = 0; r < n; ++r) {
                    out.vectors(r, j) = cplx(vr(r, j), vr(r, j + 1));
                    out.vectors(r, j + 1) = cplx(vr(r, j), -vr(r, j + 1));
                }
                ++j;
            } else {
                out.vectors.col(j) = vr.col(j).cast<cplx>();
            }
        }
    }
    return out;
}

SymmetricEigen eig_symmetric(const Matrix& X, bool want_vectors) {
    if (X.rows() != X.cols()) throw DomainError("eig_symmetric: matrix must be square");
    if (!is_symmetric(X)) throw NotSymmetric("eig_symmetric: symmetry deviation exceeds 1e-12");
    const lapack_int n = static_cast<lapack_int>(X.rows());
    SymmetricEigen out;
    out.values.resize(n);
    if (n == 0) return out;
    Matrix a = 0.5 * (X + X.transpose());
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, a.data(), n,
                                     out.values.data());
    if (info > 0) throw NoConvergence("eig_symmetric: dsyevd failed to converge");
    if (info < 0) throw DomainError("eig_symmetric: invalid argument to dsyevd");
    if (want_vectors) out.vectors = std::move(a);
    return out;
}

double hermitian_top_eigenpair(const CMatrix& H, CVector& x) {
    const lapack_int n = static_cast<lapack_int>(H.rows());
    CMatrix a = H;
    lapack_int m = 0;
    Vector w(n);
    CMatrix z(n, 1);
    std::vector<lapack_int> isuppz(2 * std::max<lapack_int>(n, 1));
    lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
                                     reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, n, n,
                                     0.0, &m, w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), n,
                                     isuppz.data());
    if (info != 0 || m != 1) throw NoConvergence("hermitian_top_eigenpair: zheevr failed");
    x = z.col(0);
    return w(0);
}

Matrix fractional_power_spd(const SymmetricEigen& eig, double r) {
    const Eigen::Index n = eig.values.size();
    if (n == 0) return Matrix(0, 0);
    double lo = eig.values.minCoeff(), hi = eig.values.maxCoeff();
    if (lo <= 0.0) throw NotPositiveDefinite("fractional_power_spd: matrix is not positive definite");
    if (lo <= 1e-12 * hi) throw IllConditioned("fractional_power_spd: eigenvalue ratio below 1e-12");
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i) = std::pow(eig.values(i), r);
        if (!std::isfinite(d(i)) || d(i) == 0.0)
            throw IllConditioned("fractional_power_spd: power overflows or underflows");
    }
    if (r == 0.0) return Matrix::Identity(n, n);
    Matrix R = eig.vectors * d.asDiagonal() * eig.vectors.transpose();
    return 0.5 * (R + R.transpose());
}

Matrix fractional_power_spd(const Matrix& M, double r) {
    return fractional_power_spd(eig_symmetric(M, true), r);
}

double spectral_radius(const Matrix& X) {
    if (X.size() == 0) return 0.0;
    return eig_general(X).values.cwiseAbs().maxCoeff();
}

namespace {

using nlohmann::json;

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> parse_matrix(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("matrix json: ") + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw ConfigError("matrix json: expected keys rows, cols, data");
    const auto rows = j["rows"].get<long>();
    const auto cols = j["cols"].get<long>();
    const auto& data = j["data"];
    if (rows < 0 || cols < 0 || !data.is_array() || static_cast<long>(data.size()) != rows * cols)
        throw ConfigError("matrix json: rows*cols does not match number of entries");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> X(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long c = 0; c < cols; ++c) {
            const auto& e = data[i * cols + c];
            if (e.is_number()) {
                X(i, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                if constexpr (std::is_same_v<Scalar, double>) {
                    if (e[1].get<double>() != 0.0)
                        throw ConfigError("matrix json: complex entry in a real matrix");
                    X(i, c) = e[0].get<double>();
                } else {
                    X(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
                }
            } else {
                throw ConfigError("matrix json: entries must be numbers or [re, im] pairs");
            }
        }
    }
    return X;
}

}  // namespace

Matrix read_matrix_json(const std::string& text) { return parse_matrix<double>(text); }
CMatrix read_cmatrix_json(const std::string& text) { return parse_matrix<cplx>(text); }

Matrix load_matrix_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_matrix_json(ss.str());
}

std::string matrix_to_json(const Matrix& X) {
    json j;
    j["rows"] = X.rows();
    j["cols"] = X.cols();
    json data = json::array();
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index c = 0; c < X.cols(); ++c) data.push_back(X(i, c));
    j["data"] = data;
    return j.dump();
}

std::string matrix_to_json(const CMatrix& X) {
    json j;
    j["rows"] = X.rows();
    j["cols"] = X.cols();
    json data = json::array();
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index c = 0; c < X.cols(); ++c) data.push_back({X(i, c).real(), X(i, c).imag()});
    j["data"] = data;
    return j.dump();
}

}  // namespace tase
