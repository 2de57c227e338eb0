#ifndef CNLS_LINALG_HPP
#define CNLS_LINALG_HPP

// Dense linear algebra for small matrices (k <= 64): Gaussian elimination
// with partial pivoting and a cyclic Jacobi eigensolver. All the coupling
// algebra in this project deals with matrices of a handful of rows, so no
// external linear-algebra dependency is pulled in.

#include <vector>

namespace cnls {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a; // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    static Matrix identity(int n);

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool symmetric(double tol) const;
    double max_abs() const;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws numerical_error when A is singular to working precision.
std::vector<double> solve_dense(Matrix A, std::vector<double> b);

/// Determinant via LU with partial pivoting (0 when exactly singular).
double determinant(Matrix A);

struct EigenDecomposition {
    std::vector<double> values; // ascending
    Matrix vectors;             // column j is the eigenvector of values[j]
};

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues sorted ascending; ties broken by the eigenvector sign
/// convention (first nonzero component positive). Residual of every pair
/// is below 1e-10 * max|A|.
EigenDecomposition eigen_symmetric(const Matrix& A);

} // namespace cnls

#endif
