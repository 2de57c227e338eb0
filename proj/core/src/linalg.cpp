#include "cnls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cnls/errors.hpp"

namespace cnls {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::symmetric(double tol) const {
    if (rows != cols) return false;
    const double scale = std::max(max_abs(), 1.0);
    for (int i = 0; i < rows; ++i)
        for (int j = i + 1; j < cols; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
    return true;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// In-place LU with partial pivoting. Returns the permutation sign, or 0 when
// a pivot collapses below the singularity threshold.
int lu_decompose(Matrix& A, std::vector<int>& perm) {
    const int n = A.rows;
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    int sign = 1;
    const double tiny = 1e-300;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(A(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < tiny) return 0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(A(piv, c), A(col, c));
            std::swap(perm[piv], perm[col]);
            sign = -sign;
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = A(r, col) / A(col, col);
            A(r, col) = f;
            for (int c = col + 1; c < n; ++c) A(r, c) -= f * A(col, c);
        }
    }
    return sign;
}

} // namespace

std::vector<double> solve_dense(Matrix A, std::vector<double> b) {
    if (A.rows != A.cols || static_cast<int>(b.size()) != A.rows)
        throw precondition_error("solve_dense: shape mismatch");
    const int n = A.rows;
    std::vector<int> perm;
    if (lu_decompose(A, perm) == 0) throw numerical_error("solve_dense: singular matrix");

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= A(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= A(i, j) * x[j];
        x[i] /= A(i, i);
    }
    return x;
}

double determinant(Matrix A) {
    if (A.rows != A.cols) throw precondition_error("determinant: non-square matrix");
    std::vector<int> perm;
    const int sign = lu_decompose(A, perm);
    if (sign == 0) return 0.0;
    double det = sign;
    for (int i = 0; i < A.rows; ++i) det *= A(i, i);
    return det;
}

EigenDecomposition eigen_symmetric(const Matrix& A) {
    if (!A.symmetric(1e-12)) throw precondition_error("eigen_symmetric: matrix not symmetric");
    const int n = A.rows;
    Matrix d = A;
    Matrix v = Matrix::identity(n);

    // Cyclic Jacobi sweeps; converges quadratically for symmetric input.
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
        if (off <= 1e-32 * std::max(1.0, d.max_abs() * d.max_abs())) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = d(p, q);
                if (apq == 0.0) continue;
                const double app = d(p, p);
                const double aqq = d(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double dkp = d(k, p);
                    const double dkq = d(k, q);
                    d(k, p) = c * dkp - s * dkq;
                    d(k, q) = s * dkp + c * dkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double dpk = d(p, k);
                    const double dqk = d(q, k);
                    d(p, k) = c * dpk - s * dqk;
                    d(q, k) = s * dpk + c * dqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return d(i, i) < d(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.values[j] = d(src, src);
        double lead = 0.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > 1e-14) {
                lead = v(i, src);
                break;
            }
        }
        const double flip = (lead < 0.0) ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.vectors(i, j) = flip * v(i, src);
    }
    return out;
}

} // namespace cnls
