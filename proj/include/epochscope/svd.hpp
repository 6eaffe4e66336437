#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "epochscope/error.hpp"

namespace epochscope {

// Minimal dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    Matrix transposed() const {
        Matrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
        return t;
    }
};

struct SvdResult {
    std::vector<double> singular;  // descending
    Matrix u;                      // rows x k, orthonormal columns
    Matrix v;                      // cols x k
};

namespace detail {

// Thin SVD by one-sided Jacobi rotations on the columns of A (requires
// rows >= cols). Dot products and norms accumulate in long double.
inline SvdResult jacobi_svd_tall(const Matrix& input) {
    const std::size_t m = input.rows;
    const std::size_t n = input.cols;
    Matrix a = input;
    Matrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) v.at(j, j) = 1.0;

    const int max_sweeps = 60;
    const long double tol = 1e-14L;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                long double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    const long double x = a.at(i, p);
                    const long double y = a.at(i, q);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if (gamma == 0.0L) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;

                const long double zeta = (beta - alpha) / (2.0L * gamma);
                const long double sign = zeta >= 0.0L ? 1.0L : -1.0L;
                const long double t =
                    sign / (std::abs(zeta) + std::sqrt(1.0L + zeta * zeta));
                const double c = static_cast<double>(1.0L / std::sqrt(1.0L + t * t));
                const double s = static_cast<double>(t) * c;

                for (std::size_t i = 0; i < m; ++i) {
                    const double x = a.at(i, p);
                    const double y = a.at(i, q);
                    a.at(i, p) = c * x - s * y;
                    a.at(i, q) = s * x + c * y;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = v.at(i, p);
                    const double y = v.at(i, q);
                    v.at(i, p) = c * x - s * y;
                    v.at(i, q) = s * x + c * y;
                }
            }
        }
    }
    if (!converged)
        throw ConvergenceError("svd: Jacobi sweeps exceeded without convergence");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        long double norm2 = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const long double x = a.at(i, j);
            norm2 += x * x;
        }
        sigma[j] = static_cast<double>(std::sqrt(norm2));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult result;
    result.singular.resize(n);
    result.u = Matrix(m, n);
    result.v = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        result.singular[k] = sigma[j];
        if (sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i)
                result.u.at(i, k) = a.at(i, j) / sigma[j];
        }
        for (std::size_t i = 0; i < n; ++i) result.v.at(i, k) = v.at(i, j);
    }
    return result;
}

}  // namespace detail

// Thin SVD of an arbitrary dense matrix.
inline SvdResult jacobi_svd(const Matrix& a) {
    if (a.rows == 0 || a.cols == 0) throw DomainError("svd: empty matrix");
    if (a.rows >= a.cols) return detail::jacobi_svd_tall(a);
    SvdResult t = detail::jacobi_svd_tall(a.transposed());
    std::swap(t.u, t.v);
    return t;
}

}  // namespace epochscope
