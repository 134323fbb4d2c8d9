#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace clubrank {

// Dense symmetric positive-definite solve via Cholesky. The GLM designs here
// are tiny (at most 6x6 for the trinomial fit), so a plain O(p^3)
// factorization is all that is needed.
//
// Returns nullopt when the matrix is not (numerically) positive definite,
// which the callers surface as a rank/collinearity error.
class Cholesky {
public:
    // `a` is row-major p x p, only the lower triangle is read.
    static std::optional<Cholesky> factor(const std::vector<double>& a, std::size_t p) {
        // Relative pivot floor so numerically singular (collinear) systems
        // fail cleanly instead of producing an exploding solution.
        double max_diag = 0.0;
        for (std::size_t j = 0; j < p; ++j) max_diag = std::max(max_diag, std::fabs(a[j * p + j]));
        const double floor = max_diag * 1e-12;

        Cholesky c;
        c.p_ = p;
        c.l_.assign(p * p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            double diag = a[j * p + j];
            for (std::size_t k = 0; k < j; ++k) diag -= c.l_[j * p + k] * c.l_[j * p + k];
            if (!(diag > floor) || !std::isfinite(diag)) return std::nullopt;
            const double root = std::sqrt(diag);
            c.l_[j * p + j] = root;
            for (std::size_t i = j + 1; i < p; ++i) {
                double sum = a[i * p + j];
                for (std::size_t k = 0; k < j; ++k) sum -= c.l_[i * p + k] * c.l_[j * p + k];
                c.l_[i * p + j] = sum / root;
            }
        }
        return c;
    }

    // Solves A x = b.
    std::vector<double> solve(std::vector<double> b) const {
        for (std::size_t i = 0; i < p_; ++i) {  // L y = b
            for (std::size_t k = 0; k < i; ++k) b[i] -= l_[i * p_ + k] * b[k];
            b[i] /= l_[i * p_ + i];
        }
        for (std::size_t ii = p_; ii-- > 0;) {  // L^T x = y
            for (std::size_t k = ii + 1; k < p_; ++k) b[ii] -= l_[k * p_ + ii] * b[k];
            b[ii] /= l_[ii * p_ + ii];
        }
        return b;
    }

    // Diagonal of A^{-1}, used for Wald standard errors.
    std::vector<double> inverse_diagonal() const {
        std::vector<double> diag(p_, 0.0);
        std::vector<double> e(p_, 0.0);
        for (std::size_t j = 0; j < p_; ++j) {
            std::fill(e.begin(), e.end(), 0.0);
            e[j] = 1.0;
            diag[j] = solve(e)[j];
        }
        return diag;
    }

private:
    std::size_t p_ = 0;
    std::vector<double> l_;
};

}  // namespace clubrank
