#pragma once

// Small dense symmetric solvers for the IRLS normal equations and the OLS
// auxiliary regressions. Systems here are tiny (a dozen unknowns at most),
// so a plain Cholesky is all that is needed.

#include <cstddef>
#include <vector>

namespace smellcheck::linalg {

// Row-major square matrix.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// Cholesky factorization A = L L^T. Returns false when A is not positive
// definite at the given pivot tolerance.
bool cholesky(const SymMatrix& a, SymMatrix& l, double pivot_tol = 1e-12);

// Solves A x = b with a precomputed Cholesky factor.
std::vector<double> cholesky_solve(const SymMatrix& l, const std::vector<double>& b);

// Inverse of A from its Cholesky factor.
SymMatrix cholesky_inverse(const SymMatrix& l);

struct OlsFit {
    std::vector<double> coef;  // intercept first
    double r_squared = 0.0;
    bool singular = false;
};

// Ordinary least squares of y on columns (plus intercept) via the normal
// equations. columns[k][i] is observation i of regressor k.
OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

}  // namespace smellcheck::linalg
