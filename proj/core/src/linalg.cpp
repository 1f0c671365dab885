#include "linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace smellcheck::linalg {

bool cholesky(const SymMatrix& a, SymMatrix& l, double pivot_tol) {
    const std::size_t n = a.size();
    l = SymMatrix(n);
    // Scale the pivot tolerance by the largest diagonal entry so the check is
    // invariant under uniform rescaling of the system.
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, std::fabs(a.at(i, i)));
    if (dmax == 0.0) dmax = 1.0;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (s <= pivot_tol * dmax) return false;
                l.at(i, i) = std::sqrt(s);
            } else {
                l.at(i, j) = s / l.at(j, j);
            }
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const SymMatrix& l, const std::vector<double>& b) {
    const std::size_t n = l.size();
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * y[k];
        y[i] = s / l.at(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * x[k];
        x[ii] = s / l.at(ii, ii);
    }
    return x;
}

SymMatrix cholesky_inverse(const SymMatrix& l) {
    const std::size_t n = l.size();
    SymMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = cholesky_solve(l, e);
        for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = col[i];
        e[j] = 0.0;
    }
    // Symmetrize against round-off.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double m = 0.5 * (inv.at(i, j) + inv.at(j, i));
            inv.at(i, j) = m;
            inv.at(j, i) = m;
        }
    return inv;
}

OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
    const std::size_t n = y.size();
    const std::size_t p = columns.size() + 1;  // + intercept
    for (const auto& c : columns)
        if (c.size() != n) throw std::invalid_argument("ols: column length mismatch");

    auto x_at = [&](std::size_t i, std::size_t k) -> double {
        return k == 0 ? 1.0 : columns[k - 1][i];
    };

    SymMatrix xtx(p);
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += x_at(i, a) * y[i];
            for (std::size_t b = 0; b <= a; ++b) xtx.at(a, b) += x_at(i, a) * x_at(i, b);
        }
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b) xtx.at(a, b) = xtx.at(b, a);

    OlsFit fit;
    SymMatrix l;
    if (!cholesky(xtx, l)) {
        fit.singular = true;
        return fit;
    }
    fit.coef = cholesky_solve(l, xty);

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);

    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (std::size_t k = 0; k < p; ++k) fitted += fit.coef[k] * x_at(i, k);
        ss_res += (y[i] - fitted) * (y[i] - fitted);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

}  // namespace smellcheck::linalg
