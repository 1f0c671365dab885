#include "smellcheck/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linalg.hpp"
#include "smellcheck/dist.hpp"

namespace smellcheck::stats {

namespace {

double poly(const double* c, int n, double x) {
    // c[0] + c[1] x + ... + c[n-1] x^(n-1)
    double r = 0.0;
    for (int i = n - 1; i >= 0; --i) r = r * x + c[i];
    return r;
}

std::vector<double> fractional_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw ConstantInput("correlation input is constant");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

ShapiroWilkResult shapiro_wilk(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 3 || n > 5000)
        throw SampleTooSmall("shapiro_wilk requires 3 <= n <= 5000, got " + std::to_string(n));

    std::vector<double> x = values;
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) throw ConstantSample("shapiro_wilk sample is constant");

    // Expected normal order statistics (Blom scores), m increasing.
    std::vector<double> m(n);
    double ssq_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) /
                                     (static_cast<double>(n) + 0.25));
        ssq_m += m[i] * m[i];
    }

    // Royston's AS R94 weights: Blom scores normalized, with polynomial
    // corrections applied to the one or two extreme positions.
    static const double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static const double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> a(n, 0.0);

    if (n == 3) {
        a[0] = -std::sqrt(0.5);
        a[2] = std::sqrt(0.5);
    } else if (n <= 5) {
        const double an = m[n - 1] / std::sqrt(ssq_m) + poly(c1, 6, rsn);
        const double phi = (ssq_m - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * an * an);
        a[n - 1] = an;
        a[0] = -an;
        for (std::size_t i = 1; i < n - 1; ++i) a[i] = m[i] / std::sqrt(phi);
    } else {
        const double an = m[n - 1] / std::sqrt(ssq_m) + poly(c1, 6, rsn);
        const double an1 = m[n - 2] / std::sqrt(ssq_m) + poly(c2, 6, rsn);
        const double phi = (ssq_m - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                           (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
        a[n - 1] = an;
        a[0] = -an;
        a[n - 2] = an1;
        a[1] = -an1;
        for (std::size_t i = 2; i < n - 2; ++i) a[i] = m[i] / std::sqrt(phi);
    }

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * x[i];
        den += (x[i] - mean) * (x[i] - mean);
    }
    ShapiroWilkResult r;
    r.w = std::clamp(num * num / den, 0.0, 1.0);

    // p-value approximation, Royston 1995.
    if (n == 3) {
        const double stqr = std::asin(std::sqrt(0.75));
        r.p_value = std::clamp(6.0 / M_PI * (std::asin(std::sqrt(r.w)) - stqr), 0.0, 1.0);
        return r;
    }

    double z;
    if (n <= 11) {
        const double nn = static_cast<double>(n);
        const double gamma = -2.273 + 0.459 * nn;
        const double y = std::log1p(-r.w);
        if (y >= gamma) {
            r.p_value = 1e-99;
            return r;
        }
        const double mu =
            0.5440 - 0.39978 * nn + 0.025054 * nn * nn - 0.0006714 * nn * nn * nn;
        const double sigma =
            std::exp(1.3822 - 0.77857 * nn + 0.062767 * nn * nn - 0.0020322 * nn * nn * nn);
        z = (-std::log(gamma - y) - mu) / sigma;
    } else {
        const double ln_n = std::log(static_cast<double>(n));
        const double mu =
            -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n * ln_n + 0.0038915 * ln_n * ln_n * ln_n;
        const double sigma = std::exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n * ln_n);
        z = (std::log1p(-r.w) - mu) / sigma;
    }
    r.p_value = dist::normal_sf(z);
    return r;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y,
                   CorrelationMethod method) {
    if (x.size() != y.size()) throw std::invalid_argument("correlation: length mismatch");
    if (x.size() < 3) throw SampleTooSmall("correlation requires n >= 3");
    if (method == CorrelationMethod::pearson) return pearson(x, y);
    return pearson(fractional_ranks(x), fractional_ranks(y));
}

CorrelationMethod choose_correlation_method(const std::vector<double>& x,
                                            const std::vector<double>& y, double alpha) {
    try {
        if (shapiro_wilk(x).p_value > alpha && shapiro_wilk(y).p_value > alpha)
            return CorrelationMethod::pearson;
    } catch (const Error&) {
        // constant or tiny samples are certainly not normal
    }
    return CorrelationMethod::spearman;
}

std::vector<std::pair<std::string, double>> vif(const blr::SampleTable& table) {
    const std::size_t k = table.arity();
    if (k < 2) throw std::invalid_argument("vif requires at least 2 metric columns");

    std::vector<std::vector<double>> columns(k, std::vector<double>(table.size()));
    std::vector<bool> constant(k, true);
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) {
            columns[j][i] = table.rows[i].x[j];
            if (columns[j][i] != columns[j][0]) constant[j] = false;
        }

    // Scan all columns for exact collinearity first so the reported column is
    // deterministic (the last offending one). Constant columns add nothing
    // beyond the intercept, so they are excluded from the auxiliary
    // regressions and get R^2 = 0 themselves.
    std::vector<double> r2(k);
    std::string exact;
    for (std::size_t j = 0; j < k; ++j) {
        if (constant[j]) {
            r2[j] = 0.0;
            continue;
        }
        std::vector<std::vector<double>> others;
        for (std::size_t o = 0; o < k; ++o)
            if (o != j && !constant[o]) others.push_back(columns[o]);
        const linalg::OlsFit fit = linalg::ols(others, columns[j]);
        r2[j] = fit.singular ? 1.0 : fit.r_squared;
        if (r2[j] >= 1.0 - 1e-12) exact = table.metric_names[j];
    }
    if (!exact.empty()) throw ExactCollinearity(exact);

    std::vector<std::pair<std::string, double>> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
        out.emplace_back(table.metric_names[j], 1.0 / (1.0 - r2[j]));
    return out;
}

HosmerLemeshowResult hosmer_lemeshow(const blr::FitResult& fit, const blr::SampleTable& table,
                                     int groups) {
    if (!fit.converged) throw Error("hosmer_lemeshow requires a converged fit");
    const std::size_t n = table.size();
    if (groups < 2 || n < 2 * static_cast<std::size_t>(groups))
        throw TooFewRows("hosmer_lemeshow requires n >= 2*groups");

    std::vector<double> prob(n);
    for (std::size_t i = 0; i < n; ++i) {
        double z = fit.beta[0];
        for (std::size_t kk = 0; kk < table.arity(); ++kk) z += fit.beta[kk + 1] * table.rows[i].x[kk];
        prob[i] = blr::logistic(z);
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return prob[a] < prob[b]; });

    HosmerLemeshowResult r;
    r.groups = groups;

    std::size_t start = 0;
    for (int g = 0; g < groups && start < n; ++g) {
        // Near-equal split, extended so ties on the fitted probability never
        // straddle a boundary.
        std::size_t end = (static_cast<std::size_t>(g) + 1) * n / static_cast<std::size_t>(groups);
        if (end <= start) end = start + 1;
        while (end < n && prob[idx[end]] == prob[idx[end - 1]]) ++end;
        if (g == groups - 1) end = n;

        double observed = 0.0, expected = 0.0;
        const double ng = static_cast<double>(end - start);
        for (std::size_t i = start; i < end; ++i) {
            observed += table.rows[idx[i]].y;
            expected += prob[idx[i]];
        }
        const double denom = expected * (1.0 - expected / ng);
        if (denom > 0.0) r.statistic += (observed - expected) * (observed - expected) / denom;
        start = end;
    }

    r.p_value = dist::chi_square_sf(r.statistic, std::max(1, groups - 2));
    return r;
}

}  // namespace smellcheck::stats
