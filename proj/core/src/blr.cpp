#include "smellcheck/blr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linalg.hpp"
#include "smellcheck/dist.hpp"

namespace smellcheck::blr {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double logit_of(std::span<const double> beta, const std::vector<double>& x) {
    double z = beta[0];
    for (std::size_t k = 0; k < x.size(); ++k) z += beta[k + 1] * x[k];
    return z;
}

// Objective actually maximized: log-likelihood minus the ridge penalty on
// the non-intercept coefficients.
double objective(const SampleTable& table, std::span<const double> beta, double ridge) {
    double obj = log_likelihood(table, beta);
    if (ridge > 0.0)
        for (std::size_t k = 1; k < beta.size(); ++k) obj -= 0.5 * ridge * beta[k] * beta[k];
    return obj;
}

void validate_table(const SampleTable& table) {
    if (table.rows.empty()) throw OneClassOnly("sample table is empty");
    bool has0 = false, has1 = false;
    for (const auto& row : table.rows) {
        if (row.x.size() != table.arity())
            throw SchemaMismatch("row arity does not match metric_names");
        (row.y != 0 ? has1 : has0) = true;
    }
    if (!has0 || !has1) throw OneClassOnly("sample table must contain both outcome classes");

    for (std::size_t k = 0; k < table.arity(); ++k) {
        const double first = table.rows.front().x[k];
        bool constant = true;
        for (const auto& row : table.rows)
            if (row.x[k] != first) {
                constant = false;
                break;
            }
        if (constant) throw ConstantColumn(table.metric_names[k]);
    }
}

SampleTable subtable(const SampleTable& table, const std::vector<std::size_t>& cols) {
    SampleTable sub;
    sub.provenance = table.provenance;
    for (std::size_t c : cols) sub.metric_names.push_back(table.metric_names[c]);
    for (const auto& row : table.rows) {
        std::vector<double> x;
        x.reserve(cols.size());
        for (std::size_t c : cols) x.push_back(row.x[c]);
        sub.add(std::move(x), row.y);
    }
    return sub;
}

}  // namespace

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_likelihood(const SampleTable& table, std::span<const double> beta) {
    double ll = 0.0;
    for (const auto& row : table.rows) {
        const double z = logit_of(beta, row.x);
        ll += row.y * z - softplus(z);
    }
    return ll;
}

FitResult fit_blr(const SampleTable& table, const FitOptions& opts) {
    validate_table(table);

    const std::size_t p = table.arity() + 1;
    const std::size_t n = table.size();
    const bool penalized = opts.ridge > 0.0;

    std::vector<double> beta(p, 0.0);
    std::vector<double> prob(n, 0.5);
    double obj = objective(table, beta, opts.ridge);

    FitResult result;
    result.metric_names = table.metric_names;

    auto x_at = [&](std::size_t i, std::size_t k) -> double {
        return k == 0 ? 1.0 : table.rows[i].x[k - 1];
    };

    linalg::SymMatrix info(p);
    int iter = 0;
    bool converged = false;

    for (; iter < opts.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            prob[i] = logistic(logit_of(beta, table.rows[i].x));

        if (!penalized) {
            bool all_matched = true;
            for (std::size_t i = 0; i < n; ++i)
                if (std::fabs(prob[i] - table.rows[i].y) >= 1e-8) {
                    all_matched = false;
                    break;
                }
            if (all_matched)
                throw CompleteSeparation("fitted probabilities match labels exactly");
        }

        std::vector<double> grad(p, 0.0);
        info = linalg::SymMatrix(p);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = table.rows[i].y - prob[i];
            const double w = prob[i] * (1.0 - prob[i]);
            for (std::size_t a = 0; a < p; ++a) {
                grad[a] += r * x_at(i, a);
                for (std::size_t b = 0; b <= a; ++b) info.at(a, b) += w * x_at(i, a) * x_at(i, b);
            }
        }
        if (penalized)
            for (std::size_t k = 1; k < p; ++k) {
                grad[k] -= opts.ridge * beta[k];
                info.at(k, k) += opts.ridge;
            }
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) info.at(a, b) = info.at(b, a);

        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));
        if (gmax <= opts.tol) {
            converged = true;
            break;
        }

        linalg::SymMatrix chol;
        if (!linalg::cholesky(info, chol))
            throw SingularInformation("information matrix not invertible at tolerance");
        const std::vector<double> delta = linalg::cholesky_solve(chol, grad);

        // Step-halving keeps the objective non-decreasing. Near the optimum
        // the summed objective plateaus at rounding noise while the gradient
        // is still above tolerance, so a full Newton step within that noise
        // is accepted as well; Newton is locally convergent there.
        double lambda = 1.0;
        std::vector<double> candidate(p);
        double cand_obj = -std::numeric_limits<double>::infinity();
        double full_step_obj = -std::numeric_limits<double>::infinity();
        bool stepped = false;
        for (int h = 0; h < 40; ++h) {
            for (std::size_t a = 0; a < p; ++a) candidate[a] = beta[a] + lambda * delta[a];
            if (candidate == beta) break;  // step underflowed
            cand_obj = objective(table, candidate, opts.ridge);
            if (h == 0) full_step_obj = cand_obj;
            if (cand_obj >= obj) {
                stepped = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!stepped) {
            const double noise = 1e-11 * (1.0 + std::fabs(obj));
            if (full_step_obj >= obj - noise) {
                for (std::size_t a = 0; a < p; ++a) candidate[a] = beta[a] + delta[a];
                cand_obj = full_step_obj;
                stepped = true;
            }
        }
        if (!stepped) break;  // genuinely stalled; loop exits unconverged

        beta = candidate;
        obj = cand_obj;

        if (!penalized) {
            double bmax = 0.0;
            for (double b : beta) bmax = std::max(bmax, std::fabs(b));
            if (bmax > 30.0)
                throw CompleteSeparation(
                    "coefficient magnitude exceeded 30 while the likelihood still improves");
        }

        if (opts.on_iteration) opts.on_iteration(iter + 1, std::span<const double>(beta), obj);
    }

    if (!converged && opts.error_on_nonconvergence) throw NotConverged(opts.max_iter);

    result.beta = beta;
    result.iterations = iter;
    result.converged = converged;
    result.log_likelihood = log_likelihood(table, beta);

    // Null (intercept-only) log-likelihood from the closed-form MLE.
    double ybar = 0.0;
    for (const auto& row : table.rows) ybar += row.y;
    ybar /= static_cast<double>(n);
    result.null_log_likelihood =
        n * (ybar * std::log(ybar) + (1.0 - ybar) * std::log1p(-ybar));

    linalg::SymMatrix chol;
    if (!linalg::cholesky(info, chol))
        throw SingularInformation("final information matrix not invertible");
    const linalg::SymMatrix cov = linalg::cholesky_inverse(chol);
    result.covariance.assign(p, std::vector<double>(p, 0.0));
    result.se.assign(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) result.covariance[a][b] = cov.at(a, b);
        result.se[a] = std::sqrt(std::max(0.0, cov.at(a, a)));
    }
    return result;
}

TestResult wald_test(const FitResult& fit, std::size_t j) {
    if (!fit.converged) throw Error("wald_test requires a converged fit");
    if (j >= fit.beta.size()) throw std::out_of_range("wald_test: coefficient index");
    if (fit.se[j] == 0.0) throw ZeroStderr("coefficient " + std::to_string(j) + " has zero stderr");
    const double z = fit.beta[j] / fit.se[j];
    TestResult r;
    r.statistic = z * z;
    r.p_value = dist::chi_square_sf(r.statistic, 1.0);
    return r;
}

TestResult lr_test(const FitResult& full, const FitResult& reduced, int df) {
    if (!full.converged || !reduced.converged) throw Error("lr_test requires converged fits");
    for (const auto& name : reduced.metric_names)
        if (std::find(full.metric_names.begin(), full.metric_names.end(), name) ==
            full.metric_names.end())
            throw NotNested("reduced model metric '" + name + "' not in full model");
    const int expected =
        static_cast<int>(full.metric_names.size()) - static_cast<int>(reduced.metric_names.size());
    if (df != expected)
        throw std::invalid_argument("lr_test: df must equal the parameter count difference");

    TestResult r;
    r.statistic = std::max(0.0, 2.0 * (full.log_likelihood - reduced.log_likelihood));
    if (df == 0)
        r.p_value = r.statistic > 1e-12 ? 0.0 : 1.0;
    else
        r.p_value = dist::chi_square_sf(r.statistic, df);
    return r;
}

SelectionResult select_variables(const SampleTable& table, double alpha,
                                 SelectionCriterion criterion, const FitOptions& opts) {
    std::vector<std::size_t> active(table.arity());
    for (std::size_t k = 0; k < active.size(); ++k) active[k] = k;

    SelectionResult result;
    while (true) {
        const SampleTable sub = subtable(table, active);
        result.fit = fit_blr(sub, opts);
        if (active.empty()) break;

        std::vector<double> pvals(active.size());
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (criterion == SelectionCriterion::wald) {
                pvals[k] = wald_test(result.fit, k + 1).p_value;
            } else {
                std::vector<std::size_t> without = active;
                without.erase(without.begin() + static_cast<std::ptrdiff_t>(k));
                const FitResult reduced = fit_blr(subtable(table, without), opts);
                pvals[k] = lr_test(result.fit, reduced, 1).p_value;
            }
        }

        // Drop the largest p above alpha; ties resolved toward the later column.
        std::size_t worst = 0;
        for (std::size_t k = 1; k < active.size(); ++k)
            if (pvals[k] >= pvals[worst]) worst = k;
        if (pvals[worst] <= alpha) break;

        result.dropped.emplace_back(table.metric_names[active[worst]], pvals[worst]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
    }

    for (std::size_t c : active) result.metric_names.push_back(table.metric_names[c]);
    return result;
}

}  // namespace smellcheck::blr
