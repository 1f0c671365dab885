#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/model.hpp"

namespace smellcheck::blr {

// A labeled dataset ready for fitting: one row per observation, columns in
// metric_names order, outcome y in {0, 1}.
struct SampleTable {
    struct Observation {
        std::vector<double> x;
        int y = 0;
    };

    std::vector<std::string> metric_names;
    std::vector<Observation> rows;
    std::string provenance;

    std::size_t arity() const { return metric_names.size(); }
    std::size_t size() const { return rows.size(); }
    void add(std::vector<double> x, int y) { rows.push_back({std::move(x), y}); }
};

struct FitResult {
    std::vector<std::string> metric_names;
    std::vector<double> beta;  // intercept first
    std::vector<double> se;    // standard errors, sqrt of covariance diagonal
    std::vector<std::vector<double>> covariance;
    double log_likelihood = 0.0;
    double null_log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct FitOptions {
    int max_iter = 100;
    double tol = 1e-8;
    double ridge = 0.0;
    bool error_on_nonconvergence = true;
    // Invoked after every accepted IRLS step with (iteration, beta, log-likelihood).
    std::function<void(int, std::span<const double>, double)> on_iteration;
};

// f(z) = 1 / (1 + e^-z), branch-stable for |z| up to ~700.
double logistic(double z);

// Log-likelihood of beta (intercept first) on a table; shared by the fitter
// and the tests' brute-force oracles.
double log_likelihood(const SampleTable& table, std::span<const double> beta);

// Maximum-likelihood fit by iteratively reweighted least squares with
// step-halving. With ridge > 0 the penalty -ridge * ||beta_1..n||^2 / 2 is
// added (intercept unpenalized) and separation errors are disabled, since the
// penalized optimum is always finite.
FitResult fit_blr(const SampleTable& table, const FitOptions& opts = {});

// Wald test of coefficient j (0 = intercept): ((beta_j / se_j)^2, chi-square(1) p).
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
TestResult wald_test(const FitResult& fit, std::size_t j);

// Likelihood-ratio test of nested fits; df = parameter count difference.
TestResult lr_test(const FitResult& full, const FitResult& reduced, int df);

enum class SelectionCriterion { wald, lr };

struct SelectionResult {
    std::vector<std::string> metric_names;  // retained subset, original order
    FitResult fit;                          // final fit over the subset
    std::vector<std::pair<std::string, double>> dropped;  // (name, p) in drop order
};

// Backward elimination: repeatedly drop the least-significant variable with
// p > alpha and refit. May drop every variable, leaving an intercept-only fit.
SelectionResult select_variables(const SampleTable& table, double alpha = 0.05,
                                 SelectionCriterion criterion = SelectionCriterion::wald,
                                 const FitOptions& opts = {});

}  // namespace smellcheck::blr
