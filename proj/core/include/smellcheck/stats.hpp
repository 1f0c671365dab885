#pragma once

#include <map>
#include <string>
#include <vector>

#include "smellcheck/blr.hpp"
#include "smellcheck/errors.hpp"

namespace smellcheck::stats {

struct ShapiroWilkResult {
    double w = 0.0;
    double p_value = 0.0;
};

// Shapiro-Wilk normality test (Royston's AS R94 coefficients and p-value
// approximation). Requires 3 <= n <= 5000 and a non-constant sample.
ShapiroWilkResult shapiro_wilk(const std::vector<double>& values);

enum class CorrelationMethod { pearson, spearman };

// Pearson or Spearman (fractional ranks, ties averaged) correlation.
double correlation(const std::vector<double>& x, const std::vector<double>& y,
                   CorrelationMethod method);

// The method auto-selection rule calibration uses: Pearson iff both variables
// pass Shapiro-Wilk at the given alpha, Spearman otherwise.
CorrelationMethod choose_correlation_method(const std::vector<double>& x,
                                            const std::vector<double>& y, double alpha = 0.05);

// Variance inflation factors: VIF_j = 1 / (1 - R^2_j) from OLS of column j on
// the remaining columns plus intercept. Order follows table.metric_names.
std::vector<std::pair<std::string, double>> vif(const blr::SampleTable& table);

struct HosmerLemeshowResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int groups = 0;
};

// Deciles-of-risk goodness-of-fit test for a fitted model on its table.
HosmerLemeshowResult hosmer_lemeshow(const blr::FitResult& fit, const blr::SampleTable& table,
                                     int groups = 10);

}  // namespace smellcheck::stats
