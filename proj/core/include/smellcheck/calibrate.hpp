#pragma once

#include <optional>

#include "smellcheck/blr.hpp"
#include "smellcheck/metrics.hpp"
#include "smellcheck/model.hpp"
#include "smellcheck/smell_kind.hpp"

namespace smellcheck::blr {

// Probability that the element smells, logistic(beta . x). Throws
// MissingMetric when the vector lacks one of the model's regressors.
double predict(const SmellModel& model, const metrics::MetricVector& x);

struct CalibrateOptions {
    double alpha = 0.05;
    double ridge = 0.0;
    bool strict = false;  // reject when Hosmer-Lemeshow fails at alpha 0.01
    SelectionCriterion criterion = SelectionCriterion::wald;
    std::optional<int> prior_version;  // stored predecessor, if any
    int hl_groups = 10;
};

// The full calibration pipeline: per-column normality tests, correlation
// matrix (method chosen by the normality rule), iterative VIF screen at 10,
// backward variable selection, final fit and goodness-of-fit check. All
// diagnostics are recorded on the returned model.
SmellModel calibrate(const SampleTable& table, const SmellKind& smell,
                     const CalibrateOptions& opts = {});

}  // namespace smellcheck::blr
