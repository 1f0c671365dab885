#pragma once

#include <string>
#include <vector>

#include "smellcheck/granularity.hpp"

namespace smellcheck {

// Diagnostics recorded while calibrating a model. Everything here is
// informational; it is persisted with the model so a later reader can see
// why columns were dropped or how well the final fit matched the data.
struct CalibrationDiagnostics {
    struct Normality {
        std::string metric;
        double w = 0.0;
        double p = 0.0;
        bool error = false;  // constant sample / too small
    };
    struct Correlation {
        std::string a;
        std::string b;
        std::string method;  // "pearson" or "spearman"
        double r = 0.0;
    };
    struct VifDrop {
        std::string metric;
        double vif = 0.0;  // infinity encoded as 0 with exact=true
        bool exact = false;
    };
    struct SelectionDrop {
        std::string metric;
        double p = 0.0;
    };

    std::vector<Normality> normality;
    std::vector<Correlation> correlations;
    std::vector<std::string> constant_dropped;  // columns with a single value
    std::vector<VifDrop> vif_dropped;
    std::vector<std::pair<std::string, double>> vif;  // final per-column VIFs
    std::vector<SelectionDrop> selection_dropped;
    double hosmer_lemeshow_stat = 0.0;
    double hosmer_lemeshow_p = 1.0;
    bool hosmer_lemeshow_run = false;
    double ridge = 0.0;
};

// A calibrated per-smell model: the regression coefficients plus the
// metadata needed to apply and persist it.
struct SmellModel {
    std::string smell;
    Granularity granularity = Granularity::method;
    std::vector<std::string> metric_names;
    std::vector<double> beta;  // intercept first; beta.size() == metric_names.size() + 1
    double threshold_default = 0.5;
    long sample_size = 0;
    int version = 1;
    std::string calibrated_at;  // ISO-8601 UTC
    CalibrationDiagnostics diagnostics;
};

}  // namespace smellcheck
