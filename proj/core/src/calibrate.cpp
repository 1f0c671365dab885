#include "smellcheck/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smellcheck/stats.hpp"
#include "util.hpp"

namespace smellcheck::blr {

namespace {

SampleTable drop_column(const SampleTable& table, std::size_t col) {
    SampleTable out;
    out.provenance = table.provenance;
    for (std::size_t k = 0; k < table.metric_names.size(); ++k)
        if (k != col) out.metric_names.push_back(table.metric_names[k]);
    for (const auto& row : table.rows) {
        std::vector<double> x;
        x.reserve(row.x.size() - 1);
        for (std::size_t k = 0; k < row.x.size(); ++k)
            if (k != col) x.push_back(row.x[k]);
        out.add(std::move(x), row.y);
    }
    return out;
}

std::vector<double> column_of(const SampleTable& table, std::size_t col) {
    std::vector<double> v;
    v.reserve(table.size());
    for (const auto& row : table.rows) v.push_back(row.x[col]);
    return v;
}

}  // namespace

double predict(const SmellModel& model, const metrics::MetricVector& x) {
    double z = model.beta.at(0);
    for (std::size_t k = 0; k < model.metric_names.size(); ++k)
        z += model.beta.at(k + 1) * x.get(model.metric_names[k]);
    return logistic(z);
}

SmellModel calibrate(const SampleTable& input, const SmellKind& smell,
                     const CalibrateOptions& opts) {
    CalibrationDiagnostics diag;
    diag.ridge = opts.ridge;

    // 0. Constant columns carry no information and would make the fit
    //    singular; drop them first and record the fact.
    SampleTable table = input;
    for (std::size_t k = table.metric_names.size(); k-- > 0;) {
        bool constant = !table.rows.empty();
        for (const auto& row : table.rows)
            if (row.x[k] != table.rows.front().x[k]) {
                constant = false;
                break;
            }
        if (constant) {
            diag.constant_dropped.insert(diag.constant_dropped.begin(), table.metric_names[k]);
            table = drop_column(table, k);
        }
    }

    // 1. Normality per metric column, deciding the correlation method.
    std::vector<bool> normal(table.metric_names.size(), false);
    for (std::size_t k = 0; k < table.metric_names.size(); ++k) {
        CalibrationDiagnostics::Normality entry;
        entry.metric = table.metric_names[k];
        try {
            const stats::ShapiroWilkResult r = stats::shapiro_wilk(column_of(table, k));
            entry.w = r.w;
            entry.p = r.p_value;
            normal[k] = r.p_value > 0.05;
        } catch (const Error&) {
            entry.error = true;
        }
        diag.normality.push_back(entry);
    }

    // 2. Correlation matrix: Pearson only between two normal columns.
    for (std::size_t i = 0; i < table.metric_names.size(); ++i) {
        for (std::size_t j = i + 1; j < table.metric_names.size(); ++j) {
            CalibrationDiagnostics::Correlation c;
            c.a = table.metric_names[i];
            c.b = table.metric_names[j];
            const stats::CorrelationMethod method = normal[i] && normal[j]
                                                        ? stats::CorrelationMethod::pearson
                                                        : stats::CorrelationMethod::spearman;
            c.method = method == stats::CorrelationMethod::pearson ? "pearson" : "spearman";
            try {
                c.r = stats::correlation(column_of(table, i), column_of(table, j), method);
            } catch (const Error&) {
                c.r = std::numeric_limits<double>::quiet_NaN();
            }
            diag.correlations.push_back(c);
        }
    }

    // 3. VIF screen: drop exactly collinear columns, then iteratively the
    //    worst column above 10.
    SampleTable screened = table;
    while (screened.metric_names.size() >= 2) {
        std::vector<std::pair<std::string, double>> vifs;
        try {
            vifs = stats::vif(screened);
        } catch (const ExactCollinearity& e) {
            const auto it = std::find(screened.metric_names.begin(), screened.metric_names.end(),
                                      e.name);
            diag.vif_dropped.push_back({e.name, 0.0, true});
            screened = drop_column(
                screened, static_cast<std::size_t>(it - screened.metric_names.begin()));
            continue;
        }
        std::size_t worst = 0;
        for (std::size_t k = 1; k < vifs.size(); ++k)
            if (vifs[k].second >= vifs[worst].second) worst = k;
        if (vifs[worst].second <= 10.0) {
            diag.vif = vifs;
            break;
        }
        diag.vif_dropped.push_back({vifs[worst].first, vifs[worst].second, false});
        screened = drop_column(screened, worst);
    }

    // 4. Backward elimination and final fit.
    FitOptions fit_opts;
    fit_opts.ridge = opts.ridge;
    const SelectionResult selection =
        select_variables(screened, opts.alpha, opts.criterion, fit_opts);
    for (const auto& [name, p] : selection.dropped) diag.selection_dropped.push_back({name, p});

    // 5. Goodness of fit over the selected model, when the sample is large
    //    enough for the deciles-of-risk grouping.
    SampleTable selected;
    selected.metric_names = selection.metric_names;
    selected.provenance = table.provenance;
    for (const auto& row : table.rows) {
        std::vector<double> x;
        for (const std::string& name : selection.metric_names) {
            const auto it = std::find(table.metric_names.begin(), table.metric_names.end(), name);
            x.push_back(row.x[static_cast<std::size_t>(it - table.metric_names.begin())]);
        }
        selected.add(std::move(x), row.y);
    }
    if (static_cast<int>(table.size()) >= 2 * opts.hl_groups) {
        const stats::HosmerLemeshowResult hl =
            stats::hosmer_lemeshow(selection.fit, selected, opts.hl_groups);
        diag.hosmer_lemeshow_run = true;
        diag.hosmer_lemeshow_stat = hl.statistic;
        diag.hosmer_lemeshow_p = hl.p_value;
        if (opts.strict && hl.p_value < 0.01)
            throw CalibrationRejected("Hosmer-Lemeshow rejects the fit (p = " +
                                      util::format_number(hl.p_value) + ")");
    }

    SmellModel model;
    model.smell = smell.name;
    model.granularity = smell.granularity;
    model.metric_names = selection.metric_names;
    model.beta = selection.fit.beta;
    model.threshold_default = smell.threshold;
    model.sample_size = static_cast<long>(table.size());
    model.version = opts.prior_version ? *opts.prior_version + 1 : 1;
    model.calibrated_at = util::now_iso8601();
    model.diagnostics = std::move(diag);
    return model;
}

}  // namespace smellcheck::blr
