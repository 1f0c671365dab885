#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/granularity.hpp"
#include "smellcheck/source_model.hpp"

namespace smellcheck::metrics {

// Named metric values for one element, in canonical order.
struct MetricVector {
    std::string element_id;
    Granularity granularity = Granularity::method;
    std::vector<std::pair<std::string, double>> values;

    double get(std::string_view name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        throw MissingMetric(std::string(name));
    }
    bool has(std::string_view name) const {
        for (const auto& [k, v] : values)
            if (k == name) return true;
        return false;
    }
};

// Canonical metric name sets per granularity.
const std::vector<std::string>& method_metric_names();  // MLOC NBD VG PAR LVAR
const std::vector<std::string>& class_metric_names();   // NORM ... WMC

bool is_valid_metric(std::string_view name, Granularity granularity);

// Method metrics. The method must have a body.
//   MLOC  code lines strictly inside the body braces
//   NBD   deepest block nesting, body block = 1
//   VG    1 + decision points (if/for/while/do/case/catch/&&/||/?:)
//   PAR   declared parameter count
//   LVAR  local variable declarators, parameters excluded
MetricVector method_metrics(const MethodUnit& method, const CompilationUnit& unit);

// Class metrics over the whole corpus (needed for hierarchy queries).
MetricVector class_metrics(const TypeUnit& type, const Corpus& corpus);

// One vector per element in deterministic order. Methods without bodies are
// skipped. Parse failures were already collected on the corpus.
std::vector<MetricVector> corpus_metrics(const Corpus& corpus, Granularity granularity);
std::vector<MetricVector> corpus_metrics(const std::vector<std::filesystem::path>& roots,
                                         Granularity granularity);

// Cyclomatic complexity of one parsed method body; exposed for WMC and tests.
int cyclomatic_complexity(const StatementNode& body);

}  // namespace smellcheck::metrics
