#pragma once

#include <map>
#include <string>
#include <vector>

#include "smellcheck/calibrate.hpp"
#include "smellcheck/config.hpp"
#include "smellcheck/model.hpp"
#include "smellcheck/source_model.hpp"

namespace smellcheck::detector {

// One detected smell instance.
struct Finding {
    std::string file_path;
    int line = 0;  // declaration line of the element
    std::string element_id;
    std::string smell;
    double probability = 0.0;
    double threshold_used = 0.0;
    int model_version = 0;
    bool confirmed = false;  // the element already carries the matching tag
};

struct DetectResult {
    std::vector<Finding> findings;  // sorted by (file, line, smell)
    std::vector<std::string> diagnostics;  // per-file parse/tag problems
};

// Applies each model to every element of its granularity; an element is
// reported iff probability >= threshold (inclusive). Already-tagged true
// positives stay in the report, flagged confirmed.
DetectResult detect(const Corpus& corpus, const std::vector<SmellModel>& models,
                    const std::map<std::string, double>& thresholds,
                    const std::vector<SmellKind>& registry);

enum class ReportFormat { text, json };

// text: one "<path>:<line>: warning[smell]: ..." line per finding.
// json: a stable array of finding objects; parses back losslessly.
std::string render_report(const std::vector<Finding>& findings, ReportFormat format);

std::vector<Finding> findings_from_json(const std::string& json_text);

// Finding counts per threshold; counts are non-increasing in the threshold.
// Thresholds must lie in (0, 1].
std::vector<std::pair<double, std::size_t>> threshold_sweep(const Corpus& corpus,
                                                            const SmellModel& model,
                                                            const std::vector<double>& thresholds);

}  // namespace smellcheck::detector
