#include "smellcheck/detector.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "smellcheck/metrics.hpp"
#include "smellcheck/tagging.hpp"

namespace smellcheck::detector {

using nlohmann::json;

namespace {

std::string format_probability(double p) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", p);
    return buf;
}

}  // namespace

DetectResult detect(const Corpus& corpus, const std::vector<SmellModel>& models,
                    const std::map<std::string, double>& thresholds,
                    const std::vector<SmellKind>& registry) {
    DetectResult result;
    for (const Corpus::Failure& f : corpus.failures)
        result.diagnostics.push_back(f.file_path + ": " + f.message);

    std::vector<tagging::TagIssue> tag_issues;
    const std::vector<tagging::SmellTag> tags = tagging::read_tags(corpus, registry, &tag_issues);
    for (const tagging::TagIssue& issue : tag_issues)
        result.diagnostics.push_back(issue.file_path + ":" + std::to_string(issue.line) + ": " +
                                     issue.message);

    for (const SmellModel& model : models) {
        double threshold = model.threshold_default;
        if (const auto it = thresholds.find(model.smell); it != thresholds.end())
            threshold = it->second;
        if (!(threshold > 0.0 && threshold <= 1.0))
            throw UsageError("threshold for '" + model.smell + "' must lie in (0, 1]");

        for (const ElementRef& el : corpus.elements(model.granularity)) {
            if (model.granularity == Granularity::method && !el.method->body) continue;
            const metrics::MetricVector vec =
                model.granularity == Granularity::method
                    ? metrics::method_metrics(*el.method, *el.unit)
                    : metrics::class_metrics(*el.type, corpus);
            const double p = blr::predict(model, vec);
            if (p < threshold) continue;

            Finding f;
            f.file_path = el.unit->file_path;
            f.line = el.method ? el.method->declaration_line : el.type->declaration_line;
            f.element_id = el.qualified_id;
            f.smell = model.smell;
            f.probability = p;
            f.threshold_used = threshold;
            f.model_version = model.version;
            for (const tagging::SmellTag& tag : tags)
                if (tag.smell == model.smell && tag.element_id == el.qualified_id) {
                    f.confirmed = true;
                    break;
                }
            result.findings.push_back(std::move(f));
        }
    }

    std::sort(result.findings.begin(), result.findings.end(),
              [](const Finding& a, const Finding& b) {
                  if (a.file_path != b.file_path) return a.file_path < b.file_path;
                  if (a.line != b.line) return a.line < b.line;
                  return a.smell < b.smell;
              });
    return result;
}

std::string render_report(const std::vector<Finding>& findings, ReportFormat format) {
    if (format == ReportFormat::text) {
        std::string out;
        for (const Finding& f : findings) {
            out += f.file_path + ":" + std::to_string(f.line) + ": warning[smell]: " + f.smell +
                   " probability=" + format_probability(f.probability) + " (model v" +
                   std::to_string(f.model_version) + ")";
            if (f.confirmed) out += " [confirmed]";
            out += "\n";
        }
        return out;
    }

    json arr = json::array();
    for (const Finding& f : findings)
        arr.push_back({
            {"file", f.file_path},
            {"line", f.line},
            {"element", f.element_id},
            {"smell", f.smell},
            {"probability", f.probability},
            {"threshold", f.threshold_used},
            {"model_version", f.model_version},
            {"confirmed", f.confirmed},
        });
    return arr.dump(2) + "\n";
}

std::vector<Finding> findings_from_json(const std::string& json_text) {
    std::vector<Finding> out;
    json arr;
    try {
        arr = json::parse(json_text);
        for (const json& e : arr) {
            Finding f;
            f.file_path = e.at("file").get<std::string>();
            f.line = e.at("line").get<int>();
            f.element_id = e.at("element").get<std::string>();
            f.smell = e.at("smell").get<std::string>();
            f.probability = e.at("probability").get<double>();
            f.threshold_used = e.at("threshold").get<double>();
            f.model_version = e.at("model_version").get<int>();
            f.confirmed = e.at("confirmed").get<bool>();
            out.push_back(std::move(f));
        }
    } catch (const json::exception& ex) {
        throw ParseError(0, std::string("findings JSON: ") + ex.what());
    }
    return out;
}

std::vector<std::pair<double, std::size_t>> threshold_sweep(
    const Corpus& corpus, const SmellModel& model, const std::vector<double>& thresholds) {
    for (double t : thresholds)
        if (!(t > 0.0 && t <= 1.0))
            throw UsageError("sweep thresholds must lie in (0, 1]");

    std::vector<double> probabilities;
    for (const ElementRef& el : corpus.elements(model.granularity)) {
        if (model.granularity == Granularity::method && !el.method->body) continue;
        const metrics::MetricVector vec = model.granularity == Granularity::method
                                              ? metrics::method_metrics(*el.method, *el.unit)
                                              : metrics::class_metrics(*el.type, corpus);
        probabilities.push_back(blr::predict(model, vec));
    }

    std::vector<std::pair<double, std::size_t>> out;
    out.reserve(thresholds.size());
    for (double t : thresholds) {
        std::size_t count = 0;
        for (double p : probabilities)
            if (p >= t) ++count;
        out.emplace_back(t, count);
    }
    return out;
}

}  // namespace smellcheck::detector
