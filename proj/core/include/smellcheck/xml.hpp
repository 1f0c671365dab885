#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/model.hpp"
#include "smellcheck/tagging.hpp"

namespace smellcheck::wire {

// The XML exchange document (schema in docs/wire.xsd): sample rows and
// feedback events flowing client -> server, model documents flowing back.
struct Row {
    std::string application;
    std::string package_name;
    std::string class_name;
    std::string method;
    int label = 0;
    std::string origin;
    std::string timestamp;
    std::vector<std::pair<std::string, double>> metrics;

    bool operator==(const Row&) const = default;
};

struct SampleSet {
    std::string smell;
    std::vector<Row> rows;

    bool operator==(const SampleSet&) const = default;
};

struct FeedbackEvent {
    std::string smell;
    std::string application;
    std::string package_name;
    std::string class_name;
    std::string method;
    std::string verdict;  // "fp" | "fn"
    std::string timestamp;

    bool operator==(const FeedbackEvent&) const = default;
};

struct ExchangeDocument {
    int version = 1;
    std::vector<SampleSet> samples;
    std::vector<FeedbackEvent> feedback;
    std::optional<SmellModel> model;  // diagnostics do not travel
};

std::string encode(const ExchangeDocument& doc);
// Throws WireError on malformed XML or schema violations.
ExchangeDocument decode(const std::string& xml_text);

// Upload acknowledgement payload.
struct UploadResult {
    std::size_t accepted = 0;
    std::size_t duplicates = 0;
};
std::string encode_result(const UploadResult& r);
UploadResult decode_result(const std::string& xml_text);

// Conversion helpers between wire rows and store rows.
Row to_wire(const tagging::SampleRow& row, const std::vector<std::string>& metric_names);
tagging::SampleRow from_wire(const Row& row, const std::vector<std::string>& metric_names);

}  // namespace smellcheck::wire
