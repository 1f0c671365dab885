#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smellcheck/blr.hpp"
#include "smellcheck/config.hpp"
#include "smellcheck/errors.hpp"
#include "smellcheck/model.hpp"
#include "smellcheck/tagging.hpp"

namespace smellcheck::store {

// One recorded false-positive/false-negative verdict (the audit trail; the
// matching labeled observation lands in the sample CSV separately).
struct FeedbackEvent {
    std::string timestamp;
    std::string smell;
    std::string application;
    std::string package_name;
    std::string class_name;
    std::string method;
    std::string verdict;  // "fp" | "fn"
};

// The project-local persistence layer: a directory of CSV sample files,
// JSON model documents with version history, an append-only feedback log
// and the config. Writers take an exclusive flock on <root>/lock; all file
// replacement goes through write-temp-and-rename.
class Store {
public:
    // Creates the layout (idempotent) and writes a default config when none
    // exists yet.
    static Store init(const std::filesystem::path& root, const std::string& application = "app");
    // Opens an existing store; throws MissingFile when not initialized.
    static Store open(const std::filesystem::path& root);
    static bool exists(const std::filesystem::path& root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path samples_path(const std::string& smell) const;
    std::filesystem::path model_path(const std::string& smell) const;
    std::filesystem::path feedback_path() const;
    std::filesystem::path config_path() const;

    Config load_config() const;
    void save_config(const Config& config) const;

    // Appends rows, skipping duplicates of (element, origin, timestamp);
    // returns the count actually written. The whole file is rewritten
    // atomically. Throws SchemaMismatch when a row's arity differs from the
    // smell's metric set.
    std::size_t append_rows(const SmellKind& smell, const std::vector<tagging::SampleRow>& rows);

    std::vector<tagging::SampleRow> load_rows(const std::string& smell) const;
    bool has_rows(const std::string& smell) const;

    // The sample file as a fitting table; metric names come from the header.
    blr::SampleTable load_table(const std::string& smell) const;

    // Version-checked model persistence: the previous version moves into
    // models/<smell>.history/ before the new document lands.
    void save_model(const SmellModel& model);
    SmellModel load_model(const std::string& smell) const;
    bool has_model(const std::string& smell) const;

    void log_feedback(const FeedbackEvent& event);
    std::vector<FeedbackEvent> load_feedback() const;

    // Sync watermarks (count of rows/events already pushed).
    long watermark(const std::string& key) const;
    void set_watermark(const std::string& key, long value);

private:
    explicit Store(std::filesystem::path root) : root_(std::move(root)) {}
    std::filesystem::path root_;
};

// Conversion helpers shared with the sync server.
blr::SampleTable rows_to_table(const std::vector<tagging::SampleRow>& rows,
                               const SmellKind& smell);

// Model JSON codec (schema documented in docs/formats.md).
std::string model_to_json(const SmellModel& model);
SmellModel model_from_json(const std::string& json_text);

// CSV codec for sample rows; exposed for the wire tests.
std::string rows_to_csv(const std::vector<tagging::SampleRow>& rows, const SmellKind& smell);
std::vector<tagging::SampleRow> rows_from_csv(const std::string& text,
                                              std::vector<std::string>* metric_names = nullptr);

namespace testing {
// When set, atomic file replacement aborts the process after writing the
// temporary file and before the rename; used by the crash-injection test.
extern bool crash_before_rename;
}  // namespace testing

}  // namespace smellcheck::store
