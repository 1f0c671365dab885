#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/metrics.hpp"
#include "smellcheck/smell_kind.hpp"
#include "smellcheck/source_model.hpp"

namespace smellcheck::tagging {

enum class Origin { expert, feedback_fp, feedback_fn };

std::string to_string(Origin origin);
Origin origin_from_string(const std::string& s);

// One @CodeSmell annotation read from source.
struct SmellTag {
    std::string element_id;
    std::string smell;
    std::string description;
    std::string file_path;
    int line = 0;
};

// One labeled observation, identity columns plus the smell's metric values.
struct SampleRow {
    std::string application;
    std::string package_name;
    std::string class_name;
    std::string method;  // empty at type granularity
    std::vector<double> values;  // smell.metric_set order
    int label = 0;
    Origin origin = Origin::expert;
    std::string timestamp;

    std::string element_key() const {
        return application + "/" + package_name + "/" + class_name + "/" + method;
    }
};

struct TagIssue {
    std::string file_path;
    int line = 0;
    std::string message;
};

// All @CodeSmell tags of the corpus. With `issues` null, unknown smell kinds
// and granularity mismatches throw; otherwise they are collected and the
// offending annotation is skipped.
std::vector<SmellTag> read_tags(const Corpus& corpus, const std::vector<SmellKind>& registry,
                                std::vector<TagIssue>* issues = nullptr);

// Pure rewrite: inserts the annotation line for `element` directly above its
// declaration, preserving every other byte. Errors: AlreadyTagged.
std::string insert_tag_text(const CompilationUnit& unit, const ElementRef& element,
                            const SmellKind& smell, std::string_view description);

// Pure rewrite: removes the @CodeSmell annotation of `smell` from the
// element. Errors: TagNotFound.
std::string remove_tag_text(const CompilationUnit& unit, const ElementRef& element,
                            const SmellKind& smell);

struct TagFileResult {
    std::filesystem::path file;
    std::string new_content;
    bool written = false;
};

// Locates the element in the corpus, rewrites its file and (unless dry_run)
// writes it back atomically. Errors: ElementNotFound, AlreadyTagged/TagNotFound.
TagFileResult write_tag(const Corpus& corpus, std::string_view element_id, const SmellKind& smell,
                        std::string_view description, bool dry_run = false);
TagFileResult remove_tag(const Corpus& corpus, std::string_view element_id, const SmellKind& smell,
                         bool dry_run = false);

// Builds the calibration sample for one smell over a tagged corpus: one row
// per element of the smell's granularity, label 1 iff tagged. Untagged
// elements are explicit negatives (calibration-corpus semantics). Elements
// without a body are skipped at method granularity.
std::vector<SampleRow> build_sample(const Corpus& corpus, const SmellKind& smell,
                                    const std::string& application,
                                    const std::vector<SmellKind>& registry);

enum class Verdict { false_positive, false_negative };

// Computes the element's metrics and returns the feedback observation:
// label 0 for a false positive, 1 for a false negative.
SampleRow record_feedback(const Corpus& corpus, std::string_view element_id,
                          const SmellKind& smell, Verdict verdict,
                          const std::string& application);

}  // namespace smellcheck::tagging
