#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "smellcheck/blr.hpp"
#include "smellcheck/source_model.hpp"

namespace testsupport {

inline std::filesystem::path fixture_dir() { return SMELLCHECK_FIXTURE_DIR; }

inline std::filesystem::path fixture_java_dir() { return fixture_dir() / "java"; }

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 1000; ++i) {
            auto candidate = base / ("smellcheck_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// The grouped 2x2 dataset: x=0 has 10 positives / 20 negatives, x=1 has
// 20 positives / 10 negatives. Closed-form MLE: b0 = ln(10/20), b1 = ln 4.
inline smellcheck::blr::SampleTable grouped_2x2_table() {
    smellcheck::blr::SampleTable t;
    t.metric_names = {"flag"};
    for (int i = 0; i < 10; ++i) t.add({0.0}, 1);
    for (int i = 0; i < 20; ++i) t.add({0.0}, 0);
    for (int i = 0; i < 20; ++i) t.add({1.0}, 1);
    for (int i = 0; i < 10; ++i) t.add({1.0}, 0);
    return t;
}

// Four methods' VG values with labels (11,0), (14,1), (10,1), (6,0).
// Labels are non-monotone in VG, so the MLE is finite.
inline smellcheck::blr::SampleTable four_method_vg() {
    smellcheck::blr::SampleTable t;
    t.metric_names = {"VG"};
    t.add({11.0}, 0);
    t.add({14.0}, 1);
    t.add({10.0}, 1);
    t.add({6.0}, 0);
    return t;
}

// A two-regressor grouped table with both labels at every x point, so no
// hyperplane separates it.
inline smellcheck::blr::SampleTable grouped_two_regressor_table() {
    smellcheck::blr::SampleTable t;
    t.metric_names = {"a", "b"};
    auto block = [&](double x1, double x2, int pos, int neg) {
        for (int i = 0; i < pos; ++i) t.add({x1, x2}, 1);
        for (int i = 0; i < neg; ++i) t.add({x1, x2}, 0);
    };
    block(0, 0, 3, 7);
    block(1, 0, 6, 4);
    block(0, 1, 5, 5);
    block(1, 1, 8, 2);
    return t;
}

inline smellcheck::Corpus load_fixture_corpus() {
    return smellcheck::load_corpus({fixture_java_dir()});
}

}  // namespace testsupport
