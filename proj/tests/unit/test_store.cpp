#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>

#include "helpers.hpp"
#include "smellcheck/store.hpp"

using namespace smellcheck;

namespace {

tagging::SampleRow make_row(const std::string& method, std::vector<double> values, int label,
                            const std::string& timestamp) {
    tagging::SampleRow row;
    row.application = "ApacheCommonsCLI1.2";
    row.package_name = "org.apache.commons.cli";
    row.class_name = "GnuParser";
    row.method = method;
    row.values = std::move(values);
    row.label = label;
    row.origin = tagging::Origin::expert;
    row.timestamp = timestamp;
    return row;
}

std::vector<tagging::SampleRow> parser_rows() {
    return {
        make_row("flatten", {69, 5, 11, 3, 9}, 0, "2026-01-01T00:00:00.000000001Z"),
        make_row("parse", {67, 5, 14, 4, 12}, 1, "2026-01-01T00:00:00.000000002Z"),
        make_row("renderOptions", {59, 4, 10, 5, 19}, 1, "2026-01-01T00:00:00.000000003Z"),
        make_row("burstToken", {46, 4, 6, 2, 5}, 0, "2026-01-01T00:00:00.000000004Z"),
    };
}

SmellKind long_method() {
    return {"LongMethod", Granularity::method, {"MLOC", "NBD", "VG", "PAR", "LVAR"}, 0.5};
}

}  // namespace

TEST_CASE("init creates the layout; open requires it") {
    testsupport::TempDir dir;
    const auto root = dir.path() / ".smellchecker";
    CHECK_THROWS_AS(store::Store::open(root), MissingFile);

    store::Store st = store::Store::init(root, "MyApp");
    CHECK(std::filesystem::is_directory(root / "samples"));
    CHECK(std::filesystem::is_directory(root / "models"));
    CHECK(std::filesystem::exists(root / "config.toml"));
    CHECK(std::filesystem::exists(root / "feedback.log"));

    const Config config = st.load_config();
    CHECK(config.application == "MyApp");
    CHECK(!config.client_id.empty());
    CHECK(config.find_smell("LongMethod") != nullptr);
    CHECK(config.find_smell("LargeClass") != nullptr);
}

TEST_CASE("append_rows writes the sample schema; duplicates are rejected") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");

    CHECK(st.append_rows(long_method(), {}) == 0);
    CHECK(!st.has_rows("LongMethod"));

    CHECK(st.append_rows(long_method(), parser_rows()) == 4);
    const std::string csv = testsupport::read_file(st.samples_path("LongMethod"));
    const std::string expected_header =
        "application,package,class,method,MLOC,NBD,VG,PAR,LVAR,label,origin,timestamp";
    CHECK(csv.substr(0, expected_header.size()) == expected_header);
    CHECK(csv.find("GnuParser,flatten,69,5,11,3,9,0,expert") != std::string::npos);

    // Exact duplicates (element, origin, timestamp) are rejected.
    CHECK(st.append_rows(long_method(), parser_rows()) == 0);
    CHECK(st.load_rows("LongMethod").size() == 4);

    // Same element, new timestamp: a fresh observation.
    auto again = make_row("flatten", {69, 5, 11, 3, 9}, 1, "2026-01-02T00:00:00.000000001Z");
    CHECK(st.append_rows(long_method(), {again}) == 1);

    // Arity mismatch.
    auto bad = make_row("broken", {1, 2, 3, 4}, 0, "2026-01-03T00:00:00.000000001Z");
    CHECK_THROWS_AS(st.append_rows(long_method(), {bad}), SchemaMismatch);
}

TEST_CASE("load_table round-trips and reports corrupted lines") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");
    st.append_rows(long_method(), parser_rows());

    const blr::SampleTable table = st.load_table("LongMethod");
    CHECK(table.metric_names == std::vector<std::string>{"MLOC", "NBD", "VG", "PAR", "LVAR"});
    REQUIRE(table.size() == 4);
    CHECK(table.rows[0].x == std::vector<double>{69, 5, 11, 3, 9});
    CHECK(table.rows[1].y == 1);

    // Round-trip through the CSV codec is lossless.
    const auto rows = st.load_rows("LongMethod");
    const std::string csv = store::rows_to_csv(rows, long_method());
    const auto rows2 = store::rows_from_csv(csv);
    REQUIRE(rows2.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows2[i].element_key() == rows[i].element_key());
        CHECK(rows2[i].values == rows[i].values);
        CHECK(rows2[i].label == rows[i].label);
    }

    // Corrupt line 3 of the data (line 4 of the file counting the header).
    std::string text = testsupport::read_file(st.samples_path("LongMethod"));
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }
    lines[2] = "garbage,without,enough,columns";
    std::string corrupted;
    for (const auto& l : lines) corrupted += l + "\n";
    testsupport::write_file(st.samples_path("LongMethod"), corrupted);
    try {
        st.load_rows("LongMethod");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }

    CHECK_THROWS_AS(st.load_rows("Nothing"), MissingFile);
}

TEST_CASE("model save/load: versioning, history, bit-exact beta") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");
    CHECK_THROWS_AS(st.load_model("LongMethod"), MissingModel);

    SmellModel v1;
    v1.smell = "LongMethod";
    v1.granularity = Granularity::method;
    v1.metric_names = {"flag"};
    v1.beta = {-0.6931471805599453, 1.3862943611198906};
    v1.threshold_default = 0.5;
    v1.sample_size = 60;
    v1.version = 1;
    v1.calibrated_at = "2026-01-01T00:00:00.000000000Z";
    st.save_model(v1);

    const SmellModel loaded = st.load_model("LongMethod");
    CHECK(loaded.beta[0] == v1.beta[0]);  // bit-exact
    CHECK(loaded.beta[1] == v1.beta[1]);
    CHECK(loaded.version == 1);
    CHECK(loaded.metric_names == v1.metric_names);

    // Saving the same version again conflicts.
    CHECK_THROWS_AS(st.save_model(v1), VersionConflict);

    SmellModel v2 = v1;
    v2.version = 2;
    v2.beta = {-0.7, 1.4};
    st.save_model(v2);
    CHECK(st.load_model("LongMethod").version == 2);
    CHECK(std::filesystem::exists(dir.path() / "s" / "models" / "LongMethod.history" /
                                  "LongMethod.v1.json"));
    const SmellModel archived = store::model_from_json(testsupport::read_file(
        dir.path() / "s" / "models" / "LongMethod.history" / "LongMethod.v1.json"));
    CHECK(archived.beta[1] == v1.beta[1]);
}

TEST_CASE("feedback log is append-only and parseable") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");

    const auto size_of = [&] {
        return std::filesystem::file_size(st.feedback_path());
    };
    const auto s0 = size_of();
    st.log_feedback({"2026-01-01T00:00:00.000000001Z", "LongMethod", "App", "p", "C", "m", "fp"});
    const auto s1 = size_of();
    CHECK(s1 > s0);
    st.log_feedback({"2026-01-01T00:00:00.000000002Z", "LongMethod", "App", "p", "C", "m", "fn"});
    CHECK(size_of() > s1);

    const auto events = st.load_feedback();
    REQUIRE(events.size() == 2);
    CHECK(events[0].verdict == "fp");
    CHECK(events[1].verdict == "fn");
}

TEST_CASE("watermarks persist") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");
    CHECK(st.watermark("samples.LongMethod") == 0);
    st.set_watermark("samples.LongMethod", 17);
    CHECK(st.watermark("samples.LongMethod") == 17);
}

TEST_CASE("a writer killed before rename leaves the store intact") {
    testsupport::TempDir dir;
    store::Store st = store::Store::init(dir.path() / "s");
    st.append_rows(long_method(), parser_rows());
    const std::string before = testsupport::read_file(st.samples_path("LongMethod"));

    const pid_t pid = fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
        // Child: crash between the temp write and the rename.
        store::testing::crash_before_rename = true;
        auto extra = make_row("late", {1, 1, 1, 1, 1}, 0, "2026-02-02T00:00:00.000000001Z");
        try {
            st.append_rows(long_method(), {extra});
        } catch (...) {
        }
        ::_exit(7);  // not reached when the crash hook fires
    }
    int status = 0;
    REQUIRE(waitpid(pid, &status, 0) == pid);
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 42);  // the crash hook's exit code

    // The visible file is byte-identical and still loads.
    CHECK(testsupport::read_file(st.samples_path("LongMethod")) == before);
    CHECK(st.load_rows("LongMethod").size() == 4);
    // The orphan temp file exists, proving the writer died mid-operation.
    CHECK(std::filesystem::exists(st.samples_path("LongMethod").string() + ".tmp"));
}
