#include "smellcheck/store.hpp"

#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "util.hpp"

namespace smellcheck::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace testing {
bool crash_before_rename = false;
}

namespace {

std::string read_file(const fs::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile(std::string(what) + " '" + path.string() + "' does not exist");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// write-temp-and-rename; a crashed writer leaves only a stale *.tmp file.
void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("short write to '" + tmp.string() + "'");
    }
    if (testing::crash_before_rename) ::_exit(42);
    fs::rename(tmp, path);
}

// Exclusive advisory lock held for the duration of one mutating operation.
class WriterLock {
public:
    explicit WriterLock(const fs::path& root) {
        const fs::path lock_path = root / "lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw IoError("cannot open lock file '" + lock_path.string() + "'");
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw IoError("cannot lock store '" + root.string() + "'");
        }
    }
    ~WriterLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    WriterLock(const WriterLock&) = delete;
    WriterLock& operator=(const WriterLock&) = delete;

private:
    int fd_ = -1;
};

std::vector<std::string> csv_header(const SmellKind& smell) {
    std::vector<std::string> cols = {"application", "package", "class", "method"};
    cols.insert(cols.end(), smell.metric_set.begin(), smell.metric_set.end());
    cols.push_back("label");
    cols.push_back("origin");
    cols.push_back("timestamp");
    return cols;
}

std::string row_key(const tagging::SampleRow& row) {
    return row.element_key() + "|" + to_string(row.origin) + "|" + row.timestamp;
}

}  // namespace

std::string rows_to_csv(const std::vector<tagging::SampleRow>& rows, const SmellKind& smell) {
    std::ostringstream out;
    out << util::join(csv_header(smell), ',') << "\n";
    for (const tagging::SampleRow& row : rows) {
        if (row.values.size() != smell.metric_set.size())
            throw SchemaMismatch("row for '" + row.element_key() + "' has " +
                                 std::to_string(row.values.size()) + " metrics, smell '" +
                                 smell.name + "' needs " +
                                 std::to_string(smell.metric_set.size()));
        std::vector<std::string> cols = {row.application, row.package_name, row.class_name,
                                         row.method};
        for (double v : row.values) cols.push_back(util::format_number(v));
        cols.push_back(std::to_string(row.label));
        cols.push_back(to_string(row.origin));
        cols.push_back(row.timestamp);
        out << util::join(cols, ',') << "\n";
    }
    return out.str();
}

std::vector<tagging::SampleRow> rows_from_csv(const std::string& text,
                                              std::vector<std::string>* metric_names) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing CSV header");
    const std::vector<std::string> header = util::split(line, ',');
    if (header.size() < 7 || header[0] != "application" || header[1] != "package" ||
        header[2] != "class" || header[3] != "method" || header[header.size() - 3] != "label" ||
        header[header.size() - 2] != "origin" || header.back() != "timestamp")
        throw ParseError(1, "unexpected CSV header");
    const std::size_t n_metrics = header.size() - 7;
    if (metric_names)
        metric_names->assign(header.begin() + 4, header.begin() + 4 + n_metrics);

    std::vector<tagging::SampleRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cols = util::split(line, ',');
        if (cols.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                          std::to_string(cols.size()));
        tagging::SampleRow row;
        row.application = cols[0];
        row.package_name = cols[1];
        row.class_name = cols[2];
        row.method = cols[3];
        for (std::size_t k = 0; k < n_metrics; ++k) {
            bool ok = false;
            const double v = util::parse_number(cols[4 + k], &ok);
            if (!ok) throw ParseError(line_no, "bad metric value '" + cols[4 + k] + "'");
            row.values.push_back(v);
        }
        const std::string& label = cols[header.size() - 3];
        if (label != "0" && label != "1") throw ParseError(line_no, "label must be 0 or 1");
        row.label = label == "1" ? 1 : 0;
        try {
            row.origin = tagging::origin_from_string(cols[header.size() - 2]);
        } catch (const ParseError&) {
            throw ParseError(line_no, "bad origin '" + cols[header.size() - 2] + "'");
        }
        row.timestamp = cols.back();
        rows.push_back(std::move(row));
    }
    return rows;
}

blr::SampleTable rows_to_table(const std::vector<tagging::SampleRow>& rows,
                               const SmellKind& smell) {
    blr::SampleTable table;
    table.metric_names = smell.metric_set;
    table.provenance = "smell:" + smell.name;
    for (const tagging::SampleRow& row : rows) {
        if (row.values.size() != smell.metric_set.size())
            throw SchemaMismatch("row arity mismatch for smell '" + smell.name + "'");
        table.add(row.values, row.label);
    }
    return table;
}

// --- model JSON ---

std::string model_to_json(const SmellModel& model) {
    json diag;
    diag["normality"] = json::array();
    for (const auto& n : model.diagnostics.normality)
        diag["normality"].push_back(
            {{"metric", n.metric}, {"w", n.w}, {"p", n.p}, {"error", n.error}});
    diag["correlations"] = json::array();
    for (const auto& c : model.diagnostics.correlations)
        diag["correlations"].push_back(
            {{"a", c.a}, {"b", c.b}, {"method", c.method}, {"r", c.r}});
    diag["constant_dropped"] = model.diagnostics.constant_dropped;
    diag["vif_dropped"] = json::array();
    for (const auto& d : model.diagnostics.vif_dropped)
        diag["vif_dropped"].push_back({{"metric", d.metric}, {"vif", d.vif}, {"exact", d.exact}});
    diag["vif"] = json::array();
    for (const auto& [name, v] : model.diagnostics.vif)
        diag["vif"].push_back({{"metric", name}, {"value", v}});
    diag["selection_dropped"] = json::array();
    for (const auto& d : model.diagnostics.selection_dropped)
        diag["selection_dropped"].push_back({{"metric", d.metric}, {"p", d.p}});
    diag["hosmer_lemeshow"] = {{"run", model.diagnostics.hosmer_lemeshow_run},
                               {"statistic", model.diagnostics.hosmer_lemeshow_stat},
                               {"p", model.diagnostics.hosmer_lemeshow_p}};
    diag["ridge"] = model.diagnostics.ridge;

    const json doc = {
        {"schema", 1},
        {"smell", model.smell},
        {"granularity", to_string(model.granularity)},
        {"metrics", model.metric_names},
        {"beta", model.beta},
        {"threshold", model.threshold_default},
        {"sample_size", model.sample_size},
        {"version", model.version},
        {"calibrated_at", model.calibrated_at},
        {"diagnostics", diag},
    };
    return doc.dump(2) + "\n";
}

SmellModel model_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("model JSON: ") + e.what());
    }
    try {
        SmellModel m;
        m.smell = doc.at("smell").get<std::string>();
        m.granularity = granularity_from_string(doc.at("granularity").get<std::string>());
        m.metric_names = doc.at("metrics").get<std::vector<std::string>>();
        m.beta = doc.at("beta").get<std::vector<double>>();
        m.threshold_default = doc.at("threshold").get<double>();
        m.sample_size = doc.at("sample_size").get<long>();
        m.version = doc.at("version").get<int>();
        m.calibrated_at = doc.at("calibrated_at").get<std::string>();
        if (m.beta.size() != m.metric_names.size() + 1)
            throw ParseError(0, "model beta/metric arity mismatch");
        if (doc.contains("diagnostics")) {
            const json& diag = doc["diagnostics"];
            for (const json& n : diag.value("normality", json::array()))
                m.diagnostics.normality.push_back({n.at("metric").get<std::string>(),
                                                   n.at("w").get<double>(), n.at("p").get<double>(),
                                                   n.at("error").get<bool>()});
            for (const json& c : diag.value("correlations", json::array()))
                m.diagnostics.correlations.push_back(
                    {c.at("a").get<std::string>(), c.at("b").get<std::string>(),
                     c.at("method").get<std::string>(), c.at("r").get<double>()});
            m.diagnostics.constant_dropped =
                diag.value("constant_dropped", std::vector<std::string>{});
            for (const json& d : diag.value("vif_dropped", json::array()))
                m.diagnostics.vif_dropped.push_back({d.at("metric").get<std::string>(),
                                                     d.at("vif").get<double>(),
                                                     d.at("exact").get<bool>()});
            for (const json& v : diag.value("vif", json::array()))
                m.diagnostics.vif.emplace_back(v.at("metric").get<std::string>(),
                                               v.at("value").get<double>());
            for (const json& d : diag.value("selection_dropped", json::array()))
                m.diagnostics.selection_dropped.push_back(
                    {d.at("metric").get<std::string>(), d.at("p").get<double>()});
            if (diag.contains("hosmer_lemeshow")) {
                m.diagnostics.hosmer_lemeshow_run = diag["hosmer_lemeshow"].value("run", false);
                m.diagnostics.hosmer_lemeshow_stat =
                    diag["hosmer_lemeshow"].value("statistic", 0.0);
                m.diagnostics.hosmer_lemeshow_p = diag["hosmer_lemeshow"].value("p", 1.0);
            }
            m.diagnostics.ridge = diag.value("ridge", 0.0);
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("model JSON: ") + e.what());
    }
}

// --- Store ---

bool Store::exists(const fs::path& root) { return fs::is_directory(root) && fs::exists(root / "config.toml"); }

Store Store::init(const fs::path& root, const std::string& application) {
    fs::create_directories(root);
    fs::create_directories(root / "samples");
    fs::create_directories(root / "models");
    fs::create_directories(root / "sync");
    Store store(root);
    if (!fs::exists(store.config_path())) {
        Config config = default_config();
        config.application = application;
        config.client_id = util::random_token();
        save_config_file(store.config_path(), config);
    }
    if (!fs::exists(store.feedback_path())) {
        std::ofstream out(store.feedback_path(), std::ios::binary | std::ios::app);
    }
    return store;
}

Store Store::open(const fs::path& root) {
    if (!exists(root))
        throw MissingFile("store '" + root.string() + "' is not initialized (run init)");
    return Store(root);
}

fs::path Store::samples_path(const std::string& smell) const {
    return root_ / "samples" / (smell + ".csv");
}
fs::path Store::model_path(const std::string& smell) const {
    return root_ / "models" / (smell + ".json");
}
fs::path Store::feedback_path() const { return root_ / "feedback.log"; }
fs::path Store::config_path() const { return root_ / "config.toml"; }

Config Store::load_config() const { return load_config_file(config_path()); }

void Store::save_config(const Config& config) const {
    WriterLock lock(root_);
    save_config_file(config_path(), config);
}

std::size_t Store::append_rows(const SmellKind& smell,
                               const std::vector<tagging::SampleRow>& rows) {
    if (rows.empty()) return 0;
    WriterLock lock(root_);

    std::vector<tagging::SampleRow> existing;
    if (fs::exists(samples_path(smell.name))) existing = load_rows(smell.name);

    std::set<std::string> keys;
    for (const tagging::SampleRow& row : existing) keys.insert(row_key(row));

    std::size_t written = 0;
    for (const tagging::SampleRow& row : rows) {
        if (row.values.size() != smell.metric_set.size())
            throw SchemaMismatch("row for '" + row.element_key() + "' has " +
                                 std::to_string(row.values.size()) + " metrics, smell '" +
                                 smell.name + "' needs " +
                                 std::to_string(smell.metric_set.size()));
        if (!keys.insert(row_key(row)).second) continue;  // duplicate rejected
        existing.push_back(row);
        ++written;
    }
    if (written > 0) atomic_write(samples_path(smell.name), rows_to_csv(existing, smell));
    return written;
}

std::vector<tagging::SampleRow> Store::load_rows(const std::string& smell) const {
    return rows_from_csv(read_file(samples_path(smell), "sample file"));
}

bool Store::has_rows(const std::string& smell) const { return fs::exists(samples_path(smell)); }

blr::SampleTable Store::load_table(const std::string& smell) const {
    std::vector<std::string> metric_names;
    const std::vector<tagging::SampleRow> rows =
        rows_from_csv(read_file(samples_path(smell), "sample file"), &metric_names);
    blr::SampleTable table;
    table.metric_names = metric_names;
    table.provenance = "store:" + smell;
    for (const tagging::SampleRow& row : rows) table.add(row.values, row.label);
    return table;
}

void Store::save_model(const SmellModel& model) {
    WriterLock lock(root_);
    const fs::path path = model_path(model.smell);
    if (fs::exists(path)) {
        const SmellModel current = model_from_json(read_file(path, "model"));
        if (model.version <= current.version)
            throw VersionConflict("model '" + model.smell + "' v" + std::to_string(model.version) +
                                  " does not supersede stored v" +
                                  std::to_string(current.version));
        const fs::path history = root_ / "models" / (model.smell + ".history");
        fs::create_directories(history);
        fs::rename(path,
                   history / (model.smell + ".v" + std::to_string(current.version) + ".json"));
    }
    atomic_write(path, model_to_json(model));
}

SmellModel Store::load_model(const std::string& smell) const {
    const fs::path path = model_path(smell);
    if (!fs::exists(path)) throw MissingModel("no calibrated model for smell '" + smell + "'");
    return model_from_json(read_file(path, "model"));
}

bool Store::has_model(const std::string& smell) const { return fs::exists(model_path(smell)); }

void Store::log_feedback(const FeedbackEvent& event) {
    WriterLock lock(root_);
    std::ofstream out(feedback_path(), std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to '" + feedback_path().string() + "'");
    out << util::join({event.timestamp, event.smell, event.application, event.package_name,
                       event.class_name, event.method, event.verdict},
                      ',')
        << "\n";
}

std::vector<FeedbackEvent> Store::load_feedback() const {
    std::vector<FeedbackEvent> events;
    std::ifstream in(feedback_path(), std::ios::binary);
    if (!in) return events;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cols = util::split(line, ',');
        if (cols.size() != 7) throw ParseError(line_no, "bad feedback entry");
        events.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]});
    }
    return events;
}

long Store::watermark(const std::string& key) const {
    const fs::path path = root_ / "sync" / (key + ".watermark");
    std::ifstream in(path);
    long v = 0;
    if (in >> v) return v;
    return 0;
}

void Store::set_watermark(const std::string& key, long value) {
    fs::create_directories(root_ / "sync");
    atomic_write(root_ / "sync" / (key + ".watermark"), std::to_string(value) + "\n");
}

}  // namespace smellcheck::store
