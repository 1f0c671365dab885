#include "smellcheck/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "smellcheck/metrics.hpp"
#include "util.hpp"

namespace smellcheck {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

struct TomlValue {
    enum class Kind { string, number, boolean, array } kind = Kind::string;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<std::string> array;  // array of strings
};

TomlValue parse_value(const std::string& raw, int line_no) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
    TomlValue out;
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
        out.kind = TomlValue::Kind::string;
        std::string s;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if (v[i] == '\\' && i + 2 < v.size()) {
                ++i;
                s += v[i] == 'n' ? '\n' : v[i];
            } else {
                s += v[i];
            }
        }
        out.str = s;
        return out;
    }
    if (v.front() == '[') {
        if (v.back() != ']')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
        out.kind = TomlValue::Kind::array;
        const std::string inner = trim(v.substr(1, v.size() - 2));
        if (inner.empty()) return out;
        for (std::string part : util::split(inner, ',')) {
            part = trim(part);
            if (part.size() >= 2 && part.front() == '"' && part.back() == '"')
                part = part.substr(1, part.size() - 2);
            if (part.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty array element");
            out.array.push_back(part);
        }
        return out;
    }
    if (v == "true" || v == "false") {
        out.kind = TomlValue::Kind::boolean;
        out.boolean = v == "true";
        return out;
    }
    bool ok = false;
    out.num = util::parse_number(v, &ok);
    if (!ok) throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + v + "'");
    out.kind = TomlValue::Kind::number;
    return out;
}

void validate_smell(const SmellKind& kind) {
    if (kind.metric_set.empty())
        throw ConfigError("smell '" + kind.name + "' declares no metrics");
    for (const std::string& m : kind.metric_set)
        if (!metrics::is_valid_metric(m, kind.granularity))
            throw ConfigError("smell '" + kind.name + "': metric '" + m + "' does not exist for " +
                              to_string(kind.granularity) + " granularity");
    if (!(kind.threshold > 0.0 && kind.threshold <= 1.0))
        throw ConfigError("smell '" + kind.name + "': threshold must lie in (0, 1]");
}

void upsert_smell(std::vector<SmellKind>& smells, SmellKind kind) {
    for (SmellKind& existing : smells)
        if (existing.name == kind.name) {
            existing = std::move(kind);
            return;
        }
    smells.push_back(std::move(kind));
}

}  // namespace

const SmellKind* Config::find_smell(std::string_view name) const {
    for (const SmellKind& k : smells)
        if (k.name == name) return &k;
    return nullptr;
}

const SmellKind& Config::require_smell(std::string_view name) const {
    const SmellKind* k = find_smell(name);
    if (!k) throw UnknownSmellKind(std::string(name), "smell registry");
    return *k;
}

std::vector<SmellKind> builtin_smells() {
    return {
        {"LongMethod", Granularity::method, {"MLOC", "NBD", "VG", "PAR", "LVAR"}, 0.5},
        {"LargeClass", Granularity::type, {"MLOC_total", "NOM", "NOA", "WMC", "LCOM"}, 0.5},
    };
}

Config default_config() {
    Config c;
    c.smells = builtin_smells();
    return c;
}

Config parse_config(const std::string& text) {
    Config config = default_config();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string section;           // "" for top level
    SmellKind pending;             // the smell being accumulated
    bool has_pending = false;
    bool pending_granularity = false;

    auto flush_pending = [&]() {
        if (!has_pending) return;
        if (!pending_granularity)
            throw ConfigError("smell '" + pending.name + "' declares no granularity");
        validate_smell(pending);
        upsert_smell(config.smells, pending);
        has_pending = false;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            flush_pending();
            section = trim(line.substr(1, line.size() - 2));
            if (section.rfind("smells.", 0) != 0)
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            pending = SmellKind{};
            pending.name = section.substr(7);
            if (pending.name.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty smell name");
            has_pending = true;
            pending_granularity = false;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const TomlValue value = parse_value(line.substr(eq + 1), line_no);

        if (section.empty()) {
            if (key == "application") config.application = value.str;
            else if (key == "server_url") config.server_url = value.str;
            else if (key == "client_id") config.client_id = value.str;
            else
                throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
        } else {
            if (key == "granularity") {
                pending.granularity = granularity_from_string(value.str);
                pending_granularity = true;
            } else if (key == "metrics") {
                pending.metric_set = value.array;
            } else if (key == "threshold") {
                pending.threshold = value.num;
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown smell key '" +
                                  key + "'");
            }
        }
    }
    flush_pending();
    return config;
}

std::string render_config(const Config& config) {
    std::ostringstream out;
    out << "application = \"" << config.application << "\"\n";
    out << "server_url = \"" << config.server_url << "\"\n";
    out << "client_id = \"" << config.client_id << "\"\n";
    for (const SmellKind& k : config.smells) {
        out << "\n[smells." << k.name << "]\n";
        out << "granularity = \"" << to_string(k.granularity) << "\"\n";
        out << "metrics = [";
        for (std::size_t i = 0; i < k.metric_set.size(); ++i)
            out << (i ? ", " : "") << "\"" << k.metric_set[i] << "\"";
        out << "]\n";
        out << "threshold = " << util::format_number(k.threshold) << "\n";
    }
    return out.str();
}

Config load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void save_config_file(const std::filesystem::path& path, const Config& config) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write config '" + path.string() + "'");
    out << render_config(config);
}

}  // namespace smellcheck
