#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/smell_kind.hpp"

namespace smellcheck {

// Project configuration: the smell registry plus store/server settings.
// Persisted as a small TOML document inside the store directory.
struct Config {
    std::string application = "app";
    std::string server_url;
    std::string client_id;
    std::vector<SmellKind> smells;

    const SmellKind* find_smell(std::string_view name) const;
    const SmellKind& require_smell(std::string_view name) const;  // UnknownSmellKind
};

// The shipped smell catalog: LongMethod over the method metric set and
// LargeClass over a class metric subset.
std::vector<SmellKind> builtin_smells();

Config default_config();

// TOML subset: top-level key = value, [smells.<Name>] sections with
// granularity/metrics/threshold. Declared smells override built-ins of the
// same name. Throws ConfigError on malformed input or invalid metric names.
Config parse_config(const std::string& text);
std::string render_config(const Config& config);

Config load_config_file(const std::filesystem::path& path);
void save_config_file(const std::filesystem::path& path, const Config& config);

}  // namespace smellcheck
