#pragma once

#include <string>

#include "smellcheck/errors.hpp"

namespace smellcheck {

enum class Granularity { method, type };

inline std::string to_string(Granularity g) {
    return g == Granularity::method ? "method" : "type";
}

inline Granularity granularity_from_string(const std::string& s) {
    if (s == "method") return Granularity::method;
    if (s == "type") return Granularity::type;
    throw ConfigError("unknown granularity '" + s + "' (expected method|type)");
}

}  // namespace smellcheck
