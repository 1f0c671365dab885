#include "util.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <random>

namespace smellcheck::util {

std::string format_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_number(const std::string& text, bool* ok) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    *ok = end != text.c_str() && *end == '\0' && !text.empty();
    return v;
}

std::string now_iso8601() {
    static std::atomic<std::int64_t> last_ns{0};

    std::timespec ts{};
    std::timespec_get(&ts, TIME_UTC);
    std::int64_t ns = static_cast<std::int64_t>(ts.tv_sec) * 1000000000 + ts.tv_nsec;

    // Enforce strict monotonicity across calls in this process.
    std::int64_t prev = last_ns.load();
    do {
        if (ns <= prev) ns = prev + 1;
    } while (!last_ns.compare_exchange_weak(prev, ns));

    const std::time_t sec = ns / 1000000000;
    const long frac = static_cast<long>(ns % 1000000000);
    std::tm tm{};
    gmtime_r(&sec, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%09ldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = line.find(sep, start);
        if (at == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, at - start));
        start = at + 1;
    }
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string random_token(std::size_t bytes) {
    std::random_device rd;
    std::string out;
    static const char* hex = "0123456789abcdef";
    for (std::size_t i = 0; i < bytes; ++i) {
        const unsigned v = rd() & 0xff;
        out += hex[v >> 4];
        out += hex[v & 0xf];
    }
    return out;
}

}  // namespace smellcheck::util
