#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smellcheck::cli {

// Entry point behind the smellcheck binary; also callable in-process by
// tests. Exit codes: 0 clean, 1 findings were reported, 2 usage or runtime
// error. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace smellcheck::cli
