#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ruinalloc::cli {

// Runs the tool with the given arguments (excluding the program name),
// writing normal output to `out` and diagnostics to `err`. Returns the
// process exit code: 0 on success, 1 on parse/validation problems, 2 on
// numerical failures (no Cramer root, undefined allocation, ...).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ruinalloc::cli
