#pragma once

#include <iosfwd>
#include <string>

namespace ruinalloc::cli {

// Emits the worked-example figure datasets into out_dir, one CSV per figure,
// named by content (allocation fractions against horizon, capital, or VaR
// level for the continuous and claims books). Returns a process exit code.
int figures_command(const std::string& out_dir, std::ostream& err);

}  // namespace ruinalloc::cli
