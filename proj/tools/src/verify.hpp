#pragma once

#include <cstdint>
#include <iosfwd>

namespace ruinalloc::cli {

// Runs the oracle cross-check suite: closed forms against high-precision
// reference values, Monte Carlo estimators against closed forms, and the
// determinism guarantee. Prints one [PASS]/[FAIL] line per check. Returns 0
// when everything passes, 2 otherwise.
int verify_command(std::uint64_t paths, std::ostream& out);

}  // namespace ruinalloc::cli
