#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ruinalloc/model.hpp"
#include "ruinalloc/model_json.hpp"
#include "ruinalloc/version.hpp"

namespace ruinalloc::cli {

// Full-precision, locale-independent double formatting; round-trips exactly.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (n == 1) {
    xs[0] = lo;
    return xs;
  }
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return xs;
}

inline std::vector<double> logspace(double exp_lo, double exp_hi, int n) {
  std::vector<double> xs = linspace(exp_lo, exp_hi, n);
  for (double& x : xs) x = std::pow(10.0, x);
  return xs;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Standard CSV preamble: tool version and model identity, no timestamps so
// output is bit-reproducible.
inline void write_preamble(std::ostream& os, const std::string& command,
                           const RiskModel* model) {
  os << "# ruinalloc " << version() << "\n";
  os << "# command: " << command << "\n";
  if (model != nullptr) {
    os << "# model_hash: " << hash_hex(model_hash(*model)) << "\n";
  }
}

}  // namespace ruinalloc::cli
