#pragma once

// JSON model configuration codec. The schema is strict: unknown fields are
// rejected, and a parsed model must pass validate().
//
// Brownian:
//   {"type": "brownian", "drift": [r_1, ...], "cov": [[...], ...]}
// or with the covariance given as standard deviations plus correlation:
//   {"type": "brownian", "drift": [...], "sd": [...], "corr": [[...], ...]}
//
// Compound Poisson with shared exponential claims:
//   {"type": "cp_exp", "premium": [...], "intensity": [...], "claim_rate": x}

#include <cstdint>
#include <string>
#include <string_view>

#include "ruinalloc/model.hpp"

namespace ruinalloc {

// Parse a model from JSON text. Throws ParseError (with line/column) on
// malformed input or schema violations, ValidationError on a well-formed but
// invalid model.
RiskModel model_from_json_text(std::string_view text);

// Canonical serialization: field order fixed, doubles emitted with enough
// digits to round-trip bit-exactly.
std::string model_to_json_text(const RiskModel& model, int indent = 2);

// FNV-1a over the canonical serialization; stable across runs, used to stamp
// CSV metadata.
std::uint64_t model_hash(const RiskModel& model);

}  // namespace ruinalloc
