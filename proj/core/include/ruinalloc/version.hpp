#pragma once

#define RUINALLOC_VERSION "0.1.0"

namespace ruinalloc {

constexpr const char* version() { return RUINALLOC_VERSION; }

}  // namespace ruinalloc
