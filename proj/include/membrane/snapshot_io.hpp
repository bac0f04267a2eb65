#pragma once

#include "membrane/solutions.hpp"

#include <string>

namespace membrane {

// Snapshot file: one JSON header line terminated by '\n', then the raw
// payload: for every component of X, then of Xdot when present, n1*n2
// float64 values in row-major order, little-endian. See docs/formats.md.
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace membrane
