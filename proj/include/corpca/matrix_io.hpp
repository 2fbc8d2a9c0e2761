#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "corpca/linalg.hpp"

namespace corpca {

// Plain-text matrix format: first line "rows cols", then one line per row with
// space-separated entries written to 17 significant digits, so a write/read
// cycle reproduces every double exactly.

void write_matrix(std::ostream& out, const RealMatrix& m);
RealMatrix read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const RealMatrix& m);
RealMatrix load_matrix(const std::filesystem::path& path);

/// Shortest-form-independent rendering used by every text output: 17 significant digits.
std::string format_double(double v);

}  // namespace corpca
