#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rrsel/linalg.hpp"

namespace rrsel {

// Plain numeric CSV: one row per matrix row, comma-separated decimal
// literals, no header. Blank lines are skipped.
DenseMatrix read_matrix_csv(std::istream& in);
DenseMatrix read_matrix_csv(const std::filesystem::path& path);

/// A vector file may be a single column or a single row.
Vector read_vector_csv(std::istream& in);
Vector read_vector_csv(const std::filesystem::path& path);

/// Writes with 17 significant digits so that reading back is exact.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);

/// Shortest-exact decimal for a double (17 significant digits).
std::string format_double(double v);

/// Writes `content` to `path` through a temporary sibling and a rename, so a
/// failed write never leaves a partial file behind. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rrsel
