#pragma once

#include <hcurl/sparse.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hcurl {

/// Coordinate real general format, 1-based indices.
void write_matrix_market(std::ostream& os, const SparseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);

/// Reads coordinate real general or symmetric files; symmetric files are expanded.
SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

} // namespace hcurl
