#pragma once

#include <istream>
#include <string>

#include "sgmres/sparse.hpp"

namespace sgmres {

/// Reads a Matrix Market coordinate-format matrix and returns the full
/// (unfolded) square matrix. Qualifiers real|complex|integer|pattern and
/// general|symmetric|hermitian|skew-symmetric are accepted; symmetric
/// variants are mirrored with the appropriate conjugation or sign, pattern
/// entries become 1, real/integer values are promoted to complex, and
/// duplicate entries are summed. Throws ParseError naming the offending line
/// on malformed input.
SparseMatrix read_matrix_market(std::istream& in);

/// Convenience wrapper; throws ConfigError when the file cannot be opened.
SparseMatrix read_matrix_market_file(const std::string& path);

}  // namespace sgmres
