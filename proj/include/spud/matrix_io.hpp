#pragma once

#include <iosfwd>
#include <string>

#include "spud/matrix.hpp"

namespace spud {

/// Text format: a "rows cols" header line, then one line per row with
/// whitespace-separated entries at 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Throws ParseError (with 1-based line number) on malformed input.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

/// Shortest decimal that round-trips, or fixed 17 significant digits.
std::string format_double(double v, bool round_trip_shortest = true);

}  // namespace spud
