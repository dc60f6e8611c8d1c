#pragma once

#include "l1l2/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace l1l2 {

/// Shortest decimal form that reads back to the same double ("%.17g"-equivalent, locale-free).
std::string format_exact(double v);

/// Nine significant digits, locale-free.
std::string format_9g(double v);

/// Fixed notation with `digits` decimals, locale-free.
std::string format_fixed(double v, int digits);

/// Locale-independent parse of a full token; throws std::invalid_argument with the token on failure.
double parse_double(std::string_view s);

/// Comma-separated list of numbers, e.g. "3,1,0".
std::vector<double> parse_double_list(std::string_view s);

/// Matrix file: first line "rows,cols", then one comma-separated line per row.
Mat<double> read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Mat<double>& A);

/// Vectors use the same format as n x 1 matrices.
Vec<double> read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Vec<double>& v);

}  // namespace l1l2
