#pragma once

#include <string>
#include <vector>

#include "sgl/core.hpp"

namespace sgl {

/// Headerless comma-separated matrix; rejects ragged rows and non-finite
/// values with line-numbered errors.
Matrix load_matrix_csv(const std::string& path);

/// One value per line.
Vector load_vector_csv(const std::string& path);

/// One zero-based group index per line.
std::vector<int> load_groups(const std::string& path);

void save_matrix_csv(const std::string& path, const Matrix& m);
void save_vector_csv(const std::string& path, const Vector& v);
void save_groups(const std::string& path, const std::vector<int>& assignment);

/// Shortest round-trip decimal formatting of a double.
std::string format_double(double v);

}  // namespace sgl
