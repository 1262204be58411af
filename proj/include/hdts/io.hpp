#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hdts/cp.hpp"
#include "hdts/series.hpp"

namespace hdts {

/// Rectangular numeric CSV, rows in time order, optional single header
/// row. An unset has_header sniffs the first row: any non-numeric cell
/// marks it as a header. Errors name the offending row and column.
Series read_series_csv(const std::string& path,
                       std::optional<bool> has_header = std::nullopt);

/// Long-format matrix series with the exact header `t,i,j,value` and a
/// complete 1-based grid; duplicates and gaps are data errors.
MatrixSeries read_matrix_series_csv(const std::string& path);

/// Wide n x (p*q) panel reshaped into slices: Y[t](i, j) comes from wide
/// column i*q + j (row blocks of length q).
MatrixSeries reshape_series(const Series& wide, Eigen::Index p, Eigen::Index q);

/// 17-significant-digit CSV so that write/read round-trips are lossless.
void write_matrix_csv(const std::string& path,
                      const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                      const std::vector<std::string>& header = {});

void write_matrix_series_csv(const std::string& path, const MatrixSeries& series);

std::string format_double(double value);

}  // namespace hdts
