#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcar/pacf.hpp"

namespace pcar {

/**
 * Read a single-column CSV series.  A non-numeric first row is treated as
 * a header; blank lines are skipped.  Parse failures report the 1-based
 * row number.
 */
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Write a series as a single column under an "x" header, full precision.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& x);

/// Write a rectangular table with a header row; every row must have one
/// value per header.
void write_table_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace pcar
