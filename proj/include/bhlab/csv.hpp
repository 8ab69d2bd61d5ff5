#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bhlab/lab.hpp"
#include "bhlab/recon.hpp"

namespace bhlab {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws naming the column when absent.
  std::size_t column(const std::string& name) const;
  /// Parses rows[row][col] as a double; errors name the data row (1-based) and column.
  double number(std::size_t row, std::size_t col) const;
};

/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

inline const std::vector<std::string> kSweepHeader = {"k", "b", "delta", "trial", "err_L2", "err_Hminus_s",
                                                      "imag_residue", "wall_time"};
inline const std::vector<std::string> kLinearizationHeader = {"amplitude", "residual_ratio", "fit_slope"};
inline const std::vector<std::string> kBoundHeader = {"k", "bound_value"};
inline const std::vector<std::string> kSamplesHeader = {"xi_x", "xi_y", "xi_z", "r",  "a_used",
                                                        "band", "re",   "im",   "oracle_re", "oracle_im"};

CsvTable sweep_table(const SweepResult& result);
CsvTable linearization_table(const LinearizationResult& result);
CsvTable bound_table(std::span<const double> ks, std::span<const double> values);
CsvTable samples_table(std::span<const FourierSample> samples);

/// Reads sweep.csv / attenuation.csv rows back.
std::vector<SweepRow> sweep_rows_from(const CsvTable& table);

}  // namespace bhlab
