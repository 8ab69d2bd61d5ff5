#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/config.hpp"

namespace bhlab {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Command-line overrides. Precedence: flag, then BHLAB_* environment variable, then config file.
struct RunOptions {
  std::optional<std::filesystem::path> config_path;  // absent: all defaults
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;  // 0 = OpenMP default
  bool include_high_band = false;
  bool wall_time = false;
  std::optional<std::filesystem::path> fit_from;  // sweep.csv used to fit C for `bound`
};

const std::vector<std::string>& command_names();

/// Loads the config and applies environment (BHLAB_SEED, BHLAB_THREADS, BHLAB_OUT) and
/// flag overrides, then re-validates.
LabConfig resolve_config(const RunOptions& options);

/// Executes one lab command inside a fresh run directory under the output root:
/// config_snapshot.json first, command outputs next, manifest.json last.
/// Returns 0 only when every embedded self-check passes; module errors are reported
/// on `err` and give exit status 2, failed self-checks give 1.
int run_command(const std::string& name, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Renders SVG plots for the given CSVs into out_dir. Returns an exit status.
int plot_command(const std::vector<std::filesystem::path>& csv_files, const std::filesystem::path& out_dir,
                 std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& data);

}  // namespace bhlab
