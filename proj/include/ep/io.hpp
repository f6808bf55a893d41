#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ep/solver.hpp"

namespace ep {

enum class ProfileKind { gaussian, bump, file };

// Initial-data descriptor from the [initial] config section. The density
// perturbation is amplitude * shape((r - center)/width); unless neutralize is
// off, a compensating annulus of the same shape family centered at
// center + 4*width is subtracted so the net charge is exactly zero. The
// velocity is an exactly odd compressive pulse of amplitude
// velocity_amplitude at the same center/width.
struct InitialSpec {
  ProfileKind profile = ProfileKind::gaussian;
  double amplitude = 0.01;
  double width = 3.0;
  double center = 5.0;
  double velocity_amplitude = 0.0;
  std::string snapshot_path; // for profile = file
  bool neutralize = true;
};

struct FullConfig {
  SolverConfig solver;
  InitialSpec initial;
  std::string units = "paper"; // paper | si-like
};

// Parses the sectioned key=value config text. Unknown sections/keys, duplicate
// keys, malformed numbers, and out-of-range values raise ConfigError with the
// offending key and line number(s).
FullConfig parse_config(const std::string& text);
FullConfig parse_config_file(const std::filesystem::path& path);

// Materializes the initial state on the configured grid (loads the snapshot
// for profile = file). E is initialized from the radial Gauss law unless the
// field mode is off. Reports the neutralizing-annulus scale factor through
// `annulus_ratio` when non-null.
PrimalState build_initial(const FullConfig& cfg, double* annulus_ratio = nullptr);

// diagnostics.csv with a fixed header and 17-significant-digit decimals.
void write_timeseries(const std::filesystem::path& path, const std::vector<Diagnostics>& rows);

// Snapshot: text header (format tag, field names, time, grid, params)
// followed by raw little-endian IEEE-754 doubles; load(save(x)) == x bit-exactly.
void write_snapshot(const std::filesystem::path& path, const PrimalState& s,
                    const RadialGrid& grid, const PhysicalParams& params);
PrimalState load_snapshot(const std::filesystem::path& path, RadialGrid& grid_out,
                          PhysicalParams& params_out);

// Loads a snapshot and checks grid/params compatibility with `cfg`.
PrimalState load_snapshot_checked(const std::filesystem::path& path, const FullConfig& cfg);

// manifest: config echo, derived constants, annulus report, format versions.
void write_manifest(const std::filesystem::path& path, const FullConfig& cfg,
                    double annulus_ratio);

// Writes diagnostics.csv, snapshots/t_<time>.snap (initial and final), and
// manifest under out_dir.
void write_run_outputs(const std::filesystem::path& out_dir, const FullConfig& cfg,
                       const PrimalState& initial, const RunResult& result,
                       double annulus_ratio);

} // namespace ep
