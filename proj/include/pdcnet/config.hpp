#pragma once

// Run descriptions for the pdcnet command line tool.
//
// A task comes either from command line flags or from a small sectioned
// config file.  Both paths produce the same RunTask, so a file and the
// equivalent flag set run byte-identically.
//
// Config format, line oriented:
//
//   [preset]                     # or [network] + [component.N] for custom nets
//   name = filter
//   gain = 0.01
//   tau = 0.5
//   seeded = classical           # none | quantum | classical
//
//   [scan]
//   parameter = phi              # phi | pump-phase | tau
//   grid = 0 : 2*pi : pi/200
//
//   [output]
//   csv = scan.csv
//
// Numeric values accept products and quotients of decimals and `pi`
// (e.g. `3*pi/4`); nothing else, no sums.  Complex values are `re, im`
// pairs.  `#` starts a comment.  In a custom [component.N] section a
// phase `phi` or crystal `pump_phase` may be the word `scan`, binding
// that slot to the [scan] grid.
//
// Parsing never stops at the first problem: every error is reported with
// its line number.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdcnet/experiments.hpp"
#include "pdcnet/network.hpp"

namespace pdcnet::cli {

enum class TaskKind { Scan, Single, PhaseLock, Ensemble };

enum class SeedMode { None, Quantum, Classical };

std::string_view seed_mode_name(SeedMode m);
std::optional<SeedMode> seed_mode_from_name(std::string_view name);

std::string_view scan_parameter_name(ScanParameter p);
std::optional<ScanParameter> scan_parameter_from_name(std::string_view name);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> points() const;
  std::size_t count() const;
};

struct ScanSettings {
  std::optional<ScanParameter> parameter;  // unset = preset's fringe parameter
  std::optional<GridSpec> grid;            // unset = a full default fringe grid
  std::string detector;                    // empty = first detector in the net
  std::optional<std::pair<std::string, std::string>> coincidence;
  bool oracle = false;
  int oracle_cutoff = 0;                   // 0 = pick from the seed amplitude
};

struct PresetTask {
  Preset preset = Preset::FilterSetup;
  PresetParams params;
  SeedMode seed_mode = SeedMode::None;
};

struct CustomTask {
  enum class Slot { None, PhasePhi, CrystalPump };

  std::vector<ComponentSpec> components;
  StateSpec state;
  bool classical = false;
  Slot slot = Slot::None;
  std::size_t slot_component = 0;  // index into components when slot != None
};

// Three wave mixing integration settings, shared by the single trajectory
// and ensemble tasks.
struct LockSettings {
  double kappa = 1.0;
  double seed_mag = 1e-3;
  double pump_mag = 1.0;
  double dtheta0 = 0.3;    // trajectory task only
  double z_max = 12.0;
  std::size_t members = 16;
  std::size_t samples = 512;
};

struct RunTask {
  TaskKind kind = TaskKind::Scan;
  std::optional<PresetTask> preset;
  std::optional<CustomTask> custom;
  ScanSettings scan;
  LockSettings lock;
  std::string csv_path;   // empty = do not write a csv file
  std::string json_path;  // empty = summary goes to stdout
};

struct ConfigResult {
  RunTask task;
  std::vector<std::string> errors;  // "line N: ..." in line order

  bool ok() const { return errors.empty(); }
};

ConfigResult parse_config(std::string_view text);

// Canonical config text for a task.  Numbers are emitted as plain decimals
// (pi expressions do not survive), so the round trip contract is
// parse(dump(parse(s))) == parse(s), not textual identity.
std::string dump_config(const RunTask& task);

// "a : b : step" with pi expressions, as used by --phi-grid / --tau-grid.
std::optional<GridSpec> parse_grid(std::string_view text, std::string& error);

// Product/quotient pi expression used for every scalar in the config format.
std::optional<double> parse_pi_expr(std::string_view text, std::string& error);

// "re" or "re, im", both pi expressions.
std::optional<Complex> parse_complex_value(std::string_view text, std::string& error);

}  // namespace pdcnet::cli
