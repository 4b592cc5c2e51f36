// pdcnet: scans, single evaluations, oracle checks, and phase-locking runs
// for parametric down-conversion networks, from presets or config files.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdcnet/config.hpp"
#include "pdcnet/runner.hpp"

using namespace pdcnet;
using namespace pdcnet::cli;
using nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 1 bad input (flags, config, network), 2 runtime or
// I/O failure.  Failures go to stderr as JSON so callers can parse them.
int fail(const std::string& category, const std::vector<std::string>& messages) {
  ordered_json j;
  j["error"] = category;
  j["messages"] = messages;
  std::cerr << j.dump(2) << "\n";
  return category == "runtime" ? 2 : 1;
}

struct TaskFlags {
  std::string config_path;
  std::string preset_id;
  std::string gain, phi, pump_phase, tau, theta, alpha;
  bool seeded = false;
  bool couple = false;
  std::string phase_ratio = "808/355";
  std::string scan_parameter;
  std::string phi_grid, tau_grid;
  std::string detector;
  std::string coincidence;
  bool oracle = false;
  int oracle_cutoff = 0;
  std::string out_csv, out_json;
  bool phase_lock = false;
  bool ensemble = false;
  std::string kappa, seed_mag, pump_mag, dtheta0, z_max;
  std::size_t members = 16;
  std::size_t samples = 512;
};

void add_task_flags(CLI::App* c, TaskFlags& f) {
  c->add_option("--config", f.config_path, "Config file describing the task");
  c->add_option("--preset", f.preset_id,
                "Built-in layout: cascade12, parallel23, cascade13, three-crystal, filter");
  c->add_option("--gain", f.gain, "Crystal gain magnitude (default 0.01)");
  c->add_option("--phi", f.phi, "Signal phase when not scanned (accepts pi expressions)");
  c->add_option("--pump-phase", f.pump_phase, "Relative pump phase when not scanned");
  c->add_option("--tau", f.tau, "Filter transmission magnitude in [0, 1] (default 0.5)");
  c->add_option("--theta", f.theta, "Filter transmission phase");
  c->add_option("--alpha", f.alpha, "Seed amplitude `re,im`; implies a quantum seed");
  c->add_flag("--seeded", f.seeded,
              "Treat the seed as a prescribed classical field (alpha defaults to 1)");
  c->add_flag("--couple-phases", f.couple,
              "Scanning phi also advances the pump phase by the --phase-ratio");
  c->add_option("--phase-ratio", f.phase_ratio,
                "Pump-to-signal phase ratio for --couple-phases (default 808/355)");
  c->add_option("--scan-parameter", f.scan_parameter, "phi, pump-phase, or tau");
  c->add_option("--phi-grid", f.phi_grid, "Phase grid `start:stop:step` (default 0:2*pi:pi/200)");
  c->add_option("--tau-grid", f.tau_grid,
                "Transmission grid `start:stop:step`; switches to a visibility scan");
  c->add_option("--detector", f.detector, "Detector to read out (default A)");
  c->add_option("--coincidence", f.coincidence, "Two detector names `A,D` for coincidences");
  c->add_flag("--oracle", f.oracle, "Add truncated Fock-space oracle columns");
  c->add_option("--oracle-cutoff", f.oracle_cutoff, "Photon-number cutoff (default: automatic)")
      ->check(CLI::PositiveNumber);
  c->add_option("--out", f.out_csv, "CSV output path");
  c->add_option("--json", f.out_json, "JSON summary path (default stdout)");
  c->add_flag("--phase-lock", f.phase_lock, "Integrate one three-wave-mixing trajectory");
  c->add_flag("--ensemble", f.ensemble, "Integrate a whole initial-phase ensemble");
  c->add_option("--kappa", f.kappa, "Coupling strength (default 1)");
  c->add_option("--seed-mag", f.seed_mag, "Initial signal/idler magnitude (default 1e-3)");
  c->add_option("--pump-mag", f.pump_mag, "Initial pump magnitude (default 1)");
  c->add_option("--dtheta0", f.dtheta0, "Initial relative phase for --phase-lock (default 0.3)");
  c->add_option("--z-max", f.z_max, "Integration length (default 12)");
  c->add_option("--members", f.members, "Ensemble size (default 16)");
  c->add_option("--samples", f.samples, "Output samples along z (default 512)");
}

struct BuiltTask {
  RunTask task;
  std::string error_category = "usage";
  std::vector<std::string> errors;
};

BuiltTask build_task(const TaskFlags& f, CLI::App* active) {
  BuiltTask out;
  auto& errors = out.errors;

  if (!f.config_path.empty()) {
    static const char* kExclusive[] = {
        "--preset",   "--gain",          "--phi",        "--pump-phase",  "--tau",
        "--theta",    "--alpha",         "--seeded",     "--couple-phases",
        "--phase-ratio", "--scan-parameter", "--phi-grid", "--tau-grid",  "--detector",
        "--coincidence", "--oracle",     "--oracle-cutoff", "--phase-lock", "--ensemble",
        "--kappa",    "--seed-mag",      "--pump-mag",   "--dtheta0",     "--z-max",
        "--members",  "--samples"};
    for (const char* name : kExclusive) {
      if (active->count(name) > 0) {
        errors.push_back(std::string(name) + " cannot be combined with --config");
      }
    }
    std::ifstream in(f.config_path, std::ios::binary);
    if (!in) {
      errors.push_back("cannot read config file " + f.config_path);
      return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = parse_config(buf.str());
    if (!parsed.ok()) {
      out.error_category = "config";
      for (auto& e : parsed.errors) errors.push_back(e);
      return out;
    }
    out.task = std::move(parsed.task);
    if (!f.out_csv.empty()) out.task.csv_path = f.out_csv;
    if (!f.out_json.empty()) out.task.json_path = f.out_json;
    return out;
  }

  auto num = [&](const std::string& text, const char* flag, double def) -> double {
    if (text.empty()) return def;
    std::string err;
    if (auto v = parse_pi_expr(text, err)) return *v;
    errors.push_back(std::string(flag) + ": " + err);
    return def;
  };

  RunTask& task = out.task;
  if (f.phase_lock || f.ensemble) {
    if (f.phase_lock && f.ensemble) {
      errors.push_back("choose one of --phase-lock and --ensemble");
    }
    if (!f.preset_id.empty()) {
      errors.push_back("--preset does not apply to a phase-locking run");
    }
    task.kind = f.ensemble ? TaskKind::Ensemble : TaskKind::PhaseLock;
    auto positive = [&](const std::string& text, const char* flag, double def) {
      double v = num(text, flag, def);
      if (v <= 0.0) {
        errors.push_back(std::string(flag) + " must be positive");
        return def;
      }
      return v;
    };
    task.lock.kappa = positive(f.kappa, "--kappa", 1.0);
    task.lock.seed_mag = positive(f.seed_mag, "--seed-mag", 1e-3);
    task.lock.pump_mag = positive(f.pump_mag, "--pump-mag", 1.0);
    task.lock.dtheta0 = num(f.dtheta0, "--dtheta0", 0.3);
    task.lock.z_max = positive(f.z_max, "--z-max", 12.0);
    if (f.members < 1) errors.push_back("--members must be at least 1");
    if (f.samples < 2) errors.push_back("--samples must be at least 2");
    task.lock.members = f.members;
    task.lock.samples = f.samples;
  } else {
    if (f.preset_id.empty()) {
      errors.push_back("nothing to run: give --preset, --config, --phase-lock, or --ensemble");
      return out;
    }
    PresetTask pt;
    if (auto p = preset_from_name(f.preset_id)) {
      pt.preset = *p;
    } else {
      errors.push_back("unknown preset `" + f.preset_id +
                       "`; one of cascade12, parallel23, cascade13, three-crystal, filter");
    }
    pt.params.gain = Complex(num(f.gain, "--gain", 0.01), 0.0);
    pt.params.phi = num(f.phi, "--phi", 0.0);
    pt.params.pump_phase = num(f.pump_phase, "--pump-phase", 0.0);
    double t_mag = num(f.tau, "--tau", 0.5);
    if (t_mag < 0.0 || t_mag > 1.0) {
      errors.push_back("--tau magnitude must lie in [0, 1]");
      t_mag = 0.5;
    }
    pt.params.tau = std::polar(t_mag, num(f.theta, "--theta", 0.0));
    std::optional<Complex> alpha;
    if (!f.alpha.empty()) {
      std::string err;
      if (auto a = parse_complex_value(f.alpha, err)) alpha = *a;
      else errors.push_back(std::string("--alpha: ") + err);
    }
    if (f.seeded) {
      pt.seed_mode = SeedMode::Classical;
      pt.params.seed = alpha.value_or(Complex{1.0, 0.0});
    } else if (alpha) {
      pt.seed_mode = SeedMode::Quantum;
      pt.params.seed = *alpha;
    }
    if (f.couple) pt.params.couple_pump = num(f.phase_ratio, "--phase-ratio", 808.0 / 355.0);
    task.preset = std::move(pt);
    task.kind = TaskKind::Scan;

    if (!f.scan_parameter.empty()) {
      if (auto p = scan_parameter_from_name(f.scan_parameter)) task.scan.parameter = *p;
      else errors.push_back("--scan-parameter: one of phi, pump-phase, tau");
    }
    if (!f.phi_grid.empty() && !f.tau_grid.empty()) {
      errors.push_back("choose one of --phi-grid and --tau-grid");
    }
    if (!f.phi_grid.empty()) {
      std::string err;
      if (auto g = parse_grid(f.phi_grid, err)) task.scan.grid = *g;
      else errors.push_back(std::string("--phi-grid: ") + err);
    }
    if (!f.tau_grid.empty()) {
      std::string err;
      if (auto g = parse_grid(f.tau_grid, err)) {
        task.scan.grid = *g;
        task.scan.parameter = ScanParameter::TauMagnitude;
      } else {
        errors.push_back(std::string("--tau-grid: ") + err);
      }
    }
    task.scan.detector = f.detector;
    if (!f.coincidence.empty()) {
      auto comma = f.coincidence.find(',');
      std::string a = comma == std::string::npos ? f.coincidence : f.coincidence.substr(0, comma);
      std::string d = comma == std::string::npos ? std::string{} : f.coincidence.substr(comma + 1);
      auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
      };
      a = trim(a);
      d = trim(d);
      if (a.empty() || d.empty()) {
        errors.push_back("--coincidence: expected two detector names `A,D`");
      } else {
        task.scan.coincidence = {a, d};
      }
    }
    task.scan.oracle = f.oracle;
    task.scan.oracle_cutoff = f.oracle_cutoff;
    if (f.oracle && pt.seed_mode == SeedMode::Classical) {
      errors.push_back(
          "the oracle simulates the quantum treatment; it cannot check a classical-seed run");
    }
  }
  task.csv_path = f.out_csv;
  task.json_path = f.out_json;
  return out;
}

bool write_file(const std::string& path, const std::string& data, std::string& err) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    err = "cannot open " + path + " for writing";
    return false;
  }
  out << data;
  out.flush();
  if (!out) {
    err = "write failed: " + path;
    return false;
  }
  return true;
}

ordered_json component_json(const ComponentSpec& spec, const PresetParams& probe) {
  ordered_json j;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Crystal>) {
          j["type"] = "crystal";
          j["signal"] = c.signal.label;
          j["idler"] = c.idler.label;
          if (c.pump_phase == probe.pump_phase) j["pump_phase"] = "pump-phase parameter";
        } else if constexpr (std::is_same_v<T, PhaseShift>) {
          j["type"] = "phase";
          j["mode"] = c.mode.label;
          if (c.phi == probe.phi) j["phi"] = "phi parameter";
        } else if constexpr (std::is_same_v<T, Mirror>) {
          j["type"] = "mirror";
          j["mode"] = c.mode.label;
        } else if constexpr (std::is_same_v<T, Filter>) {
          j["type"] = "filter";
          j["mode"] = c.mode.label;
          j["ancilla"] = c.ancilla.label;
          j["tau"] = "tau parameter";
        } else if constexpr (std::is_same_v<T, Seed>) {
          j["type"] = "seed";
          j["mode"] = c.mode.label;
          j["alpha"] = "seed amplitude (seeded runs only)";
        } else if constexpr (std::is_same_v<T, Combiner>) {
          j["type"] = "combiner";
          std::vector<std::string> in;
          for (const auto& m : c.inputs) in.push_back(m.label);
          j["inputs"] = in;
          j["output"] = c.output.label;
        } else if constexpr (std::is_same_v<T, Detector>) {
          j["type"] = "detector";
          j["name"] = c.name;
          j["mode"] = c.mode.label;
        }
      },
      spec);
  return j;
}

int print_presets() {
  // Probe values are only markers: a component whose field equals the probe
  // carries that preset parameter.
  PresetParams probe;
  probe.gain = Complex{1.0, 0.0};
  probe.phi = 0.6180339887498949;
  probe.pump_phase = 0.3819660112501051;
  probe.tau = Complex{0.7302040078860869, 0.0};
  probe.seed = Complex{1.0, 0.0};

  ordered_json arr = ordered_json::array();
  for (Preset p : all_presets()) {
    ordered_json j;
    j["id"] = std::string(preset_name(p));
    j["fringe_parameter"] = std::string(scan_parameter_name(fringe_parameter(p)));
    j["detectors"] = preset_detectors(p);
    ordered_json comps = ordered_json::array();
    for (const auto& c : build_preset(p, probe).components) {
      comps.push_back(component_json(c, probe));
    }
    j["components"] = comps;
    arr.push_back(j);
  }
  std::cout << arr.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric down-conversion interferometer network calculator"};
  app.require_subcommand(1);

  TaskFlags f;
  CLI::App* run_cmd = app.add_subcommand(
      "run", "Execute a scan, a single evaluation, or a phase-locking integration");
  add_task_flags(run_cmd, f);
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a task without running it");
  add_task_flags(validate_cmd, f);
  CLI::App* presets_cmd =
      app.add_subcommand("presets", "Describe the built-in network layouts as JSON");
  CLI::App* dump_cmd =
      app.add_subcommand("dump-config", "Print the canonical config file for a task");
  add_task_flags(dump_cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", {e.what()});
  }

  if (presets_cmd->parsed()) return print_presets();

  CLI::App* active = run_cmd->parsed() ? run_cmd : validate_cmd->parsed() ? validate_cmd : dump_cmd;
  BuiltTask built = build_task(f, active);
  if (!built.errors.empty()) return fail(built.error_category, built.errors);

  if (dump_cmd->parsed()) {
    std::cout << dump_config(built.task);
    return 0;
  }

  if (validate_cmd->parsed()) {
    try {
      auto warnings = validate_task(built.task);
      ordered_json j;
      j["ok"] = true;
      j["warnings"] = warnings;
      std::cout << j.dump(2) << "\n";
      return 0;
    } catch (const NetworkError& e) {
      return fail("network", e.errors());
    } catch (const std::exception& e) {
      return fail("network", {e.what()});
    }
  }

  try {
    RunOutput out = run_task(built.task);
    if (!built.task.csv_path.empty()) {
      std::string err;
      if (!write_file(built.task.csv_path, out.csv, err)) return fail("runtime", {err});
    }
    std::string payload = out.summary.dump(2) + "\n";
    if (built.task.json_path.empty()) {
      std::cout << payload;
    } else {
      std::string err;
      if (!write_file(built.task.json_path, payload, err)) return fail("runtime", {err});
    }
    return 0;
  } catch (const NetworkError& e) {
    return fail("network", e.errors());
  } catch (const std::out_of_range& e) {
    // bad detector or mode names surface as lookup failures
    return fail("network", {e.what()});
  } catch (const std::exception& e) {
    return fail("runtime", {e.what()});
  }
}
