#include "pdcnet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <thread>
#include <variant>

#include "pdcnet/dynamics.hpp"
#include "pdcnet/fock.hpp"

namespace pdcnet::cli {

namespace {

constexpr double kPi = std::numbers::pi;

using nlohmann::ordered_json;

ordered_json json_complex(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto drain = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

bool task_is_classical(const RunTask& t) {
  if (t.preset) return t.preset->seed_mode == SeedMode::Classical;
  if (t.custom) return t.custom->classical;
  return false;
}

CompileOptions compile_options(const RunTask& t) {
  CompileOptions o;
  o.classical_seed = task_is_classical(t);
  return o;
}

ScanParameter resolve_parameter(const RunTask& t) {
  if (t.scan.parameter) return *t.scan.parameter;
  if (t.preset) return fringe_parameter(t.preset->preset);
  if (t.custom && t.custom->slot == CustomTask::Slot::CrystalPump) return ScanParameter::PumpPhase;
  return ScanParameter::Phi;
}

GridSpec resolve_grid(const RunTask& t, ScanParameter p) {
  if (t.scan.grid) return *t.scan.grid;
  if (p == ScanParameter::TauMagnitude) return {0.0, 1.0, 0.05};
  return {0.0, 2.0 * kPi, kPi / 200.0};
}

std::string resolve_detector(const RunTask& t) {
  if (!t.scan.detector.empty()) return t.scan.detector;
  if (t.custom) {
    for (const auto& c : t.custom->components) {
      if (const auto* d = std::get_if<Detector>(&c)) return d->name;
    }
  }
  return "A";
}

NetworkSpec network_at(const RunTask& t, ScanParameter p, double x) {
  if (t.preset) {
    return build_preset(t.preset->preset, preset_params_at(t.preset->params, p, x));
  }
  const CustomTask& ct = *t.custom;
  NetworkSpec net;
  net.components = ct.components;
  net.initial_state = ct.state;
  if (ct.slot == CustomTask::Slot::PhasePhi) {
    std::get<PhaseShift>(net.components[ct.slot_component]).phi = x;
  } else if (ct.slot == CustomTask::Slot::CrystalPump) {
    std::get<Crystal>(net.components[ct.slot_component]).pump_phase = x;
  }
  return net;
}

int resolve_cutoff(const RunTask& t) {
  if (t.scan.oracle_cutoff > 0) return t.scan.oracle_cutoff;
  double max_seed = 0.0;
  if (t.preset && t.preset->params.seed) max_seed = std::abs(*t.preset->params.seed);
  if (t.custom) {
    for (const auto& c : t.custom->components) {
      if (const auto* s = std::get_if<Seed>(&c)) max_seed = std::max(max_seed, std::abs(s->alpha));
    }
    for (const auto& [label, alpha] : t.custom->state.assignments()) {
      max_seed = std::max(max_seed, std::abs(alpha));
    }
  }
  // +3 headroom over the occupancy estimate keeps the top-level advisory quiet
  // for moderate seeds (a unit seed then runs at cutoff 10).
  return max_seed > 0.0 ? fock::suggested_cutoff(max_seed) + 3 : 4;
}

// Leading-order closed form for a preset rate, where one is on record.
std::optional<double> reference_rate(const PresetTask& pt, const PresetParams& q,
                                     bool coincidence, std::string_view det) {
  const double g2 = std::norm(q.gain);
  const double n = q.seed ? std::norm(*q.seed) : 0.0;
  const double t = std::abs(q.tau);
  const double th = (q.tau == Complex{}) ? 0.0 : std::arg(q.tau);
  const SeedMode m = pt.seed_mode;
  using namespace reference;
  if (coincidence) {
    if (pt.preset == Preset::FilterSetup && m == SeedMode::None) {
      return filter_coincidence_unseeded(g2, t, q.phi + th);
    }
    return std::nullopt;
  }
  if (det != "A") return std::nullopt;
  switch (pt.preset) {
    case Preset::Cascade12:
      return m == SeedMode::Classical ? cascade12_classical(g2, n, q.phi)
                                      : cascade12_seeded(g2, n, q.phi);
    case Preset::Parallel23:
      return m == SeedMode::Classical ? cascade12_classical(g2, n, q.phi)
                                      : parallel23_seeded(g2, n, q.phi);
    case Preset::Cascade13:
      if (m == SeedMode::Classical) return cascade13_classical(g2, n, q.pump_phase);
      return 2.0 * g2 * ((n + 1.0) + n * std::cos(q.pump_phase));
    case Preset::ThreeCrystal:
      if (m == SeedMode::Classical) return three_crystal_classical(g2, n, q.phi, q.pump_phase);
      if (m == SeedMode::None) return three_crystal_unseeded(g2, q.phi);
      return std::nullopt;
    case Preset::FilterSetup:
      if (m == SeedMode::Classical) return filter_classical(g2, n, t, q.phi + th);
      if (m == SeedMode::None) return filter_unseeded(g2, t, q.phi + th);
      return filter_seeded(g2, n, t, q.phi + th);
  }
  return std::nullopt;
}

std::optional<double> reference_visibility(const PresetTask& pt, double t_mag,
                                           bool coincidence, std::string_view det) {
  if (pt.preset != Preset::FilterSetup) return std::nullopt;
  if (coincidence) {
    if (pt.seed_mode == SeedMode::None) return reference::filter_visibility_classical(t_mag);
    return std::nullopt;
  }
  if (det != "A") return std::nullopt;
  const double n = pt.params.seed ? std::norm(*pt.params.seed) : 0.0;
  switch (pt.seed_mode) {
    case SeedMode::Classical: return reference::filter_visibility_classical(t_mag);
    case SeedMode::None: return reference::filter_visibility_unseeded(t_mag);
    case SeedMode::Quantum:
      return 2.0 * t_mag * (n + 1.0) / ((1.0 + t_mag * t_mag) * n + 2.0);
  }
  return std::nullopt;
}

void describe_source(ordered_json& j, const RunTask& t) {
  if (t.preset) {
    const PresetTask& pt = *t.preset;
    j["preset"] = std::string(preset_name(pt.preset));
    j["seed_mode"] = std::string(seed_mode_name(pt.seed_mode));
    ordered_json p;
    p["gain"] = json_complex(pt.params.gain);
    p["phi"] = pt.params.phi;
    p["pump_phase"] = pt.params.pump_phase;
    p["tau"] = std::abs(pt.params.tau);
    p["theta"] = pt.params.tau == Complex{} ? 0.0 : std::arg(pt.params.tau);
    if (pt.params.seed) p["alpha"] = json_complex(*pt.params.seed);
    if (pt.params.couple_pump) p["couple_pump"] = *pt.params.couple_pump;
    j["parameters"] = p;
  } else if (t.custom) {
    j["network"] = "custom";
    j["classical"] = t.custom->classical;
    j["components"] = t.custom->components.size();
  }
}

ordered_json fringe_json(const FringeStats& fs) {
  ordered_json j;
  j["visibility"] = fs.visibility;
  j["r_max"] = fs.r_max;
  j["r_min"] = fs.r_min;
  j["x_max"] = fs.x_max;
  j["x_min"] = fs.x_min;
  return j;
}

ordered_json scan_json(std::string_view parameter, const GridSpec& gs) {
  ordered_json j;
  j["parameter"] = std::string(parameter);
  j["start"] = gs.start;
  j["stop"] = gs.stop;
  j["step"] = gs.step;
  j["points"] = gs.count();
  return j;
}

RunOutput run_rate_scan(const RunTask& t, ScanParameter param, const GridSpec& gs) {
  auto grid = gs.points();
  if (grid.empty()) throw std::runtime_error("scan grid is empty");
  const bool coin = t.scan.coincidence.has_value();
  const std::string det = resolve_detector(t);
  const std::string det_a = coin ? t.scan.coincidence->first : det;
  const std::string det_d = coin ? t.scan.coincidence->second : std::string{};
  const auto opt = compile_options(t);

  // One compile up front: surfaces network and detector-name problems before
  // the pool starts, and captures the warning list (identical at every point).
  auto first = compile(network_at(t, param, grid.front()), opt);
  std::vector<std::string> warnings = first.warnings;
  if (coin) {
    first.detector(det_a);
    first.detector(det_d);
  } else {
    first.detector(det);
  }

  const int cutoff = t.scan.oracle ? resolve_cutoff(t) : 0;
  std::vector<double> engine(grid.size());
  std::vector<std::optional<double>> ref(grid.size());
  std::vector<double> oracle(t.scan.oracle ? grid.size() : 0);
  std::set<std::string> oracle_notes;
  std::mutex notes_mu;

  parallel_for(grid.size(), [&](std::size_t i) {
    auto net = network_at(t, param, grid[i]);
    auto compiled = compile(net, opt);
    engine[i] = coin ? coincidence_rate(compiled, det_a, det_d) : detector_rate(compiled, det);
    if (t.preset) {
      auto q = preset_params_at(t.preset->params, param, grid[i]);
      ref[i] = reference_rate(*t.preset, q, coin, det);
    }
    if (t.scan.oracle) {
      fock::OracleOptions oo;
      oo.cutoff = cutoff;
      fock::FockSim sim(net, oo);
      oracle[i] = coin ? sim.coincidence(det_a, det_d) : sim.rate(det);
      if (!sim.notes().empty()) {
        std::lock_guard lock(notes_mu);
        for (const auto& note : sim.notes()) oracle_notes.insert(note);
      }
    }
  });

  const bool have_ref = std::all_of(ref.begin(), ref.end(),
                                    [](const auto& v) { return v.has_value(); });

  std::string param_col = param == ScanParameter::PumpPhase ? "pump_phase" : "phi";
  std::string csv = param_col + (coin ? ",coincidence_rate" : ",rate") + ",reference,abs_diff";
  if (t.scan.oracle) csv += ",oracle,oracle_abs_diff";
  csv += "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]);
    csv += ",";
    csv += format_double(engine[i]);
    csv += ",";
    if (ref[i]) {
      csv += format_double(*ref[i]);
      csv += ",";
      csv += format_double(std::abs(engine[i] - *ref[i]));
    } else {
      csv += ",";
    }
    if (t.scan.oracle) {
      csv += ",";
      csv += format_double(oracle[i]);
      csv += ",";
      csv += format_double(std::abs(engine[i] - oracle[i]));
    }
    csv += "\n";
  }

  FringeStats fs = fringe_stats({grid, engine});

  ordered_json j;
  j["task"] = coin ? "coincidence-scan" : "rate-scan";
  describe_source(j, t);
  j["scan"] = scan_json(scan_parameter_name(param), gs);
  if (coin) {
    j["coincidence"] = ordered_json::array({det_a, det_d});
  } else {
    j["detector"] = det;
  }
  j["fringe"] = fringe_json(fs);
  if (have_ref) {
    std::vector<double> ref_vals(grid.size());
    double max_diff = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ref_vals[i] = *ref[i];
      max_diff = std::max(max_diff, std::abs(engine[i] - ref_vals[i]));
    }
    ordered_json r;
    r["visibility"] = fringe_stats({grid, ref_vals}).visibility;
    r["max_abs_diff"] = max_diff;
    j["reference"] = r;
  }
  if (t.scan.oracle) {
    double max_abs = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      max_abs = std::max(max_abs, std::abs(engine[i] - oracle[i]));
      peak = std::max(peak, std::abs(oracle[i]));
    }
    ordered_json o;
    o["cutoff"] = cutoff;
    o["visibility"] = fringe_stats({grid, oracle}).visibility;
    o["max_abs_diff"] = max_abs;
    // relative to the fringe peak: a pointwise ratio blows up at the nulls
    o["max_gap_over_peak"] = peak > 0.0 ? max_abs / peak : 0.0;
    o["notes"] = std::vector<std::string>(oracle_notes.begin(), oracle_notes.end());
    j["oracle"] = o;
  }
  j["warnings"] = warnings;
  return {std::move(j), std::move(csv)};
}

RunOutput run_visibility_scan(const RunTask& t, const GridSpec& gs) {
  if (!t.preset) throw std::runtime_error("tau scans are defined for presets only");
  const PresetTask& pt = *t.preset;
  auto grid = gs.points();
  if (grid.empty()) throw std::runtime_error("scan grid is empty");
  for (double x : grid) {
    if (x < 0.0 || x > 1.0 + 1e-12) {
      throw std::runtime_error("tau grid must stay within [0, 1]");
    }
  }
  const bool coin = t.scan.coincidence.has_value();
  const std::string det = resolve_detector(t);
  const std::string det_a = coin ? t.scan.coincidence->first : det;
  const std::string det_d = coin ? t.scan.coincidence->second : std::string{};
  const auto opt = compile_options(t);
  const ScanParameter inner_param = fringe_parameter(pt.preset);
  const auto inner_grid = linspace(0.0, 2.0 * kPi, 401);
  const auto oracle_inner_grid = linspace(0.0, 2.0 * kPi, 41);
  const int cutoff = t.scan.oracle ? resolve_cutoff(t) : 0;

  {
    auto first = compile(network_at(t, ScanParameter::TauMagnitude, grid.front()), opt);
    if (coin) {
      first.detector(det_a);
      first.detector(det_d);
    } else {
      first.detector(det);
    }
  }

  std::vector<double> vis(grid.size());
  std::vector<std::optional<double>> ref(grid.size());
  std::vector<double> oracle_vis(t.scan.oracle ? grid.size() : 0);
  std::set<std::string> oracle_notes;
  std::mutex notes_mu;

  parallel_for(grid.size(), [&](std::size_t i) {
    PresetParams at_tau = preset_params_at(pt.params, ScanParameter::TauMagnitude, grid[i]);
    std::vector<double> ys;
    ys.reserve(inner_grid.size());
    for (double x : inner_grid) {
      auto net = build_preset(pt.preset, preset_params_at(at_tau, inner_param, x));
      auto compiled = compile(net, opt);
      ys.push_back(coin ? coincidence_rate(compiled, det_a, det_d)
                        : detector_rate(compiled, det));
    }
    vis[i] = fringe_stats({inner_grid, ys}).visibility;
    ref[i] = reference_visibility(pt, grid[i], coin, det);
    if (t.scan.oracle) {
      std::vector<double> oy;
      oy.reserve(oracle_inner_grid.size());
      for (double x : oracle_inner_grid) {
        auto net = build_preset(pt.preset, preset_params_at(at_tau, inner_param, x));
        fock::OracleOptions oo;
        oo.cutoff = cutoff;
        fock::FockSim sim(net, oo);
        oy.push_back(coin ? sim.coincidence(det_a, det_d) : sim.rate(det));
        if (!sim.notes().empty()) {
          std::lock_guard lock(notes_mu);
          for (const auto& note : sim.notes()) oracle_notes.insert(note);
        }
      }
      oracle_vis[i] = fringe_stats({oracle_inner_grid, oy}).visibility;
    }
  });

  const bool have_ref = std::all_of(ref.begin(), ref.end(),
                                    [](const auto& v) { return v.has_value(); });

  std::string csv = coin ? "tau,coincidence_visibility,reference,abs_diff"
                         : "tau,visibility,reference,abs_diff";
  if (t.scan.oracle) csv += ",oracle_visibility,oracle_abs_diff";
  csv += "\n";
  double max_diff = 0.0, worst_tau = grid.front();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]);
    csv += ",";
    csv += format_double(vis[i]);
    csv += ",";
    if (ref[i]) {
      double d = std::abs(vis[i] - *ref[i]);
      if (d > max_diff) {
        max_diff = d;
        worst_tau = grid[i];
      }
      csv += format_double(*ref[i]);
      csv += ",";
      csv += format_double(d);
    } else {
      csv += ",";
    }
    if (t.scan.oracle) {
      csv += ",";
      csv += format_double(oracle_vis[i]);
      csv += ",";
      csv += format_double(std::abs(vis[i] - oracle_vis[i]));
    }
    csv += "\n";
  }

  ordered_json j;
  j["task"] = "visibility-scan";
  describe_source(j, t);
  j["scan"] = scan_json("tau", gs);
  j["fringe_points"] = inner_grid.size();
  if (coin) {
    j["coincidence"] = ordered_json::array({det_a, det_d});
  } else {
    j["detector"] = det;
  }
  if (have_ref) {
    ordered_json r;
    r["max_abs_diff"] = max_diff;
    r["worst_tau"] = worst_tau;
    j["reference"] = r;
  }
  if (t.scan.oracle) {
    ordered_json o;
    o["cutoff"] = cutoff;
    o["fringe_points"] = oracle_inner_grid.size();
    o["notes"] = std::vector<std::string>(oracle_notes.begin(), oracle_notes.end());
    j["oracle"] = o;
  }
  return {std::move(j), std::move(csv)};
}

RunOutput run_single(const RunTask& t) {
  const auto opt = compile_options(t);
  auto net = network_at(t, ScanParameter::Phi, 0.0);
  auto compiled = compile(net, opt);

  ordered_json rates;
  for (const auto& d : compiled.detectors) rates[d.name] = detector_rate(compiled, d.name);

  ordered_json j;
  j["task"] = "single";
  describe_source(j, t);
  j["rates"] = rates;
  if (t.scan.coincidence) {
    const auto& [a, d] = *t.scan.coincidence;
    ordered_json c;
    c["pair"] = ordered_json::array({a, d});
    c["rate"] = coincidence_rate(compiled, a, d);
    j["coincidence"] = c;
  }
  if (t.scan.oracle) {
    fock::OracleOptions oo;
    oo.cutoff = resolve_cutoff(t);
    fock::FockSim sim(net, oo);
    ordered_json o;
    o["cutoff"] = oo.cutoff;
    ordered_json orates;
    for (const auto& d : compiled.detectors) orates[d.name] = sim.rate(d.name);
    o["rates"] = orates;
    if (t.scan.coincidence) {
      o["coincidence"] = sim.coincidence(t.scan.coincidence->first, t.scan.coincidence->second);
    }
    o["norm_drift"] = sim.norm_drift();
    o["top_level_weight"] = sim.top_level_weight();
    o["notes"] = sim.notes();
    j["oracle"] = o;
  }
  j["warnings"] = compiled.warnings;
  return {std::move(j), std::string{}};
}

double trajectory_invariant_drift(const dynamics::Trajectory& traj) {
  if (traj.state.empty()) return 0.0;
  auto i0 = dynamics::invariants(traj.state.front());
  double drift = 0.0;
  for (const auto& y : traj.state) {
    auto iv = dynamics::invariants(y);
    drift = std::max(drift, std::abs(iv[0] - i0[0]));
    drift = std::max(drift, std::abs(iv[1] - i0[1]));
  }
  return drift;
}

ordered_json lock_report_json(const dynamics::LockingReport& r) {
  ordered_json j;
  j["locked"] = r.locked;
  j["z_lock"] = r.z_lock;
  j["gain_at_lock"] = r.gain_at_lock;
  j["sin_at_lock"] = r.sin_at_lock;
  j["dtheta_end"] = r.dtheta_end;
  return j;
}

RunOutput run_phase_lock(const RunTask& t) {
  const LockSettings& L = t.lock;
  dynamics::IntegrateOptions io;
  io.samples = L.samples;
  auto y0 = dynamics::pack(std::polar(L.seed_mag, -L.dtheta0), Complex(L.seed_mag, 0.0),
                           Complex(L.pump_mag, 0.0));
  auto traj = dynamics::integrate_three_wave(L.kappa, y0, L.z_max, io);
  auto report = dynamics::detect_locking(traj);
  double drift = trajectory_invariant_drift(traj);

  std::string csv = "z,r_s,r_i,r_p,dtheta\n";
  for (std::size_t i = 0; i < traj.z.size(); ++i) {
    auto mags = dynamics::magnitudes(traj.state[i]);
    csv += format_double(traj.z[i]);
    csv += ",";
    csv += format_double(mags[0]);
    csv += ",";
    csv += format_double(mags[1]);
    csv += ",";
    csv += format_double(mags[2]);
    csv += ",";
    csv += format_double(dynamics::relative_phase(traj.state[i]));
    csv += "\n";
  }

  ordered_json j;
  j["task"] = "phase-lock";
  j["kappa"] = L.kappa;
  j["seed"] = L.seed_mag;
  j["pump"] = L.pump_mag;
  j["dtheta0"] = L.dtheta0;
  j["z_max"] = L.z_max;
  j["samples"] = L.samples;
  j["lock"] = lock_report_json(report);
  j["invariant_drift"] = drift;
  return {std::move(j), std::move(csv)};
}

RunOutput run_ensemble(const RunTask& t) {
  const LockSettings& L = t.lock;
  dynamics::IntegrateOptions io;
  io.samples = L.samples;
  auto members = dynamics::locking_ensemble(L.kappa, L.seed_mag, L.pump_mag, L.members,
                                            L.z_max, io);

  std::string csv = "member,dtheta0,z_lock,gain_at_lock,sin_at_lock,invariant_drift\n";
  bool all_locked = true;
  double min_sin = members.empty() ? 0.0 : members.front().report.sin_at_lock;
  double max_gain = 0.0, max_drift = 0.0;
  ordered_json marr = ordered_json::array();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    csv += std::to_string(i);
    csv += ",";
    csv += format_double(m.dtheta0);
    csv += ",";
    csv += format_double(m.report.z_lock);
    csv += ",";
    csv += format_double(m.report.gain_at_lock);
    csv += ",";
    csv += format_double(m.report.sin_at_lock);
    csv += ",";
    csv += format_double(m.invariant_drift);
    csv += "\n";
    all_locked = all_locked && m.report.locked;
    min_sin = std::min(min_sin, m.report.sin_at_lock);
    max_gain = std::max(max_gain, m.report.gain_at_lock);
    max_drift = std::max(max_drift, m.invariant_drift);
    ordered_json mj;
    mj["dtheta0"] = m.dtheta0;
    mj["lock"] = lock_report_json(m.report);
    mj["invariant_drift"] = m.invariant_drift;
    marr.push_back(mj);
  }

  ordered_json j;
  j["task"] = "ensemble";
  j["kappa"] = L.kappa;
  j["seed"] = L.seed_mag;
  j["pump"] = L.pump_mag;
  j["z_max"] = L.z_max;
  j["members"] = marr;
  j["all_locked"] = all_locked;
  j["min_sin_at_lock"] = min_sin;
  j["max_gain_at_lock"] = max_gain;
  j["max_invariant_drift"] = max_drift;
  return {std::move(j), std::move(csv)};
}

}  // namespace

std::vector<std::string> validate_task(const RunTask& t) {
  if (t.kind == TaskKind::PhaseLock || t.kind == TaskKind::Ensemble) return {};
  ScanParameter param = resolve_parameter(t);
  double x0 = 0.0;
  if (t.kind == TaskKind::Scan) {
    GridSpec gs = resolve_grid(t, param);
    auto pts = gs.points();
    if (pts.empty()) throw std::runtime_error("scan grid is empty");
    x0 = pts.front();
  }
  auto compiled = compile(network_at(t, param, x0), compile_options(t));
  if (t.scan.coincidence) {
    compiled.detector(t.scan.coincidence->first);
    compiled.detector(t.scan.coincidence->second);
  } else {
    compiled.detector(resolve_detector(t));
  }
  return compiled.warnings;
}

std::size_t worker_count() {
  if (const char* s = std::getenv("PDCNET_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && n >= 1) return std::size_t(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(8u, hw));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunOutput run_task(const RunTask& t) {
  switch (t.kind) {
    case TaskKind::Scan: {
      ScanParameter param = resolve_parameter(t);
      GridSpec gs = resolve_grid(t, param);
      if (param == ScanParameter::TauMagnitude) return run_visibility_scan(t, gs);
      return run_rate_scan(t, param, gs);
    }
    case TaskKind::Single: return run_single(t);
    case TaskKind::PhaseLock: return run_phase_lock(t);
    case TaskKind::Ensemble: return run_ensemble(t);
  }
  throw std::logic_error("unhandled task kind");
}

}  // namespace pdcnet::cli
