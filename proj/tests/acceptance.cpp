// Whole-stack acceptance suite.  Each criterion prints one PASS/FAIL line
// with the measured margin next to its tolerance, so a red line says how far
// off it landed.  Everything goes through the public library interface; the
// exit status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pdcnet/dynamics.hpp"
#include "pdcnet/experiments.hpp"
#include "pdcnet/fock.hpp"
#include "pdcnet/network.hpp"

namespace {

using namespace pdcnet;

constexpr double kPi = std::numbers::pi;

int g_failed = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%-3s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// f(0..n-1) across a few threads; the first exception is rethrown here.
template <typename F>
void for_indices(std::size_t n, F f) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = std::min(8u, std::max(1u, hw));
  if (workers < 2 || n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// max |engine - law| over the grid, relative to the largest |law| value;
// a pointwise quotient would blow up where the fringe touches zero.
double grid_rel_gap(const std::vector<double>& engine, const std::vector<double>& law) {
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    gap = std::max(gap, std::abs(engine[i] - law[i]));
    scale = std::max(scale, std::abs(law[i]));
  }
  return gap / scale;
}

// A1: classical seed on the shared idler, detector-A fringe visibility
// follows 2t/(1+t^2) across the whole transmission grid.
void a1_seeded_filter_law() {
  CompileOptions opt;
  opt.classical_seed = true;
  const auto grid = linspace(0.0, 2 * kPi, 401);
  double worst = -1.0, worst_tau = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.05 * k;
    PresetParams p;
    p.tau = Complex{t, 0.0};
    p.seed = Complex{1.0, 0.0};
    const auto scan = preset_rate_scan(Preset::FilterSetup, p, ScanParameter::Phi, grid, opt);
    const double dv =
        std::abs(fringe_stats(scan).visibility - reference::filter_visibility_classical(t));
    if (dv > worst) {
      worst = dv;
      worst_tau = t;
    }
  }
  report("A1", worst < 1e-6,
         "seeded filter visibility follows 2t/(1+t^2) on tau = 0:0.05:1: max |dV| = " +
             num(worst) + " at tau = " + num(worst_tau) + " (tol 1e-6)");
}

// A2: same layout with vacuum inputs, visibility is |tau| itself.
void a2_unseeded_filter_law() {
  const CompileOptions opt;
  const auto grid = linspace(0.0, 2 * kPi, 401);
  double worst = -1.0, worst_tau = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.05 * k;
    PresetParams p;
    p.tau = Complex{t, 0.0};
    const auto scan = preset_rate_scan(Preset::FilterSetup, p, ScanParameter::Phi, grid, opt);
    const double dv =
        std::abs(fringe_stats(scan).visibility - reference::filter_visibility_unseeded(t));
    if (dv > worst) {
      worst = dv;
      worst_tau = t;
    }
  }
  report("A2", worst < 1e-6,
         "vacuum filter visibility equals tau on the same grid: max |dV| = " + num(worst) +
             " at tau = " + num(worst_tau) + " (tol 1e-6)");
}

// A3: the five closed-form rate laws, pointwise over 101-point grids.  The
// three-crystal seeded law carries constant term 3, not 2; the companion
// check pins the gap above the constant-2 variant to exactly g2*n.
void a3_closed_form_rates() {
  const Complex gain{0.01, 0.0};
  const double g2 = std::norm(gain);
  const double n = 1.0;
  const auto grid = linspace(0.0, 2 * kPi, 101);
  CompileOptions quantum;
  CompileOptions classical;
  classical.classical_seed = true;

  struct Case {
    const char* name;
    Preset preset;
    ScanParameter param;
    PresetParams base;
    const CompileOptions* opt;
    std::function<double(double)> law;
  };
  std::vector<Case> cases;
  {
    PresetParams p;
    p.gain = gain;
    p.seed = Complex{1.0, 0.0};
    cases.push_back({"cascade12 seeded", Preset::Cascade12, ScanParameter::Phi, p, &quantum,
                     [=](double x) { return reference::cascade12_seeded(g2, n, x); }});
    cases.push_back({"parallel23 seeded", Preset::Parallel23, ScanParameter::Phi, p, &quantum,
                     [=](double x) { return reference::parallel23_seeded(g2, n, x); }});
  }
  {
    PresetParams p;
    p.gain = gain;
    p.phi = 0.77;
    p.seed = Complex{1.0, 0.0};
    cases.push_back({"cascade13 classical", Preset::Cascade13, ScanParameter::PumpPhase, p,
                     &classical,
                     [=](double x) { return reference::cascade13_classical(g2, n, x); }});
  }
  {
    PresetParams p;
    p.gain = gain;
    p.pump_phase = 0.6;
    p.seed = Complex{1.0, 0.0};
    cases.push_back({"three-crystal seeded", Preset::ThreeCrystal, ScanParameter::Phi, p,
                     &classical,
                     [=](double x) { return reference::three_crystal_classical(g2, n, x, 0.6); }});
  }
  {
    PresetParams p;
    p.gain = gain;
    p.pump_phase = 0.6;
    cases.push_back({"three-crystal vacuum", Preset::ThreeCrystal, ScanParameter::Phi, p,
                     &quantum,
                     [=](double x) { return reference::three_crystal_unseeded(g2, x); }});
  }

  double worst = -1.0;
  const char* worst_name = "";
  for (const auto& c : cases) {
    const auto scan = preset_rate_scan(c.preset, c.base, c.param, grid, *c.opt);
    std::vector<double> law(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) law[i] = c.law(grid[i]);
    const double gap = grid_rel_gap(scan.y, law);
    if (gap > worst) {
      worst = gap;
      worst_name = c.name;
    }
  }

  // constant-term check on the seeded three-crystal rate
  double offset_gap = 0.0;
  {
    const auto& c = cases[3];
    const auto scan = preset_rate_scan(c.preset, c.base, c.param, grid, *c.opt);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      const double constant2 = g2 * n *
          (2.0 - 2.0 * std::sin(x) - 2.0 * std::sin(x + 0.6) + 2.0 * std::cos(0.6));
      offset_gap = std::max(offset_gap, std::abs(scan.y[i] - constant2 - g2 * n));
    }
    offset_gap /= g2 * n;
  }

  report("A3", worst < 1e-12 && offset_gap < 1e-9,
         "five closed-form rate laws hold pointwise: max rel gap = " + num(worst) + " (" +
             worst_name + ", tol 1e-12); three-crystal constant term is 3: engine sits g2*n " +
             "above the constant-2 variant to rel " + num(offset_gap));
}

// A4: stimulated fringe visibility n/(n+1) on the parallel layout.
void a4_stimulated_visibility() {
  const CompileOptions opt;
  const auto grid = linspace(0.0, 2 * kPi, 401);
  double worst = -1.0, worst_n = 0.0;
  std::string values;
  for (double n : {0.0, 1.0, 4.0, 9.0, 99.0}) {
    PresetParams p;
    p.seed = Complex{std::sqrt(n), 0.0};
    const auto scan = preset_rate_scan(Preset::Parallel23, p, ScanParameter::Phi, grid, opt);
    const double v = fringe_stats(scan).visibility;
    const double dv = std::abs(v - reference::stimulated_visibility(n));
    if (!values.empty()) values += ", ";
    values += num(v);
    if (dv > worst) {
      worst = dv;
      worst_n = n;
    }
  }
  report("A4", worst < 1e-9,
         "parallel seeded visibility = n/(n+1): V = {" + values + "} for n in {0,1,4,9,99}, " +
             "max |dV| = " + num(worst) + " at n = " + num(worst_n) + " (tol 1e-9)");
}

// A5: the Fock simulation adjudicates the coincidence transmission law on the
// vacuum-input filter layout.  Two candidate laws are in play, V = 2t/(1+t^2)
// and V = t; the criterion is that the exact curve matches exactly one of
// them, the same one at every tau, and records which.
void a5_coincidence_adjudication() {
  const auto grid = linspace(0.0, 2 * kPi, 61);
  const fock::OracleOptions oo;  // vacuum inputs, default cutoff
  std::string vis;
  double worst_mixed = 0.0, closest_linear = 1e9;
  int verdict = 0;  // +1 mixed law, -1 linear law, 0 ambiguous
  bool consistent = true;
  for (double t : {0.25, 0.5, 0.75}) {
    PresetParams base;
    base.gain = Complex{0.01, 0.0};
    base.tau = Complex{t, 0.0};
    std::vector<double> y(grid.size());
    for_indices(grid.size(), [&](std::size_t i) {
      const auto net =
          build_preset(Preset::FilterSetup, preset_params_at(base, ScanParameter::Phi, grid[i]));
      y[i] = fock::FockSim(net, oo).coincidence("A", "D");
    });
    const double v = fringe_stats(Scan{grid, y}).visibility;
    const double d_mixed = std::abs(v - reference::filter_visibility_classical(t));
    const double d_linear = std::abs(v - reference::filter_visibility_unseeded(t));
    const bool mixed = d_mixed < 0.02, linear = d_linear < 0.02;
    const int this_verdict = (mixed && !linear) ? 1 : (linear && !mixed) ? -1 : 0;
    if (verdict == 0) verdict = this_verdict;
    consistent = consistent && this_verdict != 0 && this_verdict == verdict;
    worst_mixed = std::max(worst_mixed, d_mixed);
    closest_linear = std::min(closest_linear, d_linear);
    if (!vis.empty()) vis += ", ";
    vis += num(v);
  }
  const char* law = verdict > 0 ? "2t/(1+t^2)" : verdict < 0 ? "t" : "neither law";
  report("A5", consistent && verdict != 0,
         "coincidence visibility of the vacuum filter layout = {" + vis +
             "} at tau {0.25, 0.5, 0.75}: matches " + law + " (max gap " + num(worst_mixed) +
             "), rejects the other (min gap " + num(closest_linear) + "; tol 0.02)");
}

// A6: engine against the truncated Fock simulation on every preset, with and
// without a coherent seed.  Rates are compared at generic scan points away
// from the fringe nulls, visibilities via full scans.
void a6_engine_oracle_equivalence() {
  const std::array<double, 9> pts = {0.3, 0.9, 2.3, 2.9, 3.5, 4.1, 4.7, 5.3, 5.9};
  const auto vis_grid = linspace(0.0, 2 * kPi, 61);
  const CompileOptions copt;
  double worst_rate = -1.0, worst_vis = -1.0;
  std::string worst_rate_at, worst_vis_at;
  for (Preset p : all_presets()) {
    for (bool seeded : {false, true}) {
      PresetParams base;
      base.gain = Complex{0.01, 0.0};
      base.phi = (p == Preset::Cascade13) ? 0.77 : 0.0;
      base.pump_phase = 0.6;  // read only by the two-pump layouts
      if (seeded) base.seed = Complex{1.0, 0.0};
      const ScanParameter param = fringe_parameter(p);
      fock::OracleOptions oo;
      oo.cutoff = seeded ? 10 : 4;
      const std::string label =
          std::string(preset_name(p)) + (seeded ? "/seeded" : "/vacuum");

      std::array<double, 9> rel{};
      for_indices(pts.size(), [&](std::size_t i) {
        const auto net = build_preset(p, preset_params_at(base, param, pts[i]));
        const double engine = detector_rate(compile(net, copt), "A");
        const double oracle = fock::FockSim(net, oo).rate("A");
        rel[i] = std::abs(engine - oracle) / std::abs(oracle);
      });
      for (double r : rel) {
        if (r > worst_rate) {
          worst_rate = r;
          worst_rate_at = label;
        }
      }

      const auto escan = preset_rate_scan(p, base, param, vis_grid, copt);
      std::vector<double> oy(vis_grid.size());
      for_indices(vis_grid.size(), [&](std::size_t i) {
        const auto net = build_preset(p, preset_params_at(base, param, vis_grid[i]));
        oy[i] = fock::FockSim(net, oo).rate("A");
      });
      const double dv = std::abs(fringe_stats(escan).visibility -
                                 fringe_stats(Scan{vis_grid, oy}).visibility);
      if (dv > worst_vis) {
        worst_vis = dv;
        worst_vis_at = label;
      }
    }
  }
  report("A6", worst_rate < 1e-3 && worst_vis < 0.01,
         "engine vs Fock simulation on all 10 preset/seed configurations: max rate rel gap = " +
             num(worst_rate) + " (" + worst_rate_at + ", tol 1e-3), max |dV| = " + num(worst_vis) +
             " (" + worst_vis_at + ", tol 0.01)");
}

// A7: every member of the deterministic phase ensemble locks to the
// amplifying branch before the signal grows 100x, conserving both invariants.
void a7_phase_locking() {
  const auto ens = dynamics::locking_ensemble(1.0, 1e-3, 1.0, 16, 12.0);
  std::size_t locked = 0;
  double min_sin = 1e9, max_gain = 0.0, max_drift = 0.0;
  for (const auto& m : ens) {
    if (m.report.locked) ++locked;
    min_sin = std::min(min_sin, m.report.sin_at_lock);
    max_gain = std::max(max_gain, m.report.gain_at_lock);
    max_drift = std::max(max_drift, m.invariant_drift);
  }
  const bool pass =
      locked == ens.size() && min_sin > 0.99 && max_gain <= 100.0 && max_drift < 1e-8;
  report("A7", pass,
         std::to_string(locked) + "/16 members lock on the sin(dtheta) = +1 branch: min sin = " +
             num(min_sin) + ", max gain at lock = " + num(max_gain) +
             " (bound 100), max invariant drift = " + num(max_drift) + " (tol 1e-8)");
}

// A8: in the linear regime the signal and idler phases stay individually
// uncorrelated while their sum correlates with the pump.
void a8_linear_correlators() {
  bool exact = true;
  int count = 0;
  for (int k = 1; k <= 10; ++k) {
    for (double sign : {1.0, -1.0}) {
      const double gain_k = sign * 0.01 * k;
      exact = exact && dynamics::pairwise_correlator(gain_k) == Complex{0.0, 0.0};
      exact = exact && dynamics::phase_sum_correlator(gain_k) == Complex{0.0, -gain_k};
      ++count;
    }
  }
  report("A8", exact,
         "<Es- Ei+> = 0 and <Es+ Ei+> = -iK bitwise at " + std::to_string(count) +
             " gains with |K| <= 0.1");
}

LadderOp random_op(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  const int c = pick(rng);
  return LadderOp{ModeId{(c % 2) ? "m1" : "m2"},
                  (c / 2) ? Ladder::Create : Ladder::Annihilate};
}

std::vector<LadderOp> random_word(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::vector<LadderOp> w(len(rng));
  for (auto& op : w) op = random_op(rng);
  return w;
}

// A9: structural property suites.
void a9_structural_invariants() {
  std::mt19937 rng(20260823u);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::string first_fail;
  auto note_fail = [&](const std::string& what) {
    if (first_fail.empty()) first_fail = what;
  };

  // Canonical form is a fixed point: expand every stored monomial back into
  // an explicit word, re-order, and recover the expression bitwise.
  bool fixed_point = true;
  for (int trial = 0; trial < 300; ++trial) {
    const auto w = random_word(rng, 6);
    const OperatorExpr e = normal_order(w, Complex{sym(rng), sym(rng)});
    OperatorExpr rebuilt;
    for (const auto& [sig, coeff] : e.terms()) {
      std::vector<LadderOp> mono;
      for (const auto& [label, p] : sig.creators)
        for (int r = 0; r < p; ++r) mono.push_back(LadderOp{ModeId{label}, Ladder::Create});
      for (const auto& [label, p] : sig.annihilators)
        for (int r = 0; r < p; ++r) mono.push_back(LadderOp{ModeId{label}, Ladder::Annihilate});
      rebuilt += normal_order(mono, coeff);
    }
    if (!(rebuilt == e)) {
      fixed_point = false;
      note_fail("canonical fixed point broke");
      break;
    }
  }

  // Matrix equivalence: symbolic coherent-state expectations against dense
  // moments of the same state.
  double worst_matrix = 0.0;
  {
    const Complex a1{0.4, -0.2}, a2{-0.3, 0.35};
    NetworkSpec net;
    net.components = {Seed{ModeId{"m1"}, a1}, Seed{ModeId{"m2"}, a2},
                      Detector{"A", ModeId{"m1"}}};
    fock::OracleOptions oo;
    oo.cutoff = 20;
    const fock::FockSim sim(net, oo);
    StateSpec st;
    st.set_coherent(ModeId{"m1"}, a1);
    st.set_coherent(ModeId{"m2"}, a2);
    for (int trial = 0; trial < 200; ++trial) {
      const auto w = random_word(rng, 6);
      const Complex symbolic = expectation(normal_order(w), st);
      const Complex dense = sim.moment(w);
      worst_matrix = std::max(worst_matrix,
                              std::abs(symbolic - dense) / std::max(1.0, std::abs(symbolic)));
    }
  }
  if (worst_matrix >= 1e-12) note_fail("dense moment mismatch " + num(worst_matrix));

  // Filters keep the output commutator canonical: the operator part cancels
  // identically for any transmission, the constant stays at 1.
  bool comm_constant = true;
  double worst_comm = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Complex tau = std::polar(u01(rng), 2 * kPi * u01(rng));
    NetworkSpec n;
    n.components = {Filter{ModeId{"i", ModeKind::Idler}, tau, ModeId{"v", ModeKind::Ancilla}},
                    Detector{"D", ModeId{"i", ModeKind::Idler}}};
    const auto net = compile(n);
    const OperatorExpr f = net.detector("D").e_plus.order(0);
    const OperatorExpr comm = commutator(f, adjoint(f));
    comm_constant = comm_constant && comm.is_constant();
    worst_comm = std::max(worst_comm, std::abs(comm.constant_term() - Complex{1.0, 0.0}));
  }
  const bool comm_ok = comm_constant && worst_comm < 1e-15;
  if (!comm_ok) note_fail("filter commutator drifted " + num(worst_comm));

  // Adjoint is an involution on random expressions.
  bool involution = true;
  for (int trial = 0; trial < 300; ++trial) {
    OperatorExpr e;
    std::uniform_int_distribution<int> nterms(1, 4);
    const int terms = nterms(rng);
    for (int j = 0; j < terms; ++j)
      e += normal_order(random_word(rng, 5), Complex{sym(rng), sym(rng)});
    if (!(adjoint(adjoint(e)) == e)) {
      involution = false;
      note_fail("adjoint involution broke");
      break;
    }
  }

  // Random small networks: every compiled network yields finite real
  // nonnegative detector rates; invalid layouts must be rejected with
  // diagnostics rather than crash or mis-evaluate.
  std::size_t compiled_count = 0, rejected = 0;
  bool rates_ok = true;
  double min_rate = 0.0;
  const std::array<const char*, 4> pool = {"m0", "m1", "m2", "m3"};
  for (int trial = 0; trial < 10000; ++trial) {
    NetworkSpec net;
    int fresh = 0;
    int extra_detectors = 0;
    std::vector<std::string> sinks(pool.begin(), pool.end());
    auto pool_mode = [&] {
      std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
      return ModeId{pool[d(rng)]};
    };
    auto sink_mode = [&] {
      std::uniform_int_distribution<std::size_t> d(0, sinks.size() - 1);
      return ModeId{sinks[d(rng)]};
    };
    std::uniform_int_distribution<int> ncomp(1, 5), type(0, 13);
    const int k = ncomp(rng);
    for (int j = 0; j < k; ++j) {
      switch (type(rng)) {
        case 0:
        case 1:
        case 2: {
          const ModeId a = pool_mode();
          ModeId b = pool_mode();
          while (b.label == a.label) b = pool_mode();
          net.components.push_back(Crystal{a, b, std::polar(0.003 + 0.02 * u01(rng), 2 * kPi * u01(rng)),
                                           2 * kPi * u01(rng)});
          break;
        }
        case 3:
        case 4:
          net.components.push_back(PhaseShift{pool_mode(), 4 * kPi * (u01(rng) - 0.5)});
          break;
        case 5:
        case 6:
          net.components.push_back(Mirror{pool_mode()});
          break;
        case 7:
        case 8:
          net.components.push_back(Filter{pool_mode(), std::polar(u01(rng), 2 * kPi * u01(rng)),
                                          ModeId{"x" + std::to_string(fresh++)}});
          break;
        case 9:
        case 10:
          net.components.push_back(Seed{pool_mode(), std::polar(u01(rng), 2 * kPi * u01(rng))});
          break;
        case 11:
        case 12: {
          const ModeId a = pool_mode();
          ModeId b = pool_mode();
          while (b.label == a.label) b = pool_mode();
          const std::string out = "x" + std::to_string(fresh++);
          net.components.push_back(Combiner{{a, b}, ModeId{out}, {}});
          sinks.push_back(out);
          break;
        }
        default:
          net.components.push_back(
              Detector{"E" + std::to_string(extra_detectors++), sink_mode()});
          break;
      }
    }
    net.components.push_back(Detector{"A", sink_mode()});
    if (u01(rng) < 0.5)
      net.initial_state.set_coherent(pool_mode(), std::polar(u01(rng), 2 * kPi * u01(rng)));

    CompiledNetwork cn;
    try {
      cn = compile(net);
    } catch (const NetworkError&) {
      ++rejected;
      continue;
    }
    ++compiled_count;
    try {
      for (const auto& d : cn.detectors) {
        const double r = detector_rate(cn, d.name);
        if (!std::isfinite(r) || r < -1e-12) {
          rates_ok = false;
          note_fail("rate " + num(r) + " at detector " + d.name);
        }
        min_rate = std::min(min_rate, r);
      }
      if (cn.detectors.size() >= 2) {
        const double rc =
            coincidence_rate(cn, cn.detectors[0].name, cn.detectors[1].name);
        if (!std::isfinite(rc)) {
          rates_ok = false;
          note_fail("non-finite coincidence rate");
        }
      }
    } catch (const std::exception& e) {
      rates_ok = false;
      note_fail(e.what());
    }
  }

  const bool pass = fixed_point && worst_matrix < 1e-12 && comm_ok && involution && rates_ok &&
                    compiled_count >= 8000;
  std::string detail =
      "canonical form is a fixed point; dense moments match symbolic expectations (max rel " +
      num(worst_matrix) + ", tol 1e-12); [filter, filter+] = 1 (operator part cancels, constant "
      "within " + num(worst_comm) + "); adjoint involution holds; " +
      std::to_string(compiled_count) + "/10000 random networks compiled with real nonnegative "
      "rates (min " + num(min_rate) + "), " + std::to_string(rejected) +
      " rejected with diagnostics";
  if (!pass && !first_fail.empty()) detail += "; first failure: " + first_fail;
  report("A9", pass, detail);
}

}  // namespace

int main() {
  a1_seeded_filter_law();
  a2_unseeded_filter_law();
  a3_closed_form_rates();
  a4_stimulated_visibility();
  a5_coincidence_adjudication();
  a6_engine_oracle_equivalence();
  a7_phase_locking();
  a8_linear_correlators();
  a9_structural_invariants();
  std::printf("%d/9 criteria passed\n", 9 - g_failed);
  return g_failed == 0 ? 0 : 1;
}
