#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdcnet/experiments.hpp"

using namespace pdcnet;
using std::numbers::pi;

namespace {

const Complex kI{0.0, 1.0};

CompileOptions classical_opts() {
  CompileOptions o;
  o.classical_seed = true;
  return o;
}

void check_scan_matches(const Scan& s, const std::vector<double>& want, double rel) {
  REQUIRE(s.y.size() == want.size());
  for (std::size_t i = 0; i < s.y.size(); ++i)
    CHECK(s.y[i] == doctest::Approx(want[i]).epsilon(rel));
}

}  // namespace

TEST_CASE("preset_names_round_trip") {
  for (Preset p : all_presets()) {
    auto back = preset_from_name(preset_name(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK(!preset_from_name("nonsense").has_value());
}

TEST_CASE("cascade12_seeded_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{1.2, 0.5};
  double n = std::norm(*q.seed);
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_rate_scan(Preset::Cascade12, q, ScanParameter::Phi, grid, {});
  std::vector<double> want;
  for (double x : grid) want.push_back(reference::cascade12_seeded(1e-4, n, x));
  check_scan_matches(s, want, 1e-12);
}

TEST_CASE("cascade12_classical_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{2.0, 0.0};
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_rate_scan(Preset::Cascade12, q, ScanParameter::Phi, grid, classical_opts());
  std::vector<double> want;
  for (double x : grid) want.push_back(reference::cascade12_classical(1e-4, 4.0, x));
  check_scan_matches(s, want, 1e-12);
}

TEST_CASE("parallel23_seeded_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{0.0, 3.0};
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_rate_scan(Preset::Parallel23, q, ScanParameter::Phi, grid, {});
  std::vector<double> want;
  for (double x : grid) want.push_back(reference::parallel23_seeded(1e-4, 9.0, x));
  check_scan_matches(s, want, 1e-12);
}

TEST_CASE("cascade13_classical_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{1.5, -0.5};
  q.phi = 0.77;  // global phase on the detected arm, must drop out
  double n = std::norm(*q.seed);
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_rate_scan(Preset::Cascade13, q, ScanParameter::PumpPhase, grid,
                            classical_opts());
  std::vector<double> want;
  for (double x : grid) want.push_back(reference::cascade13_classical(1e-4, n, x));
  check_scan_matches(s, want, 1e-12);
}

TEST_CASE("three_crystal_classical_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{1.0, 1.0};
  auto grid = linspace(0.0, 2.0 * pi, 101);
  for (double pump : {0.0, 1.1, 2.9, 4.6}) {
    q.pump_phase = pump;
    auto s = preset_rate_scan(Preset::ThreeCrystal, q, ScanParameter::Phi, grid,
                              classical_opts());
    std::vector<double> want;
    for (double x : grid)
      want.push_back(reference::three_crystal_classical(1e-4, 2.0, x, pump));
    check_scan_matches(s, want, 1e-12);
  }
}

TEST_CASE("three_crystal_unseeded_matches_reference") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  auto grid = linspace(0.0, 2.0 * pi, 101);
  for (double pump : {0.0, 2.2}) {
    q.pump_phase = pump;  // without a seed the pump phase cannot show up
    auto s = preset_rate_scan(Preset::ThreeCrystal, q, ScanParameter::Phi, grid, {});
    std::vector<double> want;
    for (double x : grid) want.push_back(reference::three_crystal_unseeded(1e-4, x));
    check_scan_matches(s, want, 1e-12);
  }
}

TEST_CASE("filter_rates_match_reference_all_three_input_modes") {
  const double t = 0.6, theta = 0.9;
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.tau = t * std::exp(kI * theta);
  auto grid = linspace(0.0, 2.0 * pi, 101);

  SUBCASE("unseeded") {
    auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {});
    std::vector<double> want;
    for (double x : grid) want.push_back(reference::filter_unseeded(1e-4, t, x + theta));
    check_scan_matches(s, want, 1e-12);
  }
  SUBCASE("classical seed") {
    q.seed = Complex{2.0, 1.0};
    auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid,
                              classical_opts());
    std::vector<double> want;
    for (double x : grid)
      want.push_back(reference::filter_classical(1e-4, 5.0, t, x + theta));
    check_scan_matches(s, want, 1e-12);
  }
  SUBCASE("quantum seed") {
    q.seed = Complex{2.0, 1.0};
    auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {});
    std::vector<double> want;
    for (double x : grid) want.push_back(reference::filter_seeded(1e-4, 5.0, t, x + theta));
    check_scan_matches(s, want, 1e-12);
  }
}

TEST_CASE("filter_coincidence_matches_reference") {
  const double t = 0.5, theta = -0.4;
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.tau = t * std::exp(kI * theta);
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_coincidence_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {},
                                   "A", "D");
  std::vector<double> want;
  for (double x : grid)
    want.push_back(reference::filter_coincidence_unseeded(1e-4, t, x + theta));
  check_scan_matches(s, want, 1e-12);
}

TEST_CASE("filter_visibility_laws") {
  auto grid = linspace(0.0, 2.0 * pi, 401);
  for (double t : {0.2, 0.5, 0.9}) {
    PresetParams q;
    q.gain = {0.01, 0.0};
    q.tau = {t, 0.0};

    q.seed = Complex{1.0, 0.0};
    auto sc = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid,
                               classical_opts());
    CHECK(fringe_stats(sc).visibility ==
          doctest::Approx(reference::filter_visibility_classical(t)).epsilon(1e-9));

    q.seed.reset();
    auto su = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {});
    CHECK(fringe_stats(su).visibility ==
          doctest::Approx(reference::filter_visibility_unseeded(t)).epsilon(1e-9));
  }
}

TEST_CASE("filter_visibility_with_offgrid_extrema") {
  // A transmission phase shifts the fringe so its extrema fall between grid
  // points; the parabolic refinement has to absorb that.
  const double t = 0.7, theta = 0.321;
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.tau = t * std::exp(kI * theta);
  auto grid = linspace(0.0, 2.0 * pi, 401);
  auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {});
  CHECK(fringe_stats(s).visibility == doctest::Approx(t).epsilon(1e-7));
}

TEST_CASE("filter_seeded_visibility_interpolates") {
  // (max-min)/(max+min) of the seeded rate is 2t(n+1) / ((1+t^2) n + 2):
  // the unseeded value t at n = 0, approaching 2t/(1+t^2) for large n.
  const double t = 0.6;
  auto grid = linspace(0.0, 2.0 * pi, 401);
  for (double n : {0.0, 1.0, 3.0, 25.0}) {
    PresetParams q;
    q.gain = {0.01, 0.0};
    q.tau = {t, 0.0};
    q.seed = Complex{std::sqrt(n), 0.0};
    auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::Phi, grid, {});
    double want = 2.0 * t * (n + 1.0) / ((1.0 + t * t) * n + 2.0);
    CHECK(fringe_stats(s).visibility == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("stimulated_visibility_law") {
  auto grid = linspace(0.0, 2.0 * pi, 401);
  for (double n : {1.0, 4.0, 9.0}) {
    PresetParams q;
    q.gain = {0.01, 0.0};
    q.seed = Complex{std::sqrt(n), 0.0};
    auto s = preset_rate_scan(Preset::Parallel23, q, ScanParameter::Phi, grid, {});
    CHECK(fringe_stats(s).visibility ==
          doctest::Approx(reference::stimulated_visibility(n)).epsilon(1e-9));
  }
}

TEST_CASE("three_crystal_unseeded_visibility_two_thirds") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  auto grid = linspace(0.0, 2.0 * pi, 401);
  auto s = preset_rate_scan(Preset::ThreeCrystal, q, ScanParameter::Phi, grid, {});
  CHECK(fringe_stats(s).visibility == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("flat_scan_has_zero_visibility") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  auto grid = linspace(0.0, 2.0 * pi, 101);
  auto s = preset_rate_scan(Preset::Parallel23, q, ScanParameter::Phi, grid, {});
  CHECK(std::abs(fringe_stats(s).visibility) < 1e-12);
}

TEST_CASE("fringe_stats_locates_offgrid_peak") {
  Scan s;
  s.x = linspace(0.0, 2.0 * pi, 401);
  for (double x : s.x) s.y.push_back(2.0 + std::sin(3.0 * x + 0.7));
  auto f = fringe_stats(s);
  CHECK(f.r_max == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.r_min == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.visibility == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(std::sin(3.0 * f.x_max + 0.7) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sinusoid_fit_recovers_parameters") {
  Scan s;
  s.x = linspace(0.0, 2.0 * pi, 301);
  for (double x : s.x) s.y.push_back(0.3 + 0.8 * std::sin(2.5 * x - 0.4));
  auto fit = fit_sinusoid(s);
  CHECK(fit.frequency == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(fit.offset == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(fit.phase == doctest::Approx(-0.4).epsilon(1e-5));
  CHECK(fit.rms_residual < 1e-8);
}

TEST_CASE("coupled_pump_scan_beats") {
  // Driving the pump phase at a fixed multiple of the signal phase mixes the
  // unit-frequency fringe with components at the ratio and its successor.
  const double ratio = 808.0 / 355.0;
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.seed = Complex{1.0, 0.0};
  q.couple_pump = ratio;
  auto grid = linspace(0.0, 4.0 * pi, 257);
  auto s = preset_rate_scan(Preset::ThreeCrystal, q, ScanParameter::Phi, grid,
                            classical_opts());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double x = grid[i];
    double want = reference::three_crystal_classical(1e-4, 1.0, x, ratio * x);
    CHECK(s.y[i] == doctest::Approx(want).epsilon(1e-12));
  }
  // The beat keeps the envelope off any single sinusoid.
  auto fit = fit_sinusoid(s);
  CHECK(fit.rms_residual > 1e-6);
}

TEST_CASE("tau_magnitude_scan_sweeps_transmission") {
  PresetParams q;
  q.gain = {0.01, 0.0};
  q.phi = 0.0;
  q.tau = {0.5, 0.0};
  auto grid = linspace(0.0, 1.0, 11);
  auto s = preset_rate_scan(Preset::FilterSetup, q, ScanParameter::TauMagnitude, grid, {});
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(s.y[i] == doctest::Approx(reference::filter_unseeded(1e-4, grid[i], 0.0))
                        .epsilon(1e-12));
}

TEST_CASE("fringe_parameter_choices") {
  CHECK(fringe_parameter(Preset::Cascade13) == ScanParameter::PumpPhase);
  CHECK(fringe_parameter(Preset::Cascade12) == ScanParameter::Phi);
  CHECK(fringe_parameter(Preset::FilterSetup) == ScanParameter::Phi);
}
