#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pdcnet/network.hpp"

// Canned interferometer layouts and the scan/fringe machinery used to probe
// them.  A preset is a parametrized component list; scans rebuild the network
// at each grid point so every rate is computed from a freshly compiled field.

namespace pdcnet {

enum class Preset {
  Cascade12,     // two crystals chained through a common idler
  Parallel23,    // two independent crystals, signals combined
  Cascade13,     // two crystals pumped with a relative phase, common signal
  ThreeCrystal,  // cascade13 idlers plus a third crystal reusing the first idler
  FilterSetup,   // cascade12 with a partial transmitter on the shared idler
};

struct PresetParams {
  Complex gain{0.01, 0.0};
  double phi = 0.0;             // signal phase in the scanned arm
  double pump_phase = 0.0;      // relative pump phase on the second pump
  Complex tau{0.5, 0.0};        // transmission of the idler filter
  std::optional<Complex> seed;  // idler seed amplitude; nullopt = vacuum input
  // When set, a Phi scan also moves the pump phase as ratio * phi, the way a
  // common delay line advances both at the ratio of their wavelengths.
  std::optional<double> couple_pump;
};

// Component list for a preset at fixed parameter values.
NetworkSpec build_preset(Preset p, const PresetParams& params);

// Detector names available on a preset ("A" everywhere, "D" on the filter
// layout's transmitted idler).
std::vector<std::string> preset_detectors(Preset p);

std::string_view preset_name(Preset p);
std::optional<Preset> preset_from_name(std::string_view name);
std::vector<Preset> all_presets();

// Which PresetParams field a scan sweeps.
enum class ScanParameter { Phi, PumpPhase, TauMagnitude };

// The parameter that actually moves the fringe for a preset: pump_phase for
// cascade13 (its signal phase is global and drops out), phi elsewhere.
ScanParameter fringe_parameter(Preset p);

// base with the swept field replaced by x (a Phi sweep with couple_pump set
// also moves the pump phase).
PresetParams preset_params_at(const PresetParams& base, ScanParameter which, double x);

struct Scan {
  std::vector<double> x;
  std::vector<double> y;
};

std::vector<double> linspace(double a, double b, std::size_t n);

Scan preset_rate_scan(Preset p, const PresetParams& base, ScanParameter which,
                      const std::vector<double>& grid, const CompileOptions& opt,
                      std::string_view detector = "A");

Scan preset_coincidence_scan(Preset p, const PresetParams& base, ScanParameter which,
                             const std::vector<double>& grid, const CompileOptions& opt,
                             std::string_view detector_a, std::string_view detector_d);

struct FringeStats {
  double r_max = 0.0;
  double r_min = 0.0;
  double x_max = 0.0;
  double x_min = 0.0;
  double visibility = 0.0;  // (r_max - r_min) / (r_max + r_min), 0 for a flat scan
};

// Grid extrema with one parabolic refinement step at interior extrema, so a
// fringe peak that falls between grid points is still located to O(h^4).
FringeStats fringe_stats(const Scan& s);

// y ~ offset + amplitude * sin(frequency * x + phase), amplitude >= 0.
// Frequency is found by a coarse projection scan refined by golden section;
// the linear parameters come from least squares at the winning frequency.
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
};
SinusoidFit fit_sinusoid(const Scan& s, double min_freq = 0.1, double max_freq = 8.0);

// Closed-form rates for the preset layouts at leading order in the gain.
// g2 = |gain|^2, n = |seed|^2, t = |tau|.  "classical" means the prescribed
// classical seed limit, "seeded" a quantum coherent seed, "unseeded" vacuum.
namespace reference {

double cascade12_seeded(double g2, double n, double phi);
double cascade12_classical(double g2, double n, double phi);
double parallel23_seeded(double g2, double n, double phi);
double cascade13_classical(double g2, double n, double pump_phase);
double three_crystal_classical(double g2, double n, double phi, double pump_phase);
double three_crystal_unseeded(double g2, double phi);
double filter_classical(double g2, double n, double t, double phi_plus_theta);
double filter_unseeded(double g2, double t, double phi_plus_theta);
double filter_seeded(double g2, double n, double t, double phi_plus_theta);
double filter_coincidence_unseeded(double g2, double t, double phi_plus_theta);

double filter_visibility_classical(double t);  // 2t / (1 + t^2)
double filter_visibility_unseeded(double t);   // t
double stimulated_visibility(double n);        // n / (n + 1)

}  // namespace reference

}  // namespace pdcnet
