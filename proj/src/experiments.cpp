#include "pdcnet/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace pdcnet {

namespace {

const Complex kI{0.0, 1.0};

ModeId sig(const char* label) { return {label, ModeKind::Signal}; }
ModeId idl(const char* label) { return {label, ModeKind::Idler}; }
ModeId anc(const char* label) { return {label, ModeKind::Ancilla}; }

}  // namespace

NetworkSpec build_preset(Preset p, const PresetParams& q) {
  NetworkSpec n;
  auto seed = [&](const char* label) {
    if (q.seed) n.components.push_back(Seed{idl(label), *q.seed});
  };
  switch (p) {
    case Preset::Cascade12:
      seed("i1");
      n.components.push_back(Crystal{sig("s1"), idl("i1"), q.gain, 0.0});
      n.components.push_back(PhaseShift{sig("s1"), q.phi});
      n.components.push_back(Mirror{sig("s1")});
      n.components.push_back(Crystal{sig("s2"), idl("i1"), q.gain, 0.0});
      n.components.push_back(Combiner{{sig("s1"), sig("s2")}, sig("sA"), {}});
      n.components.push_back(Detector{"A", sig("sA")});
      break;
    case Preset::Parallel23:
      seed("i2");
      seed("i3");
      n.components.push_back(Crystal{sig("s2"), idl("i2"), q.gain, 0.0});
      n.components.push_back(Crystal{sig("s3"), idl("i3"), q.gain, 0.0});
      n.components.push_back(PhaseShift{sig("s3"), q.phi});
      n.components.push_back(Mirror{sig("s3")});
      n.components.push_back(Combiner{{sig("s3"), sig("s2")}, sig("sA"), {}});
      n.components.push_back(Detector{"A", sig("sA")});
      break;
    case Preset::Cascade13:
      seed("i1");
      seed("i3");
      n.components.push_back(Crystal{sig("s1"), idl("i1"), q.gain, 0.0});
      n.components.push_back(Crystal{sig("s1"), idl("i3"), q.gain, q.pump_phase});
      n.components.push_back(PhaseShift{sig("s1"), q.phi});
      n.components.push_back(Mirror{sig("s1")});
      n.components.push_back(Detector{"A", sig("s1")});
      break;
    case Preset::ThreeCrystal:
      seed("i1");
      seed("i3");
      n.components.push_back(Crystal{sig("s1"), idl("i1"), q.gain, 0.0});
      n.components.push_back(Crystal{sig("s1"), idl("i3"), q.gain, q.pump_phase});
      n.components.push_back(Mirror{sig("s1")});
      n.components.push_back(PhaseShift{sig("s1"), q.phi});
      n.components.push_back(Crystal{sig("s2"), idl("i1"), q.gain, 0.0});
      n.components.push_back(Combiner{{sig("s1"), sig("s2")}, sig("sA"), {}});
      n.components.push_back(Detector{"A", sig("sA")});
      break;
    case Preset::FilterSetup:
      seed("i1");
      n.components.push_back(Crystal{sig("s1"), idl("i1"), q.gain, 0.0});
      n.components.push_back(Filter{idl("i1"), q.tau, anc("anc0")});
      n.components.push_back(Crystal{sig("s2"), idl("i1"), q.gain, 0.0});
      n.components.push_back(PhaseShift{sig("s1"), q.phi});
      n.components.push_back(Mirror{sig("s1")});
      n.components.push_back(Combiner{{sig("s1"), sig("s2")}, sig("sA"), {}});
      n.components.push_back(Detector{"A", sig("sA")});
      n.components.push_back(Detector{"D", idl("i1")});
      break;
  }
  return n;
}

std::vector<std::string> preset_detectors(Preset p) {
  if (p == Preset::FilterSetup) return {"A", "D"};
  return {"A"};
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Cascade12: return "cascade12";
    case Preset::Parallel23: return "parallel23";
    case Preset::Cascade13: return "cascade13";
    case Preset::ThreeCrystal: return "three-crystal";
    case Preset::FilterSetup: return "filter";
  }
  return "";
}

std::optional<Preset> preset_from_name(std::string_view name) {
  for (Preset p : all_presets())
    if (preset_name(p) == name) return p;
  return std::nullopt;
}

std::vector<Preset> all_presets() {
  return {Preset::Cascade12, Preset::Parallel23, Preset::Cascade13, Preset::ThreeCrystal,
          Preset::FilterSetup};
}

ScanParameter fringe_parameter(Preset p) {
  return p == Preset::Cascade13 ? ScanParameter::PumpPhase : ScanParameter::Phi;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(a);
    return out;
  }
  double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(a + double(i) * h);
  return out;
}

PresetParams preset_params_at(const PresetParams& base, ScanParameter which, double x) {
  PresetParams q = base;
  switch (which) {
    case ScanParameter::Phi:
      q.phi = x;
      if (q.couple_pump) q.pump_phase = *q.couple_pump * x;
      break;
    case ScanParameter::PumpPhase: q.pump_phase = x; break;
    case ScanParameter::TauMagnitude: {
      double arg = (q.tau == Complex{0.0, 0.0}) ? 0.0 : std::arg(q.tau);
      q.tau = x * std::exp(kI * arg);
      break;
    }
  }
  return q;
}

Scan preset_rate_scan(Preset p, const PresetParams& base, ScanParameter which,
                      const std::vector<double>& grid, const CompileOptions& opt,
                      std::string_view detector) {
  Scan s;
  s.x = grid;
  s.y.reserve(grid.size());
  for (double x : grid) {
    auto net = compile(build_preset(p, preset_params_at(base, which, x)), opt);
    s.y.push_back(detector_rate(net, detector));
  }
  return s;
}

Scan preset_coincidence_scan(Preset p, const PresetParams& base, ScanParameter which,
                             const std::vector<double>& grid, const CompileOptions& opt,
                             std::string_view detector_a, std::string_view detector_d) {
  Scan s;
  s.x = grid;
  s.y.reserve(grid.size());
  for (double x : grid) {
    auto net = compile(build_preset(p, preset_params_at(base, which, x)), opt);
    s.y.push_back(coincidence_rate(net, detector_a, detector_d));
  }
  return s;
}

namespace {

// Vertex of the parabola through three points; falls back to the middle point
// when the second difference vanishes.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1,
                                          double x2, double y2) {
  double d1 = (y1 - y0) / (x1 - x0);
  double d2 = (y2 - y1) / (x2 - x1);
  double a2 = (d2 - d1) / (x2 - x0);
  double scale = std::max({std::abs(y0), std::abs(y1), std::abs(y2), 1e-300});
  if (std::abs(a2) * (x2 - x0) * (x2 - x0) < 1e-12 * scale) return {x1, y1};
  double xv = 0.5 * (x0 + x1) - d1 / (2.0 * a2);
  xv = std::clamp(xv, x0, x2);
  double yv = y0 + d1 * (xv - x0) + a2 * (xv - x0) * (xv - x1);
  return {xv, yv};
}

}  // namespace

FringeStats fringe_stats(const Scan& s) {
  if (s.x.size() != s.y.size() || s.x.empty())
    throw std::invalid_argument("fringe_stats needs a nonempty scan with matching sizes");
  FringeStats f;
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < s.y.size(); ++i) {
    if (s.y[i] > s.y[imax]) imax = i;
    if (s.y[i] < s.y[imin]) imin = i;
  }
  auto refine = [&](std::size_t i) -> std::pair<double, double> {
    if (i == 0 || i + 1 >= s.y.size()) return {s.x[i], s.y[i]};
    return parabola_vertex(s.x[i - 1], s.y[i - 1], s.x[i], s.y[i], s.x[i + 1], s.y[i + 1]);
  };
  std::tie(f.x_max, f.r_max) = refine(imax);
  std::tie(f.x_min, f.r_min) = refine(imin);
  double denom = f.r_max + f.r_min;
  f.visibility = (std::abs(denom) < 1e-300) ? 0.0 : (f.r_max - f.r_min) / denom;
  return f;
}

namespace {

// Least-squares fit of y = c0 + c1 sin(wx) + c2 cos(wx) at fixed w.
// Returns the residual sum of squares.
double ls_at_frequency(const Scan& s, double w, std::array<double, 3>& coeff) {
  double m[3][3] = {};
  double b[3] = {};
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    double basis[3] = {1.0, std::sin(w * s.x[i]), std::cos(w * s.x[i])};
    for (int r = 0; r < 3; ++r) {
      b[r] += basis[r] * s.y[i];
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    double diag = m[perm[col]][col];
    if (std::abs(diag) < 1e-300) {
      coeff = {0.0, 0.0, 0.0};
      return 1e300;
    }
    for (int r = col + 1; r < 3; ++r) {
      double f = m[perm[r]][col] / diag;
      for (int c = col; c < 3; ++c) m[perm[r]][c] -= f * m[perm[col]][c];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double acc = b[perm[col]];
    for (int c = col + 1; c < 3; ++c) acc -= m[perm[col]][c] * coeff[std::size_t(c)];
    coeff[std::size_t(col)] = acc / m[perm[col]][col];
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    double fit = coeff[0] + coeff[1] * std::sin(w * s.x[i]) + coeff[2] * std::cos(w * s.x[i]);
    double r = s.y[i] - fit;
    ss += r * r;
  }
  return ss;
}

}  // namespace

SinusoidFit fit_sinusoid(const Scan& s, double min_freq, double max_freq) {
  if (s.x.size() != s.y.size() || s.x.size() < 4)
    throw std::invalid_argument("fit_sinusoid needs at least four samples");
  std::array<double, 3> coeff{};

  // Coarse scan fine enough that no fringe of the plotted range is skipped.
  const int coarse = 1200;
  double best_w = min_freq, best_ss = 1e300;
  for (int i = 0; i <= coarse; ++i) {
    double w = min_freq + (max_freq - min_freq) * double(i) / coarse;
    double ss = ls_at_frequency(s, w, coeff);
    if (ss < best_ss) {
      best_ss = ss;
      best_w = w;
    }
  }

  double step = (max_freq - min_freq) / coarse;
  double lo = std::max(min_freq, best_w - 2.0 * step);
  double hi = std::min(max_freq, best_w + 2.0 * step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = ls_at_frequency(s, x1, coeff);
  double f2 = ls_at_frequency(s, x2, coeff);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = ls_at_frequency(s, x1, coeff);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = ls_at_frequency(s, x2, coeff);
    }
  }
  double w = 0.5 * (a + b);
  double ss = ls_at_frequency(s, w, coeff);

  SinusoidFit fit;
  fit.frequency = w;
  fit.offset = coeff[0];
  fit.amplitude = std::hypot(coeff[1], coeff[2]);
  fit.phase = std::atan2(coeff[2], coeff[1]);
  fit.rms_residual = std::sqrt(ss / double(s.x.size()));
  return fit;
}

namespace reference {

double cascade12_seeded(double g2, double n, double phi) {
  return 2.0 * g2 * (1.0 - std::sin(phi)) * (n + 1.0);
}

double cascade12_classical(double g2, double n, double phi) {
  return 2.0 * g2 * n * (1.0 - std::sin(phi));
}

double parallel23_seeded(double g2, double n, double phi) {
  return 2.0 * g2 * (1.0 + n * (1.0 - std::sin(phi)));
}

double cascade13_classical(double g2, double n, double pump_phase) {
  return 2.0 * g2 * n * (1.0 + std::cos(pump_phase));
}

double three_crystal_classical(double g2, double n, double phi, double pump_phase) {
  return g2 * n *
         (3.0 - 2.0 * std::sin(phi) - 2.0 * std::sin(phi + pump_phase) +
          2.0 * std::cos(pump_phase));
}

double three_crystal_unseeded(double g2, double phi) {
  return g2 * (3.0 - 2.0 * std::sin(phi));
}

double filter_classical(double g2, double n, double t, double phi_plus_theta) {
  return g2 * n * (1.0 + t * t - 2.0 * t * std::sin(phi_plus_theta));
}

double filter_unseeded(double g2, double t, double phi_plus_theta) {
  return 2.0 * g2 * (1.0 - t * std::sin(phi_plus_theta));
}

double filter_seeded(double g2, double n, double t, double phi_plus_theta) {
  return g2 * ((1.0 + t * t) * n + 2.0 - 2.0 * t * (n + 1.0) * std::sin(phi_plus_theta));
}

double filter_coincidence_unseeded(double g2, double t, double phi_plus_theta) {
  return g2 * (1.0 + t * t - 2.0 * t * std::sin(phi_plus_theta));
}

double filter_visibility_classical(double t) { return 2.0 * t / (1.0 + t * t); }

double filter_visibility_unseeded(double t) { return t; }

double stimulated_visibility(double n) { return n / (n + 1.0); }

}  // namespace reference

}  // namespace pdcnet
