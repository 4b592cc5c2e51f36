#include "pdcnet/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace pdcnet::dynamics {

namespace odeint = boost::numeric::odeint;
using std::numbers::pi;

FieldState pack(Complex e_s, Complex e_i, Complex e_p) {
  return {e_s.real(), e_s.imag(), e_i.real(), e_i.imag(), e_p.real(), e_p.imag()};
}

std::array<Complex, 3> unpack(const FieldState& y) {
  return {Complex{y[0], y[1]}, Complex{y[2], y[3]}, Complex{y[4], y[5]}};
}

double relative_phase(const FieldState& y) {
  auto [es, ei, ep] = unpack(y);
  double d = std::arg(ep) - std::arg(es) - std::arg(ei);
  while (d > pi) d -= 2.0 * pi;
  while (d <= -pi) d += 2.0 * pi;
  return d;
}

std::array<double, 3> magnitudes(const FieldState& y) {
  auto [es, ei, ep] = unpack(y);
  return {std::abs(es), std::abs(ei), std::abs(ep)};
}

std::array<double, 2> invariants(const FieldState& y) {
  auto [es, ei, ep] = unpack(y);
  return {std::norm(es) - std::norm(ei), std::norm(es) + std::norm(ep)};
}

namespace {

struct ThreeWaveRhs {
  double kappa;
  void operator()(const FieldState& y, FieldState& dy, double) const {
    Complex es{y[0], y[1]}, ei{y[2], y[3]}, ep{y[4], y[5]};
    const Complex mik{0.0, -kappa};
    Complex ds = mik * ep * std::conj(ei);
    Complex di = mik * ep * std::conj(es);
    Complex dp = mik * es * ei;
    dy = {ds.real(), ds.imag(), di.real(), di.imag(), dp.real(), dp.imag()};
  }
};

std::vector<double> sample_points(double z_max, std::size_t samples) {
  std::vector<double> z;
  z.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i)
    z.push_back(z_max * double(i) / double(samples - 1));
  return z;
}

}  // namespace

Trajectory integrate_three_wave(double kappa, const FieldState& y0, double z_max,
                                const IntegrateOptions& opt) {
  Trajectory out;
  out.z = sample_points(z_max, std::max<std::size_t>(2, opt.samples));
  out.state.reserve(out.z.size());
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol,
                                         odeint::runge_kutta_dopri5<FieldState>());
  FieldState y = y0;
  odeint::integrate_times(stepper, ThreeWaveRhs{kappa}, y, out.z.begin(), out.z.end(),
                          1e-4, [&](const FieldState& s, double) { out.state.push_back(s); });
  return out;
}

std::array<double, 4> reduced_rhs(double kappa, const std::array<double, 4>& y) {
  auto [rs, ri, rp, dt] = y;
  double sd = std::sin(dt), cd = std::cos(dt);
  return {kappa * ri * rp * sd, kappa * rs * rp * sd, -kappa * rs * ri * sd,
          kappa * cd * (rp * ri / rs + rp * rs / ri - rs * ri / rp)};
}

ReducedTrajectory integrate_reduced(double kappa, const std::array<double, 4>& y0,
                                    double z_max, const IntegrateOptions& opt) {
  using State = std::array<double, 4>;
  ReducedTrajectory out;
  out.z = sample_points(z_max, std::max<std::size_t>(2, opt.samples));
  out.state.reserve(out.z.size());
  auto stepper =
      odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
  State y = y0;
  odeint::integrate_times(
      stepper, [kappa](const State& s, State& ds, double) { ds = reduced_rhs(kappa, s); }, y,
      out.z.begin(), out.z.end(), 1e-4,
      [&](const State& s, double) { out.state.push_back(s); });
  return out;
}

LockingReport detect_locking(const Trajectory& t, double cos_tol) {
  LockingReport r;
  if (t.state.empty()) return r;
  double rs0 = magnitudes(t.state.front())[0];
  for (std::size_t i = 0; i < t.state.size(); ++i) {
    double dt = relative_phase(t.state[i]);
    if (!r.locked && std::abs(std::cos(dt)) < cos_tol) {
      r.locked = true;
      r.z_lock = t.z[i];
      r.gain_at_lock = rs0 > 0.0 ? magnitudes(t.state[i])[0] / rs0 : 0.0;
      r.sin_at_lock = std::sin(dt);
    }
  }
  r.dtheta_end = relative_phase(t.state.back());
  return r;
}

std::vector<EnsembleMember> locking_ensemble(double kappa, double seed_mag, double pump_mag,
                                             std::size_t members, double z_max,
                                             const IntegrateOptions& opt) {
  std::vector<EnsembleMember> out;
  out.reserve(members);
  for (std::size_t k = 0; k < members; ++k) {
    double dtheta0 = (2.0 * double(k) + 1.0 - double(members)) * pi / double(members);
    // dtheta = theta_p - theta_s - theta_i; put the offset on the signal.
    Complex es = seed_mag * std::exp(Complex{0.0, -dtheta0});
    FieldState y0 = pack(es, {seed_mag, 0.0}, {pump_mag, 0.0});
    Trajectory t = integrate_three_wave(kappa, y0, z_max, opt);

    EnsembleMember m;
    m.dtheta0 = dtheta0;
    m.report = detect_locking(t);
    auto inv0 = invariants(t.state.front());
    for (const auto& s : t.state) {
      auto inv = invariants(s);
      m.invariant_drift = std::max({m.invariant_drift, std::abs(inv[0] - inv0[0]),
                                    std::abs(inv[1] - inv0[1])});
    }
    out.push_back(std::move(m));
  }
  return out;
}

OperatorExpr signal_out_linear(double gain_k, const ModeId& s, const ModeId& i) {
  return OperatorExpr::annihilator(s) + Complex{0.0, -gain_k} * OperatorExpr::creator(i);
}

OperatorExpr idler_out_linear(double gain_k, const ModeId& s, const ModeId& i) {
  return OperatorExpr::annihilator(i) + Complex{0.0, -gain_k} * OperatorExpr::creator(s);
}

namespace {

const ModeId kS{"s", ModeKind::Signal};
const ModeId kI{"i", ModeKind::Idler};

}  // namespace

Complex phase_sum_correlator(double gain_k) {
  StateSpec vacuum;
  return expectation(
      multiply(signal_out_linear(gain_k, kS, kI), idler_out_linear(gain_k, kS, kI)), vacuum);
}

Complex pairwise_correlator(double gain_k) {
  StateSpec vacuum;
  return expectation(multiply(adjoint(signal_out_linear(gain_k, kS, kI)),
                              idler_out_linear(gain_k, kS, kI)),
                     vacuum);
}

}  // namespace pdcnet::dynamics
