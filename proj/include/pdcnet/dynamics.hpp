#pragma once

#include <array>
#include <vector>

#include "pdcnet/algebra.hpp"

// Classical three-wave mixing along the crystal axis z:
//
//   dE_s/dz = -i kappa E_p conj(E_i)
//   dE_i/dz = -i kappa E_p conj(E_s)
//   dE_p/dz = -i kappa E_s E_i
//
// In amplitude-phase variables the relative phase dtheta = theta_p - theta_s
// - theta_i drives all energy flow; from a weak seed it is pulled to +pi/2,
// where the signal-idler phase sum locks to the pump phase minus pi/2.

namespace pdcnet::dynamics {

// (Re E_s, Im E_s, Re E_i, Im E_i, Re E_p, Im E_p)
using FieldState = std::array<double, 6>;

FieldState pack(Complex e_s, Complex e_i, Complex e_p);
std::array<Complex, 3> unpack(const FieldState& y);

// theta_p - theta_s - theta_i wrapped to (-pi, pi].
double relative_phase(const FieldState& y);
std::array<double, 3> magnitudes(const FieldState& y);

// |E_s|^2 - |E_i|^2 and |E_s|^2 + |E_p|^2, both conserved by the flow.
std::array<double, 2> invariants(const FieldState& y);

struct IntegrateOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t samples = 512;
};

struct Trajectory {
  std::vector<double> z;
  std::vector<FieldState> state;
};

Trajectory integrate_three_wave(double kappa, const FieldState& y0, double z_max,
                                const IntegrateOptions& opt = {});

// The same flow in (R_s, R_i, R_p, dtheta).  Singular where any amplitude
// vanishes; callers keep to strictly positive amplitudes.
std::array<double, 4> reduced_rhs(double kappa, const std::array<double, 4>& y);

struct ReducedTrajectory {
  std::vector<double> z;
  std::vector<std::array<double, 4>> state;
};

ReducedTrajectory integrate_reduced(double kappa, const std::array<double, 4>& y0,
                                    double z_max, const IntegrateOptions& opt = {});

struct LockingReport {
  bool locked = false;
  double z_lock = 0.0;        // first sample with |cos dtheta| below cos_tol
  double gain_at_lock = 0.0;  // R_s(z_lock) / R_s(0)
  // sin(dtheta) at the locking sample; +1 is the amplifying branch.  Read the
  // branch here, not from the end state: once the pump empties the flow turns
  // around and back-conversion holds dtheta at -pi/2 instead.
  double sin_at_lock = 0.0;
  double dtheta_end = 0.0;
};

LockingReport detect_locking(const Trajectory& t, double cos_tol = 1e-3);

struct EnsembleMember {
  double dtheta0 = 0.0;
  LockingReport report;
  double invariant_drift = 0.0;  // max |invariant(z) - invariant(0)| over both invariants
};

// `members` trajectories from equal weak seeds R_s = R_i = seed_mag and pump
// pump_mag, with initial relative phases (2k+1-members) pi/members, spaced to
// straddle the whole circle while avoiding the +-pi/2 fixed points.
std::vector<EnsembleMember> locking_ensemble(double kappa, double seed_mag, double pump_mag,
                                             std::size_t members, double z_max,
                                             const IntegrateOptions& opt = {});

// First-order input-output maps of the parametric interaction at gain
// K = kappa |E_p| L, as ladder-operator expressions.
OperatorExpr signal_out_linear(double gain_k, const ModeId& s, const ModeId& i);
OperatorExpr idler_out_linear(double gain_k, const ModeId& s, const ModeId& i);

// <E_s+ E_i+> in vacuum: -iK, the phase-sum correlation the locking builds.
Complex phase_sum_correlator(double gain_k);
// <E_s- E_i+> in vacuum: exactly zero at every gain; the individual phases
// stay uncorrelated even as their sum locks.
Complex pairwise_correlator(double gain_k);

}  // namespace pdcnet::dynamics
