#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pdcnet/network.hpp"

// Truncated Fock-space simulation of a component network.  This is the
// verification path for the symbolic engine: it evolves a dense state vector
// through the exact component unitaries (two-mode squeezers, displacements,
// beam splitters, phase rotations) instead of first-order operator rewrites,
// so agreement is expected only up to higher orders in the crystal gain.
//
// Combiner outputs are formal linear combinations, not physical modes; they
// are resolved into measurement forms over physical modes.  A network that
// writes to a mode already captured by a combiner cannot be represented here
// and is rejected.

namespace pdcnet::fock {

struct OracleOptions {
  int cutoff = 4;                 // highest occupation kept per mode
  double series_tol = 1e-16;      // Taylor tail threshold, relative to the state norm
  std::size_t max_amplitudes = 2'000'000;
};

// Photon-number cutoff comfortably above the occupation a seed of the given
// magnitude can push into a mode.
int suggested_cutoff(double max_abs_seed);

class FockSim {
 public:
  // Builds the mode table, applies every component, leaves the final state
  // ready for measurement queries.
  FockSim(const NetworkSpec& net, const OracleOptions& opt = {});

  double rate(std::string_view detector) const;
  double coincidence(std::string_view detector_a, std::string_view detector_d) const;

  // <word> in the final state, factors acting right to left like a product.
  Complex moment(std::span<const LadderOp> word) const;

  // |norm - 1| of the final state; nonzero only through series truncation.
  double norm_drift() const;
  // Probability weight on basis states with any mode at the cutoff, the
  // direct measure of truncation pressure.
  double top_level_weight() const;

  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<std::string>& mode_order() const { return modes_; }

 private:
  struct LinearForm {
    std::vector<std::pair<std::size_t, Complex>> terms;  // (mode index, weight)
  };

  std::size_t mode_index(std::string_view label) const;
  const LinearForm& detector_form(std::string_view name) const;
  void ladder_apply(std::size_t mode, Ladder kind, const std::vector<Complex>& src,
                    std::vector<Complex>& dst) const;
  struct GenTerm {
    Complex coef;
    std::vector<std::pair<std::size_t, Ladder>> ops;
  };
  void apply_exp(const std::vector<GenTerm>& gen);
  void apply_phase(std::size_t mode, double phi);
  std::vector<Complex> apply_form(const LinearForm& f, const std::vector<Complex>& src) const;

  int levels_ = 0;
  std::vector<std::string> modes_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> state_;
  std::vector<std::pair<std::string, LinearForm>> detectors_;
  std::vector<std::string> notes_;
  double series_tol_ = 1e-16;
};

double oracle_detector_rate(const NetworkSpec& net, std::string_view detector,
                            const OracleOptions& opt = {});
double oracle_coincidence_rate(const NetworkSpec& net, std::string_view detector_a,
                               std::string_view detector_d, const OracleOptions& opt = {});

}  // namespace pdcnet::fock
