#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pdcnet/algebra.hpp"

// Compiles an ordered list of optical components into Heisenberg-picture
// field expressions E+ at each detector.  Every mode starts as its bare
// annihilation operator; components rewrite the per-mode expressions in
// listed order.  Crystal contributions are graded by total gain order so the
// first-order input-output rule and the order cap in rate products stay
// explicit.

namespace pdcnet {

struct Crystal {
  ModeId signal;
  ModeId idler;
  Complex gain;              // C, |C| << 1
  double pump_phase = 0.0;   // phi_p, radians
};

struct PhaseShift {
  ModeId mode;
  double phi = 0.0;
};

// Reflection: multiplies the field by i.
struct Mirror {
  ModeId mode;
};

// Partial transmitter tau = |tau| e^{i theta}; the lost amplitude is replaced
// by a fresh vacuum ancilla so the output commutator stays canonical.
struct Filter {
  ModeId mode;
  Complex tau;
  ModeId ancilla;
};

// Coherent drive injected into a mode.  In the default (quantum) treatment
// this displaces the mode: field -> field + alpha.  Under classical-seed
// compilation the mode becomes a prescribed classical field: its expression
// is the bare amplitude, later crystals read it but never write it, and
// filters attenuate it without picking up an ancilla.
struct Seed {
  ModeId mode;
  Complex alpha;
};

// Formal linear combination of input fields on a fresh output label.  The
// default weight of 1 per input folds the beam-splitter amplitudes into the
// crystal gains; pass unit-norm weights when a physically unitary combiner
// matters.
struct Combiner {
  std::vector<ModeId> inputs;
  ModeId output;
  std::vector<Complex> weights;  // empty -> all 1
};

struct Detector {
  std::string name;
  ModeId mode;
};

using ComponentSpec =
    std::variant<Crystal, PhaseShift, Mirror, Filter, Seed, Combiner, Detector>;

struct NetworkSpec {
  std::vector<ComponentSpec> components;
  StateSpec initial_state;
};

struct CompileOptions {
  int field_order_cap = 1;    // highest total gain order kept in a field
  int product_order_cap = 2;  // highest total gain order kept in rate products
  bool classical_seed = false;
  double gain_warning = 0.1;  // |C| above this draws a warning
};

class NetworkError : public std::runtime_error {
 public:
  explicit NetworkError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Field expression graded by total crystal-gain order.
class GradedExpr {
 public:
  GradedExpr() = default;
  static GradedExpr mode_operator(const ModeId& m);
  static GradedExpr constant(Complex c);

  const OperatorExpr& order(int k) const;
  int max_order() const { return int(orders_.size()) - 1; }

  GradedExpr& scale(Complex c);
  GradedExpr& add(const GradedExpr& o, int cap);
  // adjoint of every order with the whole expression promoted one gain order;
  // this is the crystal's source term adjoint(partner) * C.
  GradedExpr shifted_adjoint(int cap) const;

  OperatorExpr flatten() const;
  void set_order(int k, OperatorExpr e);

 private:
  std::vector<OperatorExpr> orders_;
};

GradedExpr multiply_graded(const GradedExpr& a, const GradedExpr& b, int cap);

struct CompiledNetwork {
  struct DetectorField {
    std::string name;
    GradedExpr e_plus;
  };
  std::vector<DetectorField> detectors;
  StateSpec state;                   // from NetworkSpec.initial_state
  std::vector<std::string> warnings;
  CompileOptions options;

  const GradedExpr& field(std::string_view mode_label) const;
  const DetectorField& detector(std::string_view name) const;

  // All mode labels with a compiled field, in first-touch order.
  std::vector<std::string> mode_labels() const;

  // internal: per-mode fields at end of compilation
  std::vector<std::pair<std::string, GradedExpr>> fields;
};

// Validates and folds the component list.  Throws NetworkError listing every
// problem found.
CompiledNetwork compile(const NetworkSpec& n, const CompileOptions& options = {});

// <E- E+> at a detector.  Throws if the expectation fails the realness check
// |Im| <= 1e-10 * scale.  The state defaults to the network's initial state.
double detector_rate(const CompiledNetwork& c, std::string_view detector_name);
double detector_rate(const CompiledNetwork& c, std::string_view detector_name,
                     const StateSpec& state);

// <E-_a E-_d E+_d E+_a> between two detectors.
double coincidence_rate(const CompiledNetwork& c, std::string_view detector_a,
                        std::string_view detector_d);
double coincidence_rate(const CompiledNetwork& c, std::string_view detector_a,
                        std::string_view detector_d, const StateSpec& state);

}  // namespace pdcnet
