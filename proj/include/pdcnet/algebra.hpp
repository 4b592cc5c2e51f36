#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Symbolic algebra for bosonic ladder operators.  Expressions are stored in
// canonical normally ordered form (all creators left of all annihilators,
// modes sorted by label), so every operation that builds an expression also
// normal-orders it.  Coefficients are plain complex doubles: parameters are
// bound numerically before an expression is constructed.

namespace pdcnet {

using Complex = std::complex<double>;

inline constexpr double kCoeffEps = 1e-15;  // terms below this magnitude are dropped

enum class ModeKind { Signal, Idler, Ancilla };

struct ModeId {
  std::string label;
  ModeKind kind = ModeKind::Signal;
};

// Identity is by label; kind is carried along for bookkeeping only.
inline bool operator==(const ModeId& a, const ModeId& b) { return a.label == b.label; }
inline bool operator<(const ModeId& a, const ModeId& b) { return a.label < b.label; }

enum class Ladder { Create, Annihilate };

// One factor of an unordered operator word, e.g. a_m or a_m^dagger.
struct LadderOp {
  ModeId mode;
  Ladder kind = Ladder::Annihilate;
};

// Exponents per mode label, sorted by label, all counts >= 1.
using ModePowers = std::vector<std::pair<std::string, int>>;

class OperatorExpr {
 public:
  // Key of one normally ordered monomial: creator and annihilator exponents.
  struct Signature {
    ModePowers creators;
    ModePowers annihilators;
    friend bool operator<(const Signature& a, const Signature& b) {
      if (a.creators != b.creators) return a.creators < b.creators;
      return a.annihilators < b.annihilators;
    }
    friend bool operator==(const Signature& a, const Signature& b) {
      return a.creators == b.creators && a.annihilators == b.annihilators;
    }
  };
  using TermMap = std::map<Signature, Complex>;

  OperatorExpr() = default;

  static OperatorExpr zero() { return {}; }
  static OperatorExpr constant(Complex c);
  static OperatorExpr annihilator(const ModeId& m);
  static OperatorExpr creator(const ModeId& m);

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Coefficient of the identity monomial (0 if absent).
  Complex constant_term() const;
  // Coefficient of an arbitrary monomial (0 if absent).
  Complex coefficient(const Signature& s) const;

  // True when no term carries a creator or annihilator.
  bool is_constant() const;

  OperatorExpr& operator+=(const OperatorExpr& o);
  OperatorExpr& operator-=(const OperatorExpr& o);
  OperatorExpr& operator*=(Complex c);

  friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
  friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
  friend OperatorExpr operator*(OperatorExpr a, Complex c) { return a *= c; }
  friend OperatorExpr operator*(Complex c, OperatorExpr a) { return a *= c; }

  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
    return a.terms_ == b.terms_;
  }

  // Largest |coefficient| over all terms (0 for the zero expression).
  double max_abs_coeff() const;

  std::string str() const;

  // Inserts coeff * monomial, merging with an existing term.  The signature
  // must already be sorted; used by the algebra internals.
  void add_term(Signature sig, Complex coeff);

 private:
  TermMap terms_;
};

// Product with bosonic reordering: [a_m, a_n^dagger] = delta_mn.
OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b);

// Hermitian conjugate: swaps creators/annihilators, conjugates coefficients.
OperatorExpr adjoint(const OperatorExpr& e);

// multiply(a, b) - multiply(b, a)
OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b);

// Normal-orders an arbitrary word coeff * op1 * op2 * ... (left to right).
OperatorExpr normal_order(std::span<const LadderOp> word, Complex coeff = {1.0, 0.0});

// Stored expressions are already canonical, so this is the identity; it exists
// so callers can assert idempotence.
inline const OperatorExpr& normal_order(const OperatorExpr& e) { return e; }

// Per-mode state assignment for expectation values.  Modes without an
// assignment are vacuum.
class StateSpec {
 public:
  void set_vacuum(const ModeId& m) { coherent_.erase(m.label); }
  void set_coherent(const ModeId& m, Complex alpha);
  // Coherent amplitude of a mode (0 for vacuum).
  Complex amplitude(std::string_view label) const;
  bool empty() const { return coherent_.empty(); }
  const std::map<std::string, Complex, std::less<>>& assignments() const { return coherent_; }

 private:
  std::map<std::string, Complex, std::less<>> coherent_;
};

// Expectation value over a product of coherent/vacuum states.  Exact: each
// normally ordered term evaluates to coeff * prod alpha*^c * prod alpha^a.
Complex expectation(const OperatorExpr& e, const StateSpec& state);

// Same, but also reports the sum of |term| magnitudes, which callers use as
// the natural scale when asserting that a rate is real.
struct ExpectationResult {
  Complex value;
  double abs_scale = 0.0;
};
ExpectationResult expectation_with_scale(const OperatorExpr& e, const StateSpec& state);

}  // namespace pdcnet
