#include "pdcnet/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdcnet {

namespace {

// Exact in double for the small exponents that occur here.
double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= double(i);
  return r;
}

int power_of(const ModePowers& p, const std::string& label) {
  for (const auto& [l, n] : p)
    if (l == label) return n;
  return 0;
}

// Adds `count` to the exponent of `label`, keeping the list sorted and
// dropping zero entries.
void bump(ModePowers& p, const std::string& label, int count) {
  auto it = std::lower_bound(p.begin(), p.end(), label,
                             [](const auto& e, const std::string& l) { return e.first < l; });
  if (it != p.end() && it->first == label) {
    it->second += count;
    if (it->second == 0) p.erase(it);
    return;
  }
  if (count != 0) p.insert(it, {label, count});
}

ModePowers merged(const ModePowers& a, const ModePowers& b) {
  ModePowers out = a;
  for (const auto& [l, n] : b) bump(out, l, n);
  return out;
}

}  // namespace

OperatorExpr OperatorExpr::constant(Complex c) {
  OperatorExpr e;
  e.add_term({}, c);
  return e;
}

OperatorExpr OperatorExpr::annihilator(const ModeId& m) {
  OperatorExpr e;
  Signature s;
  s.annihilators = {{m.label, 1}};
  e.add_term(std::move(s), {1.0, 0.0});
  return e;
}

OperatorExpr OperatorExpr::creator(const ModeId& m) {
  OperatorExpr e;
  Signature s;
  s.creators = {{m.label, 1}};
  e.add_term(std::move(s), {1.0, 0.0});
  return e;
}

Complex OperatorExpr::constant_term() const { return coefficient({}); }

Complex OperatorExpr::coefficient(const Signature& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Complex{} : it->second;
}

bool OperatorExpr::is_constant() const {
  for (const auto& [sig, c] : terms_)
    if (!sig.creators.empty() || !sig.annihilators.empty()) return false;
  return true;
}

void OperatorExpr::add_term(Signature sig, Complex coeff) {
  auto [it, inserted] = terms_.try_emplace(std::move(sig), coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) < kCoeffEps) terms_.erase(it);
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& o) {
  for (const auto& [sig, c] : o.terms_) add_term(sig, c);
  return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& o) {
  for (const auto& [sig, c] : o.terms_) add_term(sig, -c);
  return *this;
}

OperatorExpr& OperatorExpr::operator*=(Complex c) {
  if (std::abs(c) < kCoeffEps) {
    terms_.clear();
    return *this;
  }
  for (auto& [sig, v] : terms_) v *= c;
  // Rescaling can push small terms under the floor.
  for (auto it = terms_.begin(); it != terms_.end();)
    it = std::abs(it->second) < kCoeffEps ? terms_.erase(it) : std::next(it);
  return *this;
}

double OperatorExpr::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [sig, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string OperatorExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [sig, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (const auto& [l, n] : sig.creators) {
      os << " " << l << "+";
      if (n > 1) os << "^" << n;
    }
    for (const auto& [l, n] : sig.annihilators) {
      os << " " << l;
      if (n > 1) os << "^" << n;
    }
  }
  return os.str();
}

// Core reordering step.  Both inputs are normally ordered monomials
//   M1 = A1 B1,  M2 = A2 B2   (A = creators, B = annihilators),
// so the only non-trivial piece of M1*M2 is B1 * A2.  Per mode,
//   a^m adag^n = sum_k k! C(m,k) C(n,k) adag^(n-k) a^(m-k),
// and distinct modes commute, so the full product is the cartesian product of
// the per-mode sums.
void multiply_terms(const OperatorExpr::Signature& s1, Complex c1,
                    const OperatorExpr::Signature& s2, Complex c2, OperatorExpr& out) {
  // Modes contracting between B1 and A2.
  std::vector<std::string> shared;
  for (const auto& [l, n] : s1.annihilators)
    if (power_of(s2.creators, l) > 0) shared.push_back(l);

  ModePowers base_creators = merged(s1.creators, s2.creators);
  ModePowers base_annihilators = merged(s1.annihilators, s2.annihilators);

  if (shared.empty()) {
    out.add_term({std::move(base_creators), std::move(base_annihilators)}, c1 * c2);
    return;
  }

  // Iterate over all contraction multi-indices k (one entry per shared mode).
  std::vector<int> m(shared.size()), n(shared.size()), k(shared.size(), 0);
  for (std::size_t i = 0; i < shared.size(); ++i) {
    m[i] = power_of(s1.annihilators, shared[i]);
    n[i] = power_of(s2.creators, shared[i]);
  }
  for (;;) {
    double w = 1.0;
    for (std::size_t i = 0; i < shared.size(); ++i)
      w *= factorial(k[i]) * binomial(m[i], k[i]) * binomial(n[i], k[i]);
    OperatorExpr::Signature sig;
    sig.creators = base_creators;
    sig.annihilators = base_annihilators;
    for (std::size_t i = 0; i < shared.size(); ++i) {
      bump(sig.creators, shared[i], -k[i]);
      bump(sig.annihilators, shared[i], -k[i]);
    }
    out.add_term(std::move(sig), c1 * c2 * w);

    // Advance the multi-index.
    std::size_t i = 0;
    while (i < shared.size()) {
      if (++k[i] <= std::min(m[i], n[i])) break;
      k[i] = 0;
      ++i;
    }
    if (i == shared.size()) break;
  }
}

OperatorExpr multiply(const OperatorExpr& a, const OperatorExpr& b) {
  OperatorExpr out;
  for (const auto& [s1, c1] : a.terms())
    for (const auto& [s2, c2] : b.terms()) multiply_terms(s1, c1, s2, c2, out);
  return out;
}

OperatorExpr adjoint(const OperatorExpr& e) {
  OperatorExpr out;
  for (const auto& [sig, c] : e.terms()) {
    OperatorExpr::Signature s;
    s.creators = sig.annihilators;
    s.annihilators = sig.creators;
    out.add_term(std::move(s), std::conj(c));
  }
  return out;
}

OperatorExpr commutator(const OperatorExpr& a, const OperatorExpr& b) {
  return multiply(a, b) - multiply(b, a);
}

OperatorExpr normal_order(std::span<const LadderOp> word, Complex coeff) {
  OperatorExpr acc = OperatorExpr::constant(coeff);
  for (const LadderOp& op : word) {
    OperatorExpr f = op.kind == Ladder::Create ? OperatorExpr::creator(op.mode)
                                               : OperatorExpr::annihilator(op.mode);
    acc = multiply(acc, f);
  }
  return acc;
}

void StateSpec::set_coherent(const ModeId& m, Complex alpha) {
  if (std::abs(alpha) == 0.0)
    coherent_.erase(m.label);
  else
    coherent_[m.label] = alpha;
}

Complex StateSpec::amplitude(std::string_view label) const {
  auto it = coherent_.find(label);
  return it == coherent_.end() ? Complex{} : it->second;
}

namespace {

// Normally ordered term between coherent states: creators pick up alpha*,
// annihilators alpha; a vacuum mode with any operator kills the term.
Complex term_value(const OperatorExpr::Signature& sig, Complex coeff, const StateSpec& state) {
  Complex v = coeff;
  for (const auto& [l, n] : sig.creators) {
    Complex a = std::conj(state.amplitude(l));
    for (int i = 0; i < n; ++i) v *= a;
    if (v == Complex{}) return v;
  }
  for (const auto& [l, n] : sig.annihilators) {
    Complex a = state.amplitude(l);
    for (int i = 0; i < n; ++i) v *= a;
    if (v == Complex{}) return v;
  }
  return v;
}

}  // namespace

Complex expectation(const OperatorExpr& e, const StateSpec& state) {
  Complex sum{};
  for (const auto& [sig, c] : e.terms()) sum += term_value(sig, c, state);
  return sum;
}

ExpectationResult expectation_with_scale(const OperatorExpr& e, const StateSpec& state) {
  ExpectationResult r;
  for (const auto& [sig, c] : e.terms()) {
    Complex v = term_value(sig, c, state);
    r.value += v;
    r.abs_scale += std::abs(v);
  }
  return r;
}

}  // namespace pdcnet
