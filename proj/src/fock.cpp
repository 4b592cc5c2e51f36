#include "pdcnet/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pdcnet::fock {

namespace {

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

}  // namespace

int suggested_cutoff(double max_abs_seed) {
  double a = std::abs(max_abs_seed);
  return std::max(4, int(std::ceil(a * a + 6.0 * a)));
}

std::size_t FockSim::mode_index(std::string_view label) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i] == label) return i;
  throw std::out_of_range("unknown oracle mode '" + std::string(label) + "'");
}

FockSim::FockSim(const NetworkSpec& net, const OracleOptions& opt)
    : levels_(opt.cutoff + 1), series_tol_(opt.series_tol) {
  if (opt.cutoff < 1) throw std::invalid_argument("oracle cutoff must be at least 1");

  // Pass 1: collect physical modes in first-touch order and resolve combiner
  // outputs into linear forms.  Writes to a mode a combiner has already
  // captured would need a snapshot semantics this simulation cannot provide.
  std::map<std::string, LinearForm, std::less<>> forms;
  std::set<std::string> frozen;
  std::vector<std::string> errors;

  auto note_mode = [&](const std::string& label) {
    if (forms.count(label)) return;  // formal label, not a physical mode
    if (std::find(modes_.begin(), modes_.end(), label) == modes_.end())
      modes_.push_back(label);
  };
  auto check_write = [&](const std::string& label) {
    if (frozen.count(label))
      errors.push_back("mode '" + label + "' is written after a combiner captured it");
    if (forms.count(label))
      errors.push_back("combiner output '" + label + "' cannot be written by a component");
  };

  for (const auto& comp : net.components) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Crystal>) {
            check_write(c.signal.label);
            check_write(c.idler.label);
            note_mode(c.signal.label);
            note_mode(c.idler.label);
          } else if constexpr (std::is_same_v<T, PhaseShift> || std::is_same_v<T, Mirror> ||
                               std::is_same_v<T, Seed>) {
            check_write(c.mode.label);
            note_mode(c.mode.label);
          } else if constexpr (std::is_same_v<T, Filter>) {
            check_write(c.mode.label);
            note_mode(c.mode.label);
            note_mode(c.ancilla.label);
          } else if constexpr (std::is_same_v<T, Combiner>) {
            LinearForm f;
            for (std::size_t i = 0; i < c.inputs.size(); ++i) {
              Complex w = c.weights.empty() ? Complex{1.0, 0.0} : c.weights[i];
              const std::string& label = c.inputs[i].label;
              if (auto it = forms.find(label); it != forms.end()) {
                for (const auto& [idx, wi] : it->second.terms)
                  f.terms.emplace_back(idx, w * wi);
              } else {
                note_mode(label);
                f.terms.emplace_back(mode_index(label), w);
              }
            }
            for (const auto& [idx, w] : f.terms) frozen.insert(modes_[idx]);
            forms[c.output.label] = std::move(f);
          } else if constexpr (std::is_same_v<T, Detector>) {
            if (!forms.count(c.mode.label)) note_mode(c.mode.label);
          }
        },
        comp);
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "oracle cannot represent this network: ";
    for (std::size_t i = 0; i < errors.size(); ++i) os << (i ? "; " : "") << errors[i];
    throw std::invalid_argument(os.str());
  }

  double dim = 1.0;
  for (std::size_t i = 0; i < modes_.size(); ++i) dim *= double(levels_);
  if (dim > double(opt.max_amplitudes)) {
    std::ostringstream os;
    os << "oracle state needs " << dim << " amplitudes (" << modes_.size() << " modes, cutoff "
       << opt.cutoff << "), over the limit of " << opt.max_amplitudes;
    throw std::invalid_argument(os.str());
  }

  strides_.resize(modes_.size());
  std::size_t s = 1;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    strides_[i] = s;
    s *= std::size_t(levels_);
  }
  state_.assign(s, Complex{0.0, 0.0});
  state_[0] = {1.0, 0.0};

  // Initial coherent assignments become displacement unitaries up front.
  for (const auto& [label, alpha] : net.initial_state.assignments()) {
    if (std::find(modes_.begin(), modes_.end(), label) == modes_.end()) continue;
    std::size_t m = mode_index(label);
    apply_exp({{alpha, {{m, Ladder::Create}}}, {-std::conj(alpha), {{m, Ladder::Annihilate}}}});
  }

  // Pass 2: apply each component's unitary in listed order.
  for (const auto& comp : net.components) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Crystal>) {
            Complex zeta = c.gain * std::exp(Complex{0.0, c.pump_phase});
            std::size_t ms = mode_index(c.signal.label);
            std::size_t mi = mode_index(c.idler.label);
            apply_exp({{zeta, {{ms, Ladder::Create}, {mi, Ladder::Create}}},
                       {-std::conj(zeta), {{ms, Ladder::Annihilate}, {mi, Ladder::Annihilate}}}});
          } else if constexpr (std::is_same_v<T, PhaseShift>) {
            apply_phase(mode_index(c.mode.label), c.phi);
          } else if constexpr (std::is_same_v<T, Mirror>) {
            apply_phase(mode_index(c.mode.label), std::numbers::pi / 2.0);
          } else if constexpr (std::is_same_v<T, Filter>) {
            double t = std::abs(c.tau);
            if (t > 1.0 + 1e-12)
              throw std::invalid_argument("oracle filter transmission above 1");
            std::size_t m = mode_index(c.mode.label);
            std::size_t v = mode_index(c.ancilla.label);
            apply_phase(m, std::arg(c.tau == Complex{0.0, 0.0} ? Complex{1.0, 0.0} : c.tau));
            double mu = std::acos(std::min(t, 1.0));
            if (mu != 0.0)
              apply_exp({{Complex{mu, 0.0}, {{m, Ladder::Create}, {v, Ladder::Annihilate}}},
                         {Complex{-mu, 0.0}, {{v, Ladder::Create}, {m, Ladder::Annihilate}}}});
          } else if constexpr (std::is_same_v<T, Seed>) {
            std::size_t m = mode_index(c.mode.label);
            apply_exp({{c.alpha, {{m, Ladder::Create}}},
                       {-std::conj(c.alpha), {{m, Ladder::Annihilate}}}});
          } else if constexpr (std::is_same_v<T, Detector>) {
            LinearForm f;
            if (auto it = forms.find(c.mode.label); it != forms.end())
              f = it->second;
            else
              f.terms.emplace_back(mode_index(c.mode.label), Complex{1.0, 0.0});
            detectors_.emplace_back(c.name, std::move(f));
          }
        },
        comp);
  }

  double drift = norm_drift();
  if (drift > 1e-6) {
    std::ostringstream os;
    os << "state norm drifted by " << drift << "; series tolerance too loose";
    notes_.push_back(os.str());
  }
  double top = top_level_weight();
  if (top > 1e-6) {
    std::ostringstream os;
    os << "weight " << top << " sits at the occupation cutoff; raise the cutoff";
    notes_.push_back(os.str());
  }
}

void FockSim::ladder_apply(std::size_t mode, Ladder kind, const std::vector<Complex>& src,
                           std::vector<Complex>& dst) const {
  dst.assign(src.size(), Complex{0.0, 0.0});
  std::size_t stride = strides_[mode];
  std::size_t block = stride * std::size_t(levels_);
  for (std::size_t base = 0; base < src.size(); base += block) {
    for (int n = 0; n < levels_; ++n) {
      std::size_t row = base + std::size_t(n) * stride;
      if (kind == Ladder::Annihilate) {
        if (n == 0) continue;
        double w = std::sqrt(double(n));
        for (std::size_t k = 0; k < stride; ++k) dst[row - stride + k] += w * src[row + k];
      } else {
        if (n + 1 >= levels_) continue;
        double w = std::sqrt(double(n + 1));
        for (std::size_t k = 0; k < stride; ++k) dst[row + stride + k] += w * src[row + k];
      }
    }
  }
}

void FockSim::apply_phase(std::size_t mode, double phi) {
  if (phi == 0.0) return;
  std::size_t stride = strides_[mode];
  std::size_t block = stride * std::size_t(levels_);
  for (int n = 0; n < levels_; ++n) {
    Complex f = std::exp(Complex{0.0, phi * double(n)});
    for (std::size_t base = 0; base < state_.size(); base += block) {
      std::size_t row = base + std::size_t(n) * stride;
      for (std::size_t k = 0; k < stride; ++k) state_[row + k] *= f;
    }
  }
}

void FockSim::apply_exp(const std::vector<GenTerm>& gen) {
  // exp of the truncated generator by scaled Taylor series: slice so the
  // generator norm per step stays near one, then sum until the tail is below
  // series_tol relative to the state.
  double bound = 0.0;
  for (const auto& t : gen)
    bound += std::abs(t.coef) * std::pow(double(levels_), 0.5 * double(t.ops.size()));
  int slices = std::max(1, int(std::ceil(bound)));

  std::vector<Complex> term, work, tmp, next;
  for (int s = 0; s < slices; ++s) {
    term = state_;
    double state_scale = std::sqrt(norm2(state_));
    bool converged = false;
    for (int k = 1; k <= 120; ++k) {
      // term <- G(term) / (k * slices)
      next.assign(state_.size(), Complex{0.0, 0.0});
      for (const auto& g : gen) {
        work = term;
        for (auto it = g.ops.rbegin(); it != g.ops.rend(); ++it) {
          ladder_apply(it->first, it->second, work, tmp);
          work.swap(tmp);
        }
        Complex scale = g.coef / (double(k) * double(slices));
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += scale * work[i];
      }
      term.swap(next);
      for (std::size_t i = 0; i < state_.size(); ++i) state_[i] += term[i];
      if (std::sqrt(norm2(term)) <= series_tol_ * std::max(state_scale, 1e-300)) {
        converged = true;
        break;
      }
    }
    if (!converged) notes_.push_back("exponential series hit its term limit");
  }
}

std::vector<Complex> FockSim::apply_form(const LinearForm& f,
                                         const std::vector<Complex>& src) const {
  std::vector<Complex> out(src.size(), Complex{0.0, 0.0});
  std::vector<Complex> tmp;
  for (const auto& [mode, w] : f.terms) {
    ladder_apply(mode, Ladder::Annihilate, src, tmp);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * tmp[i];
  }
  return out;
}

const FockSim::LinearForm& FockSim::detector_form(std::string_view name) const {
  for (const auto& [n, f] : detectors_)
    if (n == name) return f;
  throw std::out_of_range("no oracle detector named '" + std::string(name) + "'");
}

double FockSim::rate(std::string_view detector) const {
  return norm2(apply_form(detector_form(detector), state_));
}

double FockSim::coincidence(std::string_view detector_a, std::string_view detector_d) const {
  auto chi = apply_form(detector_form(detector_a), state_);
  return norm2(apply_form(detector_form(detector_d), chi));
}

Complex FockSim::moment(std::span<const LadderOp> word) const {
  std::vector<Complex> v = state_, tmp;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    ladder_apply(mode_index(it->mode.label), it->kind, v, tmp);
    v.swap(tmp);
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < state_.size(); ++i) acc += std::conj(state_[i]) * v[i];
  return acc;
}

double FockSim::norm_drift() const { return std::abs(std::sqrt(norm2(state_)) - 1.0); }

double FockSim::top_level_weight() const {
  double w = 0.0;
  for (std::size_t idx = 0; idx < state_.size(); ++idx) {
    std::size_t rest = idx;
    bool top = false;
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      if (int(rest % std::size_t(levels_)) == levels_ - 1) {
        top = true;
        break;
      }
      rest /= std::size_t(levels_);
    }
    if (top) w += std::norm(state_[idx]);
  }
  return w;
}

double oracle_detector_rate(const NetworkSpec& net, std::string_view detector,
                            const OracleOptions& opt) {
  return FockSim(net, opt).rate(detector);
}

double oracle_coincidence_rate(const NetworkSpec& net, std::string_view detector_a,
                               std::string_view detector_d, const OracleOptions& opt) {
  return FockSim(net, opt).coincidence(detector_a, detector_d);
}

}  // namespace pdcnet::fock
