#include "pdcnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pdcnet {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << "; ";
    os << parts[i];
  }
  return os.str();
}

const OperatorExpr kZeroExpr{};

}  // namespace

NetworkError::NetworkError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

GradedExpr GradedExpr::mode_operator(const ModeId& m) {
  GradedExpr g;
  g.orders_.push_back(OperatorExpr::annihilator(m));
  return g;
}

GradedExpr GradedExpr::constant(Complex c) {
  GradedExpr g;
  g.orders_.push_back(OperatorExpr::constant(c));
  return g;
}

const OperatorExpr& GradedExpr::order(int k) const {
  if (k < 0 || k >= int(orders_.size())) return kZeroExpr;
  return orders_[std::size_t(k)];
}

void GradedExpr::set_order(int k, OperatorExpr e) {
  if (k >= int(orders_.size())) orders_.resize(std::size_t(k) + 1);
  orders_[std::size_t(k)] = std::move(e);
}

GradedExpr& GradedExpr::scale(Complex c) {
  for (auto& e : orders_) e *= c;
  return *this;
}

GradedExpr& GradedExpr::add(const GradedExpr& o, int cap) {
  int top = std::min(o.max_order(), cap);
  if (top >= int(orders_.size())) orders_.resize(std::size_t(top) + 1);
  for (int k = 0; k <= top; ++k) orders_[std::size_t(k)] += o.order(k);
  return *this;
}

GradedExpr GradedExpr::shifted_adjoint(int cap) const {
  GradedExpr g;
  for (int k = 0; k + 1 <= cap && k <= max_order(); ++k)
    g.set_order(k + 1, adjoint(order(k)));
  return g;
}

OperatorExpr GradedExpr::flatten() const {
  OperatorExpr sum;
  for (const auto& e : orders_) sum += e;
  return sum;
}

GradedExpr multiply_graded(const GradedExpr& a, const GradedExpr& b, int cap) {
  GradedExpr out;
  for (int i = 0; i <= a.max_order(); ++i) {
    if (a.order(i).is_zero()) continue;
    for (int j = 0; j <= b.max_order() && i + j <= cap; ++j) {
      if (b.order(j).is_zero()) continue;
      OperatorExpr prod = multiply(a.order(i), b.order(j));
      OperatorExpr acc = out.order(i + j);
      acc += prod;
      out.set_order(i + j, std::move(acc));
    }
  }
  return out;
}

namespace {

class Compiler {
 public:
  Compiler(const NetworkSpec& n, const CompileOptions& opt) : net_(n), opt_(opt) {}

  CompiledNetwork run() {
    scan_labels();
    for (std::size_t idx = 0; idx < net_.components.size(); ++idx) {
      pos_ = idx;
      std::visit([this](const auto& c) { apply(c); }, net_.components[idx]);
    }
    if (!errors_.empty()) throw NetworkError(std::move(errors_));
    CompiledNetwork out;
    out.detectors = std::move(detectors_);
    out.state = net_.initial_state;
    out.warnings = std::move(warnings_);
    out.options = opt_;
    for (const auto& label : touch_order_)
      out.fields.emplace_back(label, fields_.at(label));
    return out;
  }

 private:
  // Pre-pass so filters and combiners can verify their output labels are
  // fresh relative to the whole network, not just to earlier components.
  void scan_labels() {
    for (const auto& comp : net_.components) {
      std::visit(
          [this](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Crystal>) {
              count(c.signal.label);
              count(c.idler.label);
            } else if constexpr (std::is_same_v<T, PhaseShift> || std::is_same_v<T, Mirror> ||
                                 std::is_same_v<T, Seed>) {
              count(c.mode.label);
            } else if constexpr (std::is_same_v<T, Filter>) {
              count(c.mode.label);
              ancilla_refs_[c.ancilla.label] += 1;
            } else if constexpr (std::is_same_v<T, Combiner>) {
              for (const auto& m : c.inputs) count(m.label);
              combiner_outputs_[c.output.label] += 1;
            } else if constexpr (std::is_same_v<T, Detector>) {
              count(c.mode.label);
            }
          },
          comp);
    }
  }

  void count(const std::string& label) { refs_[label] += 1; }

  void error(const std::string& msg) {
    std::ostringstream os;
    os << "component " << pos_ + 1 << ": " << msg;
    errors_.push_back(os.str());
  }

  void warn(const std::string& msg) {
    std::ostringstream os;
    os << "component " << pos_ + 1 << ": " << msg;
    warnings_.push_back(os.str());
  }

  GradedExpr& field(const ModeId& m) {
    auto it = fields_.find(m.label);
    if (it == fields_.end()) {
      it = fields_.emplace(m.label, GradedExpr::mode_operator(m)).first;
      touch_order_.push_back(m.label);
    }
    return it->second;
  }

  bool writable(const ModeId& m) {
    if (detected_.count(m.label)) {
      error("mode '" + m.label + "' is modified after feeding a detector");
      return false;
    }
    return true;
  }

  void apply(const Crystal& c) {
    if (c.signal.label == c.idler.label) {
      error("crystal signal and idler must be distinct modes, got '" + c.signal.label + "'");
      return;
    }
    if (std::abs(c.gain) > opt_.gain_warning)
      warn("crystal gain |C| = " + std::to_string(std::abs(c.gain)) +
           " exceeds the first-order validity threshold " + std::to_string(opt_.gain_warning));
    bool ok_s = writable(c.signal);
    bool ok_i = writable(c.idler);
    if (!ok_s || !ok_i) return;

    Complex zeta = c.gain * std::exp(Complex{0.0, c.pump_phase});
    bool s_cl = classical_.count(c.signal.label) > 0;
    bool i_cl = classical_.count(c.idler.label) > 0;
    if (s_cl && i_cl) {
      warn("crystal couples two prescribed classical modes; no effect");
      return;
    }
    GradedExpr s_in = field(c.signal);
    GradedExpr i_in = field(c.idler);
    // Simultaneous first-order input-output: each output adds the adjoint of
    // the partner input, promoted one gain order.  Prescribed classical modes
    // act as undepleted sources and are never written.
    if (!s_cl) {
      GradedExpr src = i_in.shifted_adjoint(opt_.field_order_cap);
      src.scale(zeta);
      field(c.signal) = s_in;
      field(c.signal).add(src, opt_.field_order_cap);
    }
    if (!i_cl) {
      GradedExpr src = s_in.shifted_adjoint(opt_.field_order_cap);
      src.scale(zeta);
      field(c.idler) = i_in;
      field(c.idler).add(src, opt_.field_order_cap);
    }
  }

  void apply(const PhaseShift& p) {
    if (!writable(p.mode)) return;
    field(p.mode).scale(std::exp(Complex{0.0, p.phi}));
  }

  void apply(const Mirror& m) {
    if (!writable(m.mode)) return;
    field(m.mode).scale(Complex{0.0, 1.0});
  }

  void apply(const Filter& f) {
    double t = std::abs(f.tau);
    if (t > 1.0 + 1e-12) {
      error("filter transmission |tau| = " + std::to_string(t) + " exceeds 1");
      return;
    }
    if (!writable(f.mode)) return;
    if (f.ancilla.label == f.mode.label) {
      error("filter ancilla must differ from the filtered mode '" + f.mode.label + "'");
      return;
    }
    if (refs_.count(f.ancilla.label) || combiner_outputs_.count(f.ancilla.label) ||
        ancilla_refs_[f.ancilla.label] > 1) {
      error("filter ancilla '" + f.ancilla.label + "' must be a fresh, unused mode label");
      return;
    }
    if (std::abs(net_.initial_state.amplitude(f.ancilla.label)) != 0.0) {
      error("filter ancilla '" + f.ancilla.label + "' must start in vacuum");
      return;
    }
    GradedExpr& fld = field(f.mode);
    fld.scale(f.tau);
    if (classical_.count(f.mode.label)) return;  // classical attenuation only
    double leak = std::sqrt(std::max(0.0, 1.0 - t * t));
    GradedExpr vac = GradedExpr::mode_operator(f.ancilla);
    vac.scale(Complex{leak, 0.0});
    fld.add(vac, opt_.field_order_cap);
  }

  void apply(const Seed& s) {
    if (!writable(s.mode)) return;
    if (opt_.classical_seed) {
      field(s.mode) = GradedExpr::constant(s.alpha);
      classical_.insert(s.mode.label);
    } else {
      field(s.mode).add(GradedExpr::constant(s.alpha), opt_.field_order_cap);
    }
  }

  void apply(const Combiner& c) {
    if (c.inputs.empty()) {
      error("combiner needs at least one input");
      return;
    }
    if (!c.weights.empty() && c.weights.size() != c.inputs.size()) {
      error("combiner has " + std::to_string(c.inputs.size()) + " inputs but " +
            std::to_string(c.weights.size()) + " weights");
      return;
    }
    if (fields_.count(c.output.label) || ancilla_refs_.count(c.output.label) ||
        combiner_outputs_[c.output.label] > 1) {
      error("combiner output '" + c.output.label + "' must be a fresh mode label");
      return;
    }
    if (std::abs(net_.initial_state.amplitude(c.output.label)) != 0.0) {
      error("combiner output '" + c.output.label + "' cannot carry an initial-state amplitude");
      return;
    }
    if (!writable(c.output)) return;
    GradedExpr out;
    for (std::size_t i = 0; i < c.inputs.size(); ++i) {
      GradedExpr term = field(c.inputs[i]);
      term.scale(c.weights.empty() ? Complex{1.0, 0.0} : c.weights[i]);
      out.add(term, opt_.field_order_cap);
    }
    fields_[c.output.label] = std::move(out);
    if (std::find(touch_order_.begin(), touch_order_.end(), c.output.label) ==
        touch_order_.end())
      touch_order_.push_back(c.output.label);
  }

  void apply(const Detector& d) {
    if (std::any_of(detectors_.begin(), detectors_.end(),
                    [&](const auto& det) { return det.name == d.name; })) {
      error("duplicate detector name '" + d.name + "'");
      return;
    }
    detectors_.push_back({d.name, field(d.mode)});
    detected_.insert(d.mode.label);
  }

  const NetworkSpec& net_;
  const CompileOptions& opt_;
  std::size_t pos_ = 0;
  std::map<std::string, GradedExpr> fields_;
  std::vector<std::string> touch_order_;
  std::map<std::string, int> refs_;
  std::map<std::string, int> ancilla_refs_;
  std::map<std::string, int> combiner_outputs_;
  std::set<std::string> classical_;
  std::set<std::string> detected_;
  std::vector<CompiledNetwork::DetectorField> detectors_;
  std::vector<std::string> warnings_;
  std::vector<std::string> errors_;
};

}  // namespace

const GradedExpr& CompiledNetwork::field(std::string_view mode_label) const {
  for (const auto& [label, f] : fields)
    if (label == mode_label) return f;
  throw std::out_of_range("no compiled field for mode '" + std::string(mode_label) + "'");
}

const CompiledNetwork::DetectorField& CompiledNetwork::detector(std::string_view name) const {
  for (const auto& d : detectors)
    if (d.name == name) return d;
  throw std::out_of_range("no detector named '" + std::string(name) + "'");
}

std::vector<std::string> CompiledNetwork::mode_labels() const {
  std::vector<std::string> out;
  out.reserve(fields.size());
  for (const auto& [label, f] : fields) out.push_back(label);
  return out;
}

CompiledNetwork compile(const NetworkSpec& n, const CompileOptions& options) {
  return Compiler(n, options).run();
}

namespace {

GradedExpr graded_adjoint(const GradedExpr& g) {
  GradedExpr out;
  for (int k = 0; k <= g.max_order(); ++k) out.set_order(k, adjoint(g.order(k)));
  return out;
}

double checked_real_rate(const OperatorExpr& product, const StateSpec& state,
                         const char* what) {
  auto [value, scale] = expectation_with_scale(product, state);
  double tol = 1e-10 * std::max(scale, 1e-30);
  if (std::abs(value.imag()) > tol) {
    std::ostringstream os;
    os << what << " expectation has a non-real value " << value.real() << " + "
       << value.imag() << "i (scale " << scale << ")";
    throw std::runtime_error(os.str());
  }
  if (value.real() < -1e-12 * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << what << " expectation is negative: " << value.real();
    throw std::runtime_error(os.str());
  }
  return value.real();
}

}  // namespace

double detector_rate(const CompiledNetwork& c, std::string_view name, const StateSpec& state) {
  const auto& det = c.detector(name);
  GradedExpr product =
      multiply_graded(graded_adjoint(det.e_plus), det.e_plus, c.options.product_order_cap);
  return checked_real_rate(product.flatten(), state, "detector rate");
}

double detector_rate(const CompiledNetwork& c, std::string_view name) {
  return detector_rate(c, name, c.state);
}

double coincidence_rate(const CompiledNetwork& c, std::string_view detector_a,
                        std::string_view detector_d, const StateSpec& state) {
  const auto& da = c.detector(detector_a);
  const auto& dd = c.detector(detector_d);
  int cap = c.options.product_order_cap;
  GradedExpr minus = multiply_graded(graded_adjoint(da.e_plus), graded_adjoint(dd.e_plus), cap);
  GradedExpr plus = multiply_graded(dd.e_plus, da.e_plus, cap);
  GradedExpr product = multiply_graded(minus, plus, cap);
  return checked_real_rate(product.flatten(), state, "coincidence rate");
}

double coincidence_rate(const CompiledNetwork& c, std::string_view detector_a,
                        std::string_view detector_d) {
  return coincidence_rate(c, detector_a, detector_d, c.state);
}

}  // namespace pdcnet
