#include "pdcnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <variant>

namespace pdcnet::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void skip_ws(std::string_view& s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

bool parse_factor(std::string_view& s, double& out, std::string& error) {
  skip_ws(s);
  if (s.starts_with("pi")) {
    s.remove_prefix(2);
    if (!s.empty() && (std::isalnum(static_cast<unsigned char>(s.front())) || s.front() == '.')) {
      error = "unrecognized token after `pi`";
      return false;
    }
    out = kPi;
    return true;
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr == s.data()) {
    error = "expected a number or `pi`";
    return false;
  }
  s.remove_prefix(std::size_t(ptr - s.data()));
  out = v;
  return true;
}

std::optional<Complex> parse_complex(std::string_view text, std::string& error) {
  auto parts = split(text, ',');
  if (parts.empty() || parts.size() > 2) {
    error = "expected `re` or `re, im`";
    return std::nullopt;
  }
  auto re = parse_pi_expr(parts[0], error);
  if (!re) return std::nullopt;
  double im = 0.0;
  if (parts.size() == 2) {
    auto v = parse_pi_expr(parts[1], error);
    if (!v) return std::nullopt;
    im = *v;
  }
  return Complex{*re, im};
}

struct RawEntry {
  int line = 0;
  std::string key;
  std::string value;
  bool used = false;
};

struct RawSection {
  int line = 0;
  std::string name;
  std::vector<RawEntry> entries;
};

// Collected (line, message) pairs; line 0 means the problem has no single line.
struct ErrorSink {
  std::vector<std::pair<int, std::string>> items;
  void add(int line, std::string msg) { items.emplace_back(line, std::move(msg)); }
};

std::vector<RawSection> lex_sections(std::string_view text, ErrorSink& errors) {
  std::vector<RawSection> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.add(line_no, "unterminated section header");
        continue;
      }
      auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) {
        errors.add(line_no, "empty section name");
        continue;
      }
      sections.push_back({line_no, std::string(name), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.add(line_no, "expected `key = value` or `[section]`");
      continue;
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.add(line_no, "missing key before `=`");
      continue;
    }
    if (sections.empty()) {
      errors.add(line_no, "`" + std::string(key) + "` appears before any [section]");
      continue;
    }
    sections.back().entries.push_back({line_no, std::string(key), std::string(value)});
  }
  return sections;
}

void flag_duplicate_keys(RawSection& s, ErrorSink& errors) {
  std::map<std::string, int> first;
  for (auto& en : s.entries) {
    auto [it, fresh] = first.emplace(en.key, en.line);
    if (!fresh) {
      errors.add(en.line, "duplicate key `" + en.key + "` (first at line " +
                              std::to_string(it->second) + ")");
      en.used = true;
    }
  }
}

// Typed key access on one section; every parse failure lands in the sink with
// the entry's own line number.
class SectionReader {
 public:
  SectionReader(RawSection& s, ErrorSink& errors) : s_(s), errors_(errors) {}

  RawEntry* take(std::string_view key) {
    for (auto& en : s_.entries) {
      if (!en.used && en.key == key) {
        en.used = true;
        return &en;
      }
    }
    return nullptr;
  }

  std::optional<double> number(std::string_view key) {
    auto* en = take(key);
    if (!en) return std::nullopt;
    std::string err;
    auto v = parse_pi_expr(en->value, err);
    if (!v) errors_.add(en->line, std::string(key) + ": " + err);
    return v;
  }

  std::optional<Complex> complex_value(std::string_view key) {
    auto* en = take(key);
    if (!en) return std::nullopt;
    std::string err;
    auto v = parse_complex(en->value, err);
    if (!v) errors_.add(en->line, std::string(key) + ": " + err);
    return v;
  }

  std::optional<bool> boolean(std::string_view key) {
    auto* en = take(key);
    if (!en) return std::nullopt;
    if (en->value == "true") return true;
    if (en->value == "false") return false;
    errors_.add(en->line, std::string(key) + ": expected true or false");
    return std::nullopt;
  }

  std::optional<long> integer(std::string_view key, long min_value) {
    auto* en = take(key);
    if (!en) return std::nullopt;
    std::string err;
    auto v = parse_pi_expr(en->value, err);
    if (!v) {
      errors_.add(en->line, std::string(key) + ": " + err);
      return std::nullopt;
    }
    long n = std::lround(*v);
    if (std::abs(*v - double(n)) > 1e-9 || n < min_value) {
      errors_.add(en->line, std::string(key) + ": expected an integer >= " +
                                std::to_string(min_value));
      return std::nullopt;
    }
    return n;
  }

  std::optional<ModeId> mode(std::string_view key, ModeKind kind) {
    auto* en = take(key);
    if (!en) return std::nullopt;
    if (!valid_label(en->value)) {
      errors_.add(en->line, std::string(key) + ": invalid mode label `" + en->value + "`");
      return std::nullopt;
    }
    return ModeId{en->value, kind};
  }

  // Reports every still-unused key as unknown.
  void finish() {
    for (auto& en : s_.entries) {
      if (!en.used) errors_.add(en.line, "unknown key `" + en.key + "`");
    }
  }

  void consume_rest() {
    for (auto& en : s_.entries) en.used = true;
  }

  int line() const { return s_.line; }

 private:
  RawSection& s_;
  ErrorSink& errors_;
};

}  // namespace

std::optional<double> parse_pi_expr(std::string_view text, std::string& error) {
  std::string_view s = text;
  skip_ws(s);
  if (s.empty()) {
    error = "empty value";
    return std::nullopt;
  }
  double sign = 1.0;
  if (s.front() == '-') {
    sign = -1.0;
    s.remove_prefix(1);
  } else if (s.front() == '+') {
    s.remove_prefix(1);
  }
  double acc = 0.0;
  if (!parse_factor(s, acc, error)) return std::nullopt;
  for (;;) {
    skip_ws(s);
    if (s.empty()) break;
    char op = s.front();
    if (op != '*' && op != '/') {
      error = std::string("unexpected `") + op +
              "`; values are products and quotients of numbers and pi";
      return std::nullopt;
    }
    s.remove_prefix(1);
    double f = 0.0;
    if (!parse_factor(s, f, error)) return std::nullopt;
    if (op == '/' && f == 0.0) {
      error = "division by zero";
      return std::nullopt;
    }
    acc = (op == '*') ? acc * f : acc / f;
  }
  return sign * acc;
}

std::optional<Complex> parse_complex_value(std::string_view text, std::string& error) {
  return parse_complex(text, error);
}

std::optional<GridSpec> parse_grid(std::string_view text, std::string& error) {
  auto parts = split(text, ':');
  if (parts.size() != 3) {
    error = "expected `start : stop : step`";
    return std::nullopt;
  }
  double v[3];
  for (int i = 0; i < 3; ++i) {
    auto r = parse_pi_expr(parts[i], error);
    if (!r) return std::nullopt;
    v[i] = *r;
  }
  if (v[2] <= 0.0) {
    error = "grid step must be positive";
    return std::nullopt;
  }
  if (v[1] < v[0]) {
    error = "grid stop must not be below start";
    return std::nullopt;
  }
  return GridSpec{v[0], v[1], v[2]};
}

std::vector<double> GridSpec::points() const {
  std::vector<double> out;
  if (step <= 0.0 || stop < start) return out;
  // stop lands on the grid when (stop - start) is a whole number of steps,
  // up to accumulated rounding.
  auto n = std::size_t(std::floor((stop - start) / step + 1e-9));
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out.push_back(start + double(k) * step);
  return out;
}

std::size_t GridSpec::count() const {
  if (step <= 0.0 || stop < start) return 0;
  return std::size_t(std::floor((stop - start) / step + 1e-9)) + 1;
}

std::string_view seed_mode_name(SeedMode m) {
  switch (m) {
    case SeedMode::None: return "none";
    case SeedMode::Quantum: return "quantum";
    case SeedMode::Classical: return "classical";
  }
  return "none";
}

std::optional<SeedMode> seed_mode_from_name(std::string_view name) {
  if (name == "none") return SeedMode::None;
  if (name == "quantum") return SeedMode::Quantum;
  if (name == "classical") return SeedMode::Classical;
  return std::nullopt;
}

std::string_view scan_parameter_name(ScanParameter p) {
  switch (p) {
    case ScanParameter::Phi: return "phi";
    case ScanParameter::PumpPhase: return "pump-phase";
    case ScanParameter::TauMagnitude: return "tau";
  }
  return "phi";
}

std::optional<ScanParameter> scan_parameter_from_name(std::string_view name) {
  std::string n(name);
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "phi") return ScanParameter::Phi;
  if (n == "pump-phase") return ScanParameter::PumpPhase;
  if (n == "tau") return ScanParameter::TauMagnitude;
  return std::nullopt;
}

namespace {

void read_preset_section(RawSection& sec, RunTask& task, ErrorSink& errors) {
  SectionReader r(sec, errors);
  PresetTask pt;
  if (auto* en = r.take("name")) {
    if (auto p = preset_from_name(en->value)) {
      pt.preset = *p;
    } else {
      errors.add(en->line, "unknown preset `" + en->value +
                               "`; one of cascade12, parallel23, cascade13, "
                               "three-crystal, filter");
    }
  } else {
    errors.add(sec.line, "[preset] needs `name = ...`");
  }
  if (auto g = r.complex_value("gain")) pt.params.gain = *g;
  if (auto v = r.number("phi")) pt.params.phi = *v;
  if (auto v = r.number("pump_phase")) pt.params.pump_phase = *v;

  auto* tau_en = r.take("tau");
  std::optional<double> tau_mag;
  if (tau_en) {
    std::string err;
    if (auto v = parse_pi_expr(tau_en->value, err)) {
      if (*v < 0.0 || *v > 1.0) {
        errors.add(tau_en->line, "tau magnitude must lie in [0, 1]");
      } else {
        tau_mag = *v;
      }
    } else {
      errors.add(tau_en->line, "tau: " + err);
    }
  }
  std::optional<double> theta = r.number("theta");
  if (tau_mag || theta) {
    double t = tau_mag.value_or(std::abs(pt.params.tau));
    double th = theta.value_or(pt.params.tau == Complex{} ? 0.0 : std::arg(pt.params.tau));
    pt.params.tau = std::polar(t, th);
  }

  auto* alpha_en = r.take("alpha");
  std::optional<Complex> alpha;
  if (alpha_en) {
    std::string err;
    if (auto a = parse_complex(alpha_en->value, err)) alpha = *a;
    else errors.add(alpha_en->line, "alpha: " + err);
  }
  std::optional<SeedMode> mode;
  if (auto* en = r.take("seeded")) {
    mode = seed_mode_from_name(en->value);
    if (!mode) errors.add(en->line, "seeded: one of none, quantum, classical");
  }
  pt.seed_mode = mode.value_or(alpha ? SeedMode::Quantum : SeedMode::None);
  if (pt.seed_mode == SeedMode::None) {
    if (alpha_en && alpha) {
      errors.add(alpha_en->line, "alpha is set but seeded = none; drop one of the two");
    }
  } else {
    pt.params.seed = alpha.value_or(Complex{1.0, 0.0});
  }
  if (auto v = r.number("couple_pump")) pt.params.couple_pump = *v;
  r.finish();
  task.preset = std::move(pt);
  task.kind = TaskKind::Scan;
}

void read_component_section(RawSection& sec, std::size_t index, CustomTask& ct, int& slot_line,
                            ErrorSink& errors) {
  SectionReader r(sec, errors);
  auto* type_en = r.take("type");
  if (!type_en) {
    errors.add(sec.line, "component needs `type = ...`");
    r.consume_rest();
    return;
  }
  const std::string& type = type_en->value;

  auto bind_slot = [&](RawEntry* en, CustomTask::Slot which) {
    if (ct.slot != CustomTask::Slot::None) {
      errors.add(en->line,
                 "a scan slot is already bound at line " + std::to_string(slot_line));
    } else {
      ct.slot = which;
      ct.slot_component = index;
      slot_line = en->line;
    }
  };
  auto required_mode = [&](const char* key, ModeKind kind, const char* fallback) -> ModeId {
    if (auto* en = r.take(key)) {
      if (valid_label(en->value)) return ModeId{en->value, kind};
      errors.add(en->line, std::string(key) + ": invalid mode label `" + en->value + "`");
      return ModeId{fallback, kind};
    }
    errors.add(sec.line, "`" + type + "` needs `" + std::string(key) + " = <mode>`");
    return ModeId{fallback, kind};
  };
  // A key that holds either an angle or the word `scan`.
  auto angle_or_slot = [&](const char* key, CustomTask::Slot which, bool required) -> double {
    auto* en = r.take(key);
    if (!en) {
      if (required)
        errors.add(sec.line, "`" + type + "` needs `" + key + " = <angle>` (or `scan`)");
      return 0.0;
    }
    if (en->value == "scan") {
      bind_slot(en, which);
      return 0.0;
    }
    std::string err;
    if (auto v = parse_pi_expr(en->value, err)) return *v;
    errors.add(en->line, std::string(key) + ": " + err);
    return 0.0;
  };

  if (type == "crystal") {
    Crystal c;
    c.signal = required_mode("signal", ModeKind::Signal, "?s");
    c.idler = required_mode("idler", ModeKind::Idler, "?i");
    if (auto* en = r.take("gain")) {
      std::string err;
      if (auto g = parse_complex(en->value, err)) c.gain = *g;
      else errors.add(en->line, "gain: " + err);
    } else {
      errors.add(sec.line, "`crystal` needs `gain = ...`");
    }
    c.pump_phase = angle_or_slot("pump_phase", CustomTask::Slot::CrystalPump, false);
    ct.components.push_back(c);
  } else if (type == "phase") {
    PhaseShift p;
    p.mode = required_mode("mode", ModeKind::Signal, "?m");
    p.phi = angle_or_slot("phi", CustomTask::Slot::PhasePhi, true);
    ct.components.push_back(p);
  } else if (type == "mirror") {
    ct.components.push_back(Mirror{required_mode("mode", ModeKind::Signal, "?m")});
  } else if (type == "filter") {
    Filter f;
    f.mode = required_mode("mode", ModeKind::Idler, "?m");
    double t = 0.0;
    if (auto* en = r.take("tau")) {
      std::string err;
      if (auto v = parse_pi_expr(en->value, err)) {
        if (*v < 0.0 || *v > 1.0) errors.add(en->line, "tau magnitude must lie in [0, 1]");
        else t = *v;
      } else {
        errors.add(en->line, "tau: " + err);
      }
    } else {
      errors.add(sec.line, "`filter` needs `tau = ...`");
    }
    double th = r.number("theta").value_or(0.0);
    f.tau = std::polar(t, th);
    auto anc = r.mode("ancilla", ModeKind::Ancilla);
    f.ancilla = anc.value_or(ModeId{"anc" + std::to_string(index + 1), ModeKind::Ancilla});
    ct.components.push_back(f);
  } else if (type == "seed") {
    Seed s;
    s.mode = required_mode("mode", ModeKind::Idler, "?m");
    if (auto* en = r.take("alpha")) {
      std::string err;
      if (auto a = parse_complex(en->value, err)) s.alpha = *a;
      else errors.add(en->line, "alpha: " + err);
    } else {
      errors.add(sec.line, "`seed` needs `alpha = re, im`");
    }
    ct.components.push_back(s);
  } else if (type == "combiner") {
    Combiner c;
    if (auto* en = r.take("inputs")) {
      for (auto part : split(en->value, ',')) {
        if (!valid_label(part)) {
          errors.add(en->line, "inputs: invalid mode label `" + std::string(part) + "`");
        } else {
          c.inputs.push_back(ModeId{std::string(part), ModeKind::Signal});
        }
      }
      if (c.inputs.empty()) errors.add(en->line, "inputs: at least one mode required");
    } else {
      errors.add(sec.line, "`combiner` needs `inputs = m1, m2, ...`");
    }
    c.output = required_mode("output", ModeKind::Signal, "?out");
    if (auto* en = r.take("weights")) {
      for (auto part : split(en->value, ';')) {
        std::string err;
        if (auto w = parse_complex(part, err)) c.weights.push_back(*w);
        else errors.add(en->line, "weights: " + err);
      }
      if (c.weights.size() != c.inputs.size()) {
        errors.add(en->line, "weights: expected one `re, im` entry per input, separated by `;`");
      }
    }
    ct.components.push_back(c);
  } else if (type == "detector") {
    Detector d;
    if (auto* en = r.take("name")) {
      if (valid_label(en->value)) d.name = en->value;
      else errors.add(en->line, "name: invalid detector name");
    } else {
      errors.add(sec.line, "`detector` needs `name = ...`");
    }
    d.mode = required_mode("mode", ModeKind::Signal, "?m");
    ct.components.push_back(d);
  } else {
    errors.add(type_en->line,
               "unknown component type `" + type +
                   "`; one of crystal, phase, mirror, filter, seed, combiner, detector");
    r.consume_rest();
    return;
  }
  r.finish();
}

}  // namespace

ConfigResult parse_config(std::string_view text) {
  ErrorSink errors;
  auto sections = lex_sections(text, errors);
  for (auto& s : sections) flag_duplicate_keys(s, errors);

  RawSection* preset_sec = nullptr;
  RawSection* network_sec = nullptr;
  RawSection* state_sec = nullptr;
  RawSection* scan_sec = nullptr;
  RawSection* lock_sec = nullptr;
  RawSection* output_sec = nullptr;
  std::map<long, RawSection*> component_secs;

  auto claim = [&](RawSection*& slot, RawSection& s) {
    if (slot) errors.add(s.line, "duplicate [" + s.name + "] section");
    else slot = &s;
  };
  for (auto& s : sections) {
    if (s.name == "preset") claim(preset_sec, s);
    else if (s.name == "network") claim(network_sec, s);
    else if (s.name == "state") claim(state_sec, s);
    else if (s.name == "scan") claim(scan_sec, s);
    else if (s.name == "lock") claim(lock_sec, s);
    else if (s.name == "output") claim(output_sec, s);
    else if (s.name.starts_with("component.")) {
      std::string_view num = std::string_view(s.name).substr(10);
      long n = 0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
      if (ec != std::errc{} || ptr != num.data() + num.size() || n <= 0) {
        errors.add(s.line, "component sections are named [component.N] with N a positive integer");
      } else if (component_secs.count(n)) {
        errors.add(s.line, "duplicate [component." + std::to_string(n) + "] section");
      } else {
        component_secs[n] = &s;
      }
    } else {
      errors.add(s.line, "unknown section [" + s.name + "]");
    }
  }

  RunTask task;
  bool has_custom = network_sec || state_sec || !component_secs.empty();
  bool has_preset = preset_sec != nullptr;
  bool has_lock = lock_sec != nullptr;

  if (has_preset && has_custom) {
    errors.add(preset_sec->line,
               "[preset] cannot be combined with [network]/[component]/[state] sections");
  }
  if (has_lock && (has_preset || has_custom)) {
    errors.add(lock_sec->line, "[lock] is a standalone task; remove the network sections");
  }
  if (!has_preset && !has_custom && !has_lock) {
    errors.add(0, "nothing to run: add a [preset], [component.N], or [lock] section");
  }

  if (has_preset) read_preset_section(*preset_sec, task, errors);

  int slot_line = 0;
  if (has_custom && !has_preset) {
    CustomTask ct;
    if (network_sec) {
      SectionReader r(*network_sec, errors);
      if (auto b = r.boolean("classical")) ct.classical = *b;
      r.finish();
    }
    if (component_secs.empty()) {
      errors.add(network_sec ? network_sec->line : 0,
                 "custom network has no [component.N] sections");
    }
    for (auto& [n, sec] : component_secs) {
      read_component_section(*sec, ct.components.size(), ct, slot_line, errors);
    }
    if (state_sec) {
      for (auto& en : state_sec->entries) {
        if (en.used) continue;  // duplicates were already reported
        en.used = true;
        if (!valid_label(en.key)) {
          errors.add(en.line, "invalid mode label `" + en.key + "`");
          continue;
        }
        std::string err;
        if (auto a = parse_complex(en.value, err)) {
          ct.state.set_coherent(ModeId{en.key}, *a);
        } else {
          errors.add(en.line, en.key + ": " + err);
        }
      }
    }
    bool any_detector = std::any_of(ct.components.begin(), ct.components.end(),
                                    [](const ComponentSpec& c) {
                                      return std::holds_alternative<Detector>(c);
                                    });
    if (!component_secs.empty() && !any_detector) {
      errors.add(0, "custom network has no detector component");
    }
    task.kind = (ct.slot != CustomTask::Slot::None) ? TaskKind::Scan : TaskKind::Single;
    task.custom = std::move(ct);
  }

  if (scan_sec) {
    SectionReader r(*scan_sec, errors);
    if (auto* en = r.take("parameter")) {
      if (has_custom) {
        errors.add(en->line, "scan parameter for a custom network is chosen by the `scan` slot");
      } else if (auto p = scan_parameter_from_name(en->value)) {
        task.scan.parameter = *p;
      } else {
        errors.add(en->line, "parameter: one of phi, pump-phase, tau");
      }
    }
    if (auto* en = r.take("grid")) {
      std::string err;
      if (auto g = parse_grid(en->value, err)) task.scan.grid = *g;
      else errors.add(en->line, "grid: " + err);
    }
    if (auto* en = r.take("detector")) {
      if (valid_label(en->value)) task.scan.detector = en->value;
      else errors.add(en->line, "detector: invalid name");
    }
    if (auto* en = r.take("coincidence")) {
      auto parts = split(en->value, ',');
      if (parts.size() != 2 || !valid_label(parts[0]) || !valid_label(parts[1])) {
        errors.add(en->line, "coincidence: expected two detector names `A, D`");
      } else {
        task.scan.coincidence = {std::string(parts[0]), std::string(parts[1])};
      }
    }
    if (auto b = r.boolean("oracle")) task.scan.oracle = *b;
    if (auto n = r.integer("oracle_cutoff", 2)) task.scan.oracle_cutoff = int(*n);
    r.finish();
    if (has_lock) errors.add(scan_sec->line, "[scan] does not apply to a [lock] task");
    if (task.custom && task.custom->slot == CustomTask::Slot::None && task.scan.grid) {
      errors.add(scan_sec->line,
                 "custom network has no scan slot; bind `phi = scan` or `pump_phase = scan`");
    }
  }

  bool classical = (task.preset && task.preset->seed_mode == SeedMode::Classical) ||
                   (task.custom && task.custom->classical);
  if (task.scan.oracle && classical) {
    errors.add(scan_sec ? scan_sec->line : 0,
               "the oracle simulates the quantum treatment; it cannot check a classical-seed run");
  }

  if (lock_sec) {
    SectionReader r(*lock_sec, errors);
    if (auto* en = r.take("kind")) {
      if (en->value == "trajectory") task.kind = TaskKind::PhaseLock;
      else if (en->value == "ensemble") task.kind = TaskKind::Ensemble;
      else errors.add(en->line, "kind: one of trajectory, ensemble");
    } else {
      errors.add(lock_sec->line, "[lock] needs `kind = trajectory` or `kind = ensemble`");
    }
    auto positive = [&](const char* key, double& out) {
      if (auto v = r.number(key)) {
        if (*v > 0.0) out = *v;
        else errors.add(lock_sec->line, std::string(key) + " must be positive");
      }
    };
    positive("kappa", task.lock.kappa);
    positive("seed", task.lock.seed_mag);
    positive("pump", task.lock.pump_mag);
    if (auto v = r.number("dtheta0")) task.lock.dtheta0 = *v;
    positive("z_max", task.lock.z_max);
    if (auto n = r.integer("members", 1)) task.lock.members = std::size_t(*n);
    if (auto n = r.integer("samples", 2)) task.lock.samples = std::size_t(*n);
    r.finish();
  }

  if (output_sec) {
    SectionReader r(*output_sec, errors);
    if (auto* en = r.take("csv")) task.csv_path = en->value;
    if (auto* en = r.take("json")) task.json_path = en->value;
    r.finish();
  }

  ConfigResult result;
  result.task = std::move(task);
  std::stable_sort(errors.items.begin(), errors.items.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [line, msg] : errors.items) {
    result.errors.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                     : "config: " + msg);
  }
  return result;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(Complex c) { return fmt17(c.real()) + ", " + fmt17(c.imag()); }

}  // namespace

std::string dump_config(const RunTask& task) {
  std::string out;
  auto kv = [&](std::string_view k, std::string_view v) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  };

  if (task.preset) {
    const PresetTask& pt = *task.preset;
    out += "[preset]\n";
    kv("name", preset_name(pt.preset));
    kv("gain", fmt_complex(pt.params.gain));
    kv("phi", fmt17(pt.params.phi));
    kv("pump_phase", fmt17(pt.params.pump_phase));
    kv("tau", fmt17(std::abs(pt.params.tau)));
    kv("theta", fmt17(pt.params.tau == Complex{} ? 0.0 : std::arg(pt.params.tau)));
    kv("seeded", seed_mode_name(pt.seed_mode));
    if (pt.seed_mode != SeedMode::None && pt.params.seed) {
      kv("alpha", fmt_complex(*pt.params.seed));
    }
    if (pt.params.couple_pump) kv("couple_pump", fmt17(*pt.params.couple_pump));
  }

  if (task.custom) {
    const CustomTask& ct = *task.custom;
    out += "[network]\n";
    kv("classical", ct.classical ? "true" : "false");
    for (std::size_t i = 0; i < ct.components.size(); ++i) {
      out += "\n[component." + std::to_string(i + 1) + "]\n";
      bool slot_here = ct.slot != CustomTask::Slot::None && ct.slot_component == i;
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Crystal>) {
              kv("type", "crystal");
              kv("signal", c.signal.label);
              kv("idler", c.idler.label);
              kv("gain", fmt_complex(c.gain));
              kv("pump_phase", slot_here ? "scan" : fmt17(c.pump_phase));
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
              kv("type", "phase");
              kv("mode", c.mode.label);
              kv("phi", slot_here ? "scan" : fmt17(c.phi));
            } else if constexpr (std::is_same_v<T, Mirror>) {
              kv("type", "mirror");
              kv("mode", c.mode.label);
            } else if constexpr (std::is_same_v<T, Filter>) {
              kv("type", "filter");
              kv("mode", c.mode.label);
              kv("tau", fmt17(std::abs(c.tau)));
              kv("theta", fmt17(c.tau == Complex{} ? 0.0 : std::arg(c.tau)));
              kv("ancilla", c.ancilla.label);
            } else if constexpr (std::is_same_v<T, Seed>) {
              kv("type", "seed");
              kv("mode", c.mode.label);
              kv("alpha", fmt_complex(c.alpha));
            } else if constexpr (std::is_same_v<T, Combiner>) {
              kv("type", "combiner");
              std::string inputs;
              for (std::size_t k = 0; k < c.inputs.size(); ++k) {
                if (k) inputs += ", ";
                inputs += c.inputs[k].label;
              }
              kv("inputs", inputs);
              kv("output", c.output.label);
              if (!c.weights.empty()) {
                std::string w;
                for (std::size_t k = 0; k < c.weights.size(); ++k) {
                  if (k) w += " ; ";
                  w += fmt_complex(c.weights[k]);
                }
                kv("weights", w);
              }
            } else if constexpr (std::is_same_v<T, Detector>) {
              kv("type", "detector");
              kv("name", c.name);
              kv("mode", c.mode.label);
            }
          },
          ct.components[i]);
    }
    if (!ct.state.assignments().empty()) {
      out += "\n[state]\n";
      for (const auto& [label, alpha] : ct.state.assignments()) {
        kv(label, fmt_complex(alpha));
      }
    }
  }

  if (task.kind == TaskKind::Scan) {
    const ScanSettings& sc = task.scan;
    bool any = sc.parameter || sc.grid || !sc.detector.empty() || sc.coincidence ||
               sc.oracle || sc.oracle_cutoff != 0;
    if (any) {
      if (!out.empty()) out += "\n";
      out += "[scan]\n";
      if (sc.parameter) kv("parameter", scan_parameter_name(*sc.parameter));
      if (sc.grid) {
        kv("grid",
           fmt17(sc.grid->start) + " : " + fmt17(sc.grid->stop) + " : " + fmt17(sc.grid->step));
      }
      if (!sc.detector.empty()) kv("detector", sc.detector);
      if (sc.coincidence) kv("coincidence", sc.coincidence->first + ", " + sc.coincidence->second);
      if (sc.oracle) kv("oracle", "true");
      if (sc.oracle_cutoff != 0) kv("oracle_cutoff", std::to_string(sc.oracle_cutoff));
    }
  }

  if (task.kind == TaskKind::PhaseLock || task.kind == TaskKind::Ensemble) {
    if (!out.empty()) out += "\n";
    out += "[lock]\n";
    kv("kind", task.kind == TaskKind::PhaseLock ? "trajectory" : "ensemble");
    kv("kappa", fmt17(task.lock.kappa));
    kv("seed", fmt17(task.lock.seed_mag));
    kv("pump", fmt17(task.lock.pump_mag));
    if (task.kind == TaskKind::PhaseLock) kv("dtheta0", fmt17(task.lock.dtheta0));
    kv("z_max", fmt17(task.lock.z_max));
    if (task.kind == TaskKind::Ensemble) kv("members", std::to_string(task.lock.members));
    kv("samples", std::to_string(task.lock.samples));
  }

  if (!task.csv_path.empty() || !task.json_path.empty()) {
    if (!out.empty()) out += "\n";
    out += "[output]\n";
    if (!task.csv_path.empty()) kv("csv", task.csv_path);
    if (!task.json_path.empty()) kv("json", task.json_path);
  }
  return out;
}

}  // namespace pdcnet::cli
