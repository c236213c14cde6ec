#include "fluxsim/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <system_error>

#include "fluxsim/cli/csv.hpp"
#include "fluxsim/detail/overloaded.hpp"

namespace fluxsim::cli {
namespace {

std::string describe(const std::string& source, int line, const std::string& key, const std::string& message) {
  std::string text = source;
  if (line > 0) {
    text += ':' + std::to_string(line);
  }
  text += ": ";
  if (!key.empty()) {
    text += "'" + key + "': ";
  }
  return text + message;
}

/// Walks the document and remembers the dotted path of each node for diagnostics.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& key, const std::string& message) const {
    const int line = node.IsDefined() && node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ConfigError(source_, line, key, message);
  }

  void require_map(const YAML::Node& node, const std::string& path) const {
    if (!node.IsMap()) {
      fail(node, path, "expected a mapping");
    }
  }

  void reject_unknown(const YAML::Node& node, const std::string& prefix,
                      std::initializer_list<std::string_view> allowed) const {
    for (const auto& entry : node) {
      const auto key = entry.first.Scalar();
      bool known = false;
      for (auto a : allowed) {
        known = known || a == key;
      }
      if (!known) {
        fail(entry.first, join(prefix, key), "unknown key");
      }
    }
  }

  static std::string join(const std::string& prefix, std::string_view key) {
    return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
  }

  YAML::Node required(const YAML::Node& parent, const std::string& prefix, std::string_view key) const {
    YAML::Node child = parent[std::string(key)];
    if (!child) {
      fail(parent, join(prefix, key), "missing required key");
    }
    return child;
  }

  template <class T>
  T number(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) {
      fail(node, path, "expected a number");
    }
    const auto& text = node.Scalar();
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') {
      ++first;
    }
    T value{};
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      fail(node, path, "expected a number, got '" + text + "'");
    }
    return value;
  }

  std::string string(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) {
      fail(node, path, "expected a string");
    }
    return node.Scalar();
  }

  /// Overwrites `target` when `key` is present.
  template <class T>
  void optional(const YAML::Node& parent, const std::string& prefix, std::string_view key, T& target) const {
    if (YAML::Node child = parent[std::string(key)]) {
      target = number<T>(child, join(prefix, key));
    }
  }

  double required_number(const YAML::Node& parent, const std::string& prefix, std::string_view key) const {
    return number<double>(required(parent, prefix, key), join(prefix, key));
  }

 private:
  std::string source_;
};

void read_machine(const Reader& r, const YAML::Node& node, MachineParams& m) {
  r.require_map(node, "machine");
  r.reject_unknown(node, "machine", {"r_s", "r_r", "l_m", "l_l", "z_p"});
  r.optional(node, "machine", "r_s", m.r_s);
  r.optional(node, "machine", "r_r", m.r_r);
  r.optional(node, "machine", "l_m", m.l_m);
  r.optional(node, "machine", "l_l", m.l_l);
  r.optional(node, "machine", "z_p", m.z_p);
}

VoltageProfile read_voltage(const Reader& r, const YAML::Node& node) {
  r.require_map(node, "voltage");
  const auto type = r.string(r.required(node, "voltage", "type"), "voltage.type");
  if (type == "zero") {
    r.reject_unknown(node, "voltage", {"type"});
    return ZeroVoltage{};
  }
  if (type == "step") {
    r.reject_unknown(node, "voltage", {"type", "amplitude", "start"});
    StepVoltage v{r.required_number(node, "voltage", "amplitude")};
    r.optional(node, "voltage", "start", v.start);
    return v;
  }
  if (type == "sinusoid") {
    r.reject_unknown(node, "voltage", {"type", "amplitude", "frequency_hz", "phase"});
    SinusoidVoltage v{r.required_number(node, "voltage", "amplitude"),
                      r.required_number(node, "voltage", "frequency_hz")};
    r.optional(node, "voltage", "phase", v.phase);
    return v;
  }
  r.fail(node["type"], "voltage.type", "unknown voltage type '" + type + "' (expected zero, step or sinusoid)");
}

SpeedProfile read_speed(const Reader& r, const YAML::Node& node) {
  r.require_map(node, "speed");
  const auto type = r.string(r.required(node, "speed", "type"), "speed.type");
  if (type == "constant") {
    r.reject_unknown(node, "speed", {"type", "omega"});
    return ConstantSpeed{r.required_number(node, "speed", "omega")};
  }
  if (type == "ramp") {
    r.reject_unknown(node, "speed", {"type", "omega0", "slope"});
    RampSpeed s;
    r.optional(node, "speed", "omega0", s.omega0);
    s.slope = r.required_number(node, "speed", "slope");
    return s;
  }
  if (type == "synchronous") {
    r.reject_unknown(node, "speed", {"type", "ratio"});
    SynchronousSpeed s;
    r.optional(node, "speed", "ratio", s.ratio);
    return s;
  }
  r.fail(node["type"], "speed.type", "unknown speed type '" + type + "' (expected constant, ramp or synchronous)");
}

void read_estimator(const Reader& r, const YAML::Node& node, Scenario& s) {
  r.require_map(node, "estimator");
  r.reject_unknown(node, "estimator", {"kind", "method", "clamp", "crossover_rad_s"});
  if (YAML::Node kind = node["kind"]) {
    const auto name = r.string(kind, "estimator.kind");
    double crossover = Blended::kDefaultCrossover;
    r.optional(node, "estimator", "crossover_rad_s", crossover);
    auto parsed = parse_estimator_kind(name, crossover);
    if (!parsed) {
      r.fail(kind, "estimator.kind", "unknown estimator kind '" + name + "'");
    }
    s.estimator = *parsed;
  }
  if (node["crossover_rad_s"] && !std::holds_alternative<Blended>(s.estimator)) {
    r.fail(node["crossover_rad_s"], "estimator.crossover_rad_s", "only valid for the blended estimator");
  }
  if (YAML::Node method = node["method"]) {
    const auto text = r.string(method, "estimator.method");
    const auto parsed = parse_integration_method(text);
    if (!parsed) {
      r.fail(method, "estimator.method", "unknown integration method '" + text + "' (expected euler or rk4)");
    }
    s.estimator_options.method = *parsed;
  }
  if (YAML::Node clamp = node["clamp"]) {
    s.estimator_options.clamp = r.number<double>(clamp, "estimator.clamp");
  }
}

void read_mismatch(const Reader& r, const YAML::Node& node, MismatchFactors& f) {
  r.require_map(node, "mismatch");
  r.reject_unknown(node, "mismatch", {"r_se", "r_re", "l_me", "l_le"});
  r.optional(node, "mismatch", "r_se", f.r_se);
  r.optional(node, "mismatch", "r_re", f.r_re);
  r.optional(node, "mismatch", "l_me", f.l_me);
  r.optional(node, "mismatch", "l_le", f.l_le);
}

void read_fault(const Reader& r, const YAML::Node& node, MeasurementFault& f) {
  r.require_map(node, "fault");
  r.reject_unknown(node, "fault",
                   {"current_offset_x", "current_offset_y", "current_noise_std", "voltage_offset_x",
                    "voltage_offset_y", "voltage_noise_std"});
  r.optional(node, "fault", "current_offset_x", f.current_offset.x);
  r.optional(node, "fault", "current_offset_y", f.current_offset.y);
  r.optional(node, "fault", "current_noise_std", f.current_noise_std);
  r.optional(node, "fault", "voltage_offset_x", f.voltage_offset.x);
  r.optional(node, "fault", "voltage_offset_y", f.voltage_offset.y);
  r.optional(node, "fault", "voltage_noise_std", f.voltage_noise_std);
}

void read_simulation(const Reader& r, const YAML::Node& node, Scenario& s) {
  r.require_map(node, "simulation");
  r.reject_unknown(node, "simulation", {"dt", "t_end", "settle", "preroll", "method"});
  s.dt = r.required_number(node, "simulation", "dt");
  s.t_end = r.required_number(node, "simulation", "t_end");
  // Short runs would otherwise end before the default metric window opens.
  s.settle = s.t_end <= s.settle ? 0.0 : s.settle;
  r.optional(node, "simulation", "settle", s.settle);
  r.optional(node, "simulation", "preroll", s.preroll);
  if (YAML::Node method = node["method"]) {
    const auto text = r.string(method, "simulation.method");
    const auto parsed = parse_integration_method(text);
    if (!parsed) {
      r.fail(method, "simulation.method", "unknown integration method '" + text + "' (expected euler or rk4)");
    }
    s.plant_method = *parsed;
  }
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string key, const std::string& message)
    : std::runtime_error(describe(source, line, key, message)), line_(line), key_(std::move(key)) {}

RunConfig parse_config(std::string_view text, std::string_view source) {
  const Reader r{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source), e.mark.line >= 0 ? e.mark.line + 1 : 0, "", e.msg);
  }
  if (!root.IsMap()) {
    throw ConfigError(std::string(source), 0, "", "config must be a mapping");
  }
  r.reject_unknown(root, "",
                   {"name", "seed", "output", "machine", "voltage", "speed", "estimator", "mismatch", "fault",
                    "simulation"});

  RunConfig config;
  Scenario& s = config.scenario;
  if (YAML::Node name = root["name"]) {
    s.name = r.string(name, "name");
  }
  r.optional(root, "", "seed", config.seed);
  if (YAML::Node output = root["output"]) {
    config.output = r.string(output, "output");
  }
  if (YAML::Node machine = root["machine"]) {
    read_machine(r, machine, s.machine);
  }
  s.profile.voltage = read_voltage(r, r.required(root, "", "voltage"));
  if (YAML::Node speed = root["speed"]) {
    s.profile.speed = read_speed(r, speed);
  }
  if (YAML::Node estimator = root["estimator"]) {
    read_estimator(r, estimator, s);
  }
  if (YAML::Node mismatch = root["mismatch"]) {
    read_mismatch(r, mismatch, s.mismatch);
  }
  if (YAML::Node fault = root["fault"]) {
    read_fault(r, fault, s.fault);
  }
  read_simulation(r, r.required(root, "", "simulation"), s);

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source), 0, "", e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string(), 0, "", "cannot open config file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string serialize_config(const RunConfig& config) {
  const Scenario& s = config.scenario;
  std::ostringstream out;
  const auto num = [](double v) { return format_double(v); };
  // Names are emitted double-quoted so that values such as "yes" or "1" stay strings.
  const auto quoted = [](const std::string& text) {
    std::string q = "\"";
    for (char c : text) {
      if (c == '"' || c == '\\') {
        q += '\\';
      }
      q += c;
    }
    return q + '"';
  };

  out << "name: " << quoted(s.name) << '\n';
  out << "seed: " << config.seed << '\n';
  if (!config.output.empty()) {
    out << "output: " << quoted(config.output) << '\n';
  }
  out << "machine:\n"
      << "  r_s: " << num(s.machine.r_s) << '\n'
      << "  r_r: " << num(s.machine.r_r) << '\n'
      << "  l_m: " << num(s.machine.l_m) << '\n'
      << "  l_l: " << num(s.machine.l_l) << '\n'
      << "  z_p: " << s.machine.z_p << '\n';

  out << "voltage:\n";
  std::visit(detail::overloaded{
                 [&](const ZeroVoltage&) { out << "  type: zero\n"; },
                 [&](const StepVoltage& v) {
                   out << "  type: step\n  amplitude: " << num(v.amplitude) << "\n  start: " << num(v.start) << '\n';
                 },
                 [&](const SinusoidVoltage& v) {
                   out << "  type: sinusoid\n  amplitude: " << num(v.amplitude)
                       << "\n  frequency_hz: " << num(v.frequency_hz) << "\n  phase: " << num(v.phase) << '\n';
                 },
             },
             s.profile.voltage);

  out << "speed:\n";
  std::visit(detail::overloaded{
                 [&](const ConstantSpeed& v) { out << "  type: constant\n  omega: " << num(v.omega) << '\n'; },
                 [&](const RampSpeed& v) {
                   out << "  type: ramp\n  omega0: " << num(v.omega0) << "\n  slope: " << num(v.slope) << '\n';
                 },
                 [&](const SynchronousSpeed& v) { out << "  type: synchronous\n  ratio: " << num(v.ratio) << '\n'; },
             },
             s.profile.speed);

  out << "estimator:\n  kind: " << kind_name(s.estimator) << '\n';
  if (const auto* blended = std::get_if<Blended>(&s.estimator)) {
    out << "  crossover_rad_s: " << num(blended->crossover_rad_s) << '\n';
  }
  out << "  method: " << to_string(s.estimator_options.method) << '\n';
  if (s.estimator_options.clamp) {
    out << "  clamp: " << num(*s.estimator_options.clamp) << '\n';
  }

  out << "mismatch:\n"
      << "  r_se: " << num(s.mismatch.r_se) << '\n'
      << "  r_re: " << num(s.mismatch.r_re) << '\n'
      << "  l_me: " << num(s.mismatch.l_me) << '\n'
      << "  l_le: " << num(s.mismatch.l_le) << '\n';

  out << "fault:\n"
      << "  current_offset_x: " << num(s.fault.current_offset.x) << '\n'
      << "  current_offset_y: " << num(s.fault.current_offset.y) << '\n'
      << "  current_noise_std: " << num(s.fault.current_noise_std) << '\n'
      << "  voltage_offset_x: " << num(s.fault.voltage_offset.x) << '\n'
      << "  voltage_offset_y: " << num(s.fault.voltage_offset.y) << '\n'
      << "  voltage_noise_std: " << num(s.fault.voltage_noise_std) << '\n';

  out << "simulation:\n"
      << "  dt: " << num(s.dt) << '\n'
      << "  t_end: " << num(s.t_end) << '\n'
      << "  settle: " << num(s.settle) << '\n'
      << "  preroll: " << num(s.preroll) << '\n'
      << "  method: " << to_string(s.plant_method) << '\n';
  return out.str();
}

RunConfig config_for(const Scenario& scenario, std::uint64_t seed) {
  RunConfig config;
  config.scenario = scenario;
  config.seed = seed;
  return config;
}

}  // namespace fluxsim::cli
