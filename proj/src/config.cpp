#include <charconv>
#include <fstream>
#include <sstream>

#include "hamest/experiment.hpp"

namespace hamest {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::one_channel: return "one_channel";
    case Scheme::adaptive: return "adaptive";
    case Scheme::many_channel: return "many_channel";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "one_channel") return Scheme::one_channel;
  if (name == "adaptive") return Scheme::adaptive;
  if (name == "many_channel") return Scheme::many_channel;
  throw ValidationError("unknown scheme '" + std::string(name) +
                        "' (valid: one_channel, adaptive, many_channel)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(int line, std::string_view key, std::string_view value) {
  std::ostringstream msg;
  msg << "config line " << line << ": invalid value '" << value << "' for '" << key << "'";
  throw ValidationError(msg.str());
}

template <typename T>
T parse_number(int line, std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(line, key, value);
  return out;
}

bool parse_bool(int line, std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(line, key, value);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line) + ": expected key = value");
    }
    const std::string_view key = trim(s.substr(0, eq));
    const std::string_view value = trim(s.substr(eq + 1));
    if (key == "model") {
      c.model = parse_model_kind(value);
    } else if (key == "d") {
      c.d = parse_number<int>(line, key, value);
    } else if (key == "scheme") {
      c.scheme = parse_scheme(value);
    } else if (key == "delta") {
      c.delta = parse_number<double>(line, key, value);
    } else if (key == "E") {
      c.radius = parse_number<double>(line, key, value);
    } else if (key == "trials") {
      c.trials = parse_number<int>(line, key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(line, key, value);
    } else if (key == "kappa") {
      c.constants.kappa = parse_number<double>(line, key, value);
    } else if (key == "alpha") {
      c.constants.alpha = parse_number<double>(line, key, value);
    } else if (key == "beta") {
      c.constants.beta = parse_number<double>(line, key, value);
    } else if (key == "r_max") {
      c.constants.r_max = parse_number<int>(line, key, value);
    } else if (key == "p_crit") {
      c.constants.p_crit = parse_number<double>(line, key, value);
    } else if (key == "refine") {
      c.constants.refine_steps = parse_number<int>(line, key, value);
    } else if (key == "trotterize") {
      c.constants.trotterize = parse_bool(line, key, value);
    } else if (key == "worst_case_grid") {
      c.worst_case_grid = parse_bool(line, key, value);
    } else if (key == "out") {
      c.out = std::string(value);
    } else {
      throw ValidationError("config line " + std::to_string(line) + ": unknown key '" +
                            std::string(key) + "'");
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate(const ExperimentConfig& c) {
  if (c.model == ModelKind::custom) {
    throw ValidationError("config: model 'custom' needs explicit generators (library use only)");
  }
  if (c.d < 2) throw ValidationError("config: d must be at least 2");
  if (!(c.delta > 0.0) || !(c.radius > 0.0)) throw ValidationError("config: delta, E must be > 0");
  if (c.delta / c.radius > 0.2 + 1e-12) throw ValidationError("config: delta/E must not exceed 1/5");
  if (c.trials < 1) throw ValidationError("config: trials must be >= 1");
  const EstimationConstants& k = c.constants;
  if (!(k.kappa > 0.0) || !(k.alpha > 0.0) || k.beta < 0.0) {
    throw ValidationError("config: need kappa > 0, alpha > 0, beta >= 0");
  }
  if (!(k.p_crit > 0.0 && k.p_crit < 1.0)) throw ValidationError("config: p_crit must be in (0,1)");
  if (k.r_max < 0) throw ValidationError("config: r_max must be >= 0 (0 = default)");
  if (k.refine_steps < 0) throw ValidationError("config: refine must be >= 0");
}

}  // namespace hamest
