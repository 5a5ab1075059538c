#include "gyrostab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gyrostab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key '" + key + "': expected boolean, got '" + text + "'");
}

linalg::Vec3 parse_vec3(const std::string& key, const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> parts;
  while (std::getline(ss, item, ',')) parts.push_back(parse_double(key, trim(item)));
  if (parts.size() != 3)
    throw ConfigError("config key '" + key + "': expected three comma-separated numbers");
  return {parts[0], parts[1], parts[2]};
}

}  // namespace

RunConfig::RunConfig() {
  params.I1 = 3.0;
  params.I2 = 2.0;
  params.I3 = 1.0;
  params.mu = linalg::Vec3(1.0, 0.0, 0.0);
}

IniData parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");

  IniData data;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return data;
}

gyrostat::State parse_state_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> parts;
  while (std::getline(ss, item, ',')) parts.push_back(parse_double("state", trim(item)));
  if (parts.size() != 6)
    throw ConfigError("state: expected six comma-separated numbers M1,M2,M3,g1,g2,g3");
  gyrostat::State s;
  s.M = {parts[0], parts[1], parts[2]};
  s.gamma = {parts[3], parts[4], parts[5]};
  return s;
}

void apply_ini(RunConfig& config, const IniData& ini) {
  if (const auto sec = ini.find("params"); sec != ini.end()) {
    for (const auto& [key, value] : sec->second) {
      if (key == "I1") config.params.I1 = parse_double(key, value);
      else if (key == "I2") config.params.I2 = parse_double(key, value);
      else if (key == "I3") config.params.I3 = parse_double(key, value);
      else if (key == "mu") {
        if (value.find(',') != std::string::npos) config.params.mu = parse_vec3(key, value);
        else {
          // scalar form pairs with mu_axis
          const double v = parse_double(key, value);
          const auto axis_it = sec->second.find("mu_axis");
          if (axis_it == sec->second.end())
            throw ConfigError("scalar 'mu' requires 'mu_axis' in [params]");
          const int axis = static_cast<int>(parse_double("mu_axis", axis_it->second));
          if (axis < 1 || axis > 3) throw ConfigError("mu_axis must be 1, 2 or 3");
          config.params.mu = linalg::Vec3::Zero();
          config.params.mu(axis - 1) = v;
        }
      } else if (key == "mu_axis") {
        // consumed together with "mu"
      } else if (key == "mass" || key == "m") {
        config.params.mass = parse_double(key, value);
      } else if (key == "r_G") {
        config.params.r_G = parse_vec3(key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in [params]");
      }
    }
  }

  auto read_equilibrium = [&](const std::map<std::string, std::string>& sec) {
    for (const auto& [key, value] : sec) {
      if (key == "family") config.equilibrium.family = value;
      else if (key == "state") config.equilibrium.raw_state = parse_state_csv(value);
      else if (key == "q" || key == "alpha" || key == "beta" || key == "theta" ||
               key == "alpha1" || key == "alpha2" || key == "alpha3")
        config.equilibrium.values[key] = parse_double(key, value);
    }
  };

  if (const auto sec = ini.find("analyze"); sec != ini.end()) read_equilibrium(sec->second);

  if (const auto sec = ini.find("simulate"); sec != ini.end()) {
    for (const auto& [key, value] : sec->second) {
      if (key == "state") config.initial_state = parse_state_csv(value);
      else if (key == "T") config.horizon = parse_double(key, value);
      else if (key == "dt") config.dt = parse_double(key, value);
      else if (key == "general") config.general = parse_bool(key, value);
      else throw ConfigError("unknown key '" + key + "' in [simulate]");
    }
  }

  if (const auto sec = ini.find("perturb"); sec != ini.end()) {
    read_equilibrium(sec->second);
    for (const auto& [key, value] : sec->second) {
      if (key == "delta0") config.delta0 = parse_double(key, value);
      else if (key == "samples") config.samples = static_cast<int>(parse_double(key, value));
      else if (key == "T") config.horizon = parse_double(key, value);
      else if (key == "dt") config.dt = parse_double(key, value);
      else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_double(key, value));
      else if (key == "threshold") config.escape_threshold = parse_double(key, value);
    }
  }
}

void validate_analytic(const RunConfig& config) {
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!config.params.mu_axis())
    throw ConfigError("analytic commands require exactly one nonzero component of mu");
}

}  // namespace gyrostab::cli
