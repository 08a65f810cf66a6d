#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mdrlab::cli {

namespace {

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

template <typename T>
void overlay(std::optional<T>& into, const std::optional<T>& from) {
  if (from) into = from;
}

template <typename T>
T read_value(const nlohmann::json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

// "mdr" and "dims" may be given as a comma list or a JSON array.
std::string read_list(const nlohmann::json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (!value.is_array()) throw ConfigError("config key '" + key + "' must be a string or an array");
  std::string joined;
  for (const auto& item : value) {
    if (!joined.empty()) joined += ',';
    if (item.is_string()) {
      joined += item.get<std::string>();
    } else if (item.is_number_integer()) {
      joined += std::to_string(item.get<long long>());
    } else {
      throw ConfigError("config key '" + key + "' has a non-scalar entry");
    }
  }
  return joined;
}

}  // namespace

std::vector<MdrId> parse_mdr_list(const std::string& list) {
  std::vector<MdrId> out;
  for (const auto& name : split(list)) {
    if (name == "all") return {kAllMdrs.begin(), kAllMdrs.end()};
    const auto id = parse_mdr(name);
    if (!id) throw ConfigError("unknown MDR '" + name + "'");
    if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
  }
  if (out.empty()) throw ConfigError("MDR list is empty");
  return out;
}

RawSettings load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a flat JSON object");

  RawSettings s;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) throw ConfigError("config file must be flat; '" + key + "' is an object");
    if (key == "seed") s.seed = read_value<std::uint64_t>(value, key);
    else if (key == "out") s.out = read_value<std::string>(value, key);
    else if (key == "format") s.format = read_value<std::string>(value, key);
    else if (key == "mdr") s.mdr = read_list(value, key);
    else if (key == "theta_start") s.thetaStart = read_value<double>(value, key);
    else if (key == "theta_stop") s.thetaStop = read_value<double>(value, key);
    else if (key == "theta_count") s.thetaCount = read_value<long long>(value, key);
    else if (key == "restarts") s.restarts = read_value<long long>(value, key);
    else if (key == "delta_a") s.deltaA = read_value<double>(value, key);
    else if (key == "delta_b") s.deltaB = read_value<double>(value, key);
    else if (key == "abs_c") s.absC = read_value<double>(value, key);
    else if (key == "points") s.points = read_value<long long>(value, key);
    else if (key == "grid") s.grid = read_value<long long>(value, key);
    else if (key == "suite") s.suite = read_list(value, key);
    else if (key == "dims") s.dims = read_list(value, key);
    else if (key == "trials") s.trials = read_value<long long>(value, key);
    else if (key == "negative_control") s.negativeControl = read_value<bool>(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return s;
}

RunConfig resolve(const std::string& command, const RawSettings& file, const RawSettings& flags) {
  RawSettings m = file;
  overlay(m.seed, flags.seed);
  overlay(m.out, flags.out);
  overlay(m.format, flags.format);
  overlay(m.mdr, flags.mdr);
  overlay(m.thetaStart, flags.thetaStart);
  overlay(m.thetaStop, flags.thetaStop);
  overlay(m.thetaCount, flags.thetaCount);
  overlay(m.restarts, flags.restarts);
  overlay(m.deltaA, flags.deltaA);
  overlay(m.deltaB, flags.deltaB);
  overlay(m.absC, flags.absC);
  overlay(m.points, flags.points);
  overlay(m.grid, flags.grid);
  overlay(m.suite, flags.suite);
  overlay(m.dims, flags.dims);
  overlay(m.trials, flags.trials);
  overlay(m.negativeControl, flags.negativeControl);

  RunConfig c;
  c.command = command;
  if (m.seed) c.seed = *m.seed;
  if (m.out) c.out = *m.out;
  if (m.format) {
    if (*m.format == "csv") c.format = Format::Csv;
    else if (*m.format == "json") c.format = Format::Json;
    else throw ConfigError("format must be csv or json, got '" + *m.format + "'");
  }
  if (m.mdr) c.mdrs = parse_mdr_list(*m.mdr);
  if (m.thetaStart) c.thetaStart = *m.thetaStart;
  if (m.thetaStop) c.thetaStop = *m.thetaStop;
  if (!(c.thetaStop > c.thetaStart)) throw ConfigError("theta grid needs stop > start");
  if (m.thetaCount) {
    if (*m.thetaCount < 2) throw ConfigError("theta-count must be at least 2");
    c.thetaCount = static_cast<std::size_t>(*m.thetaCount);
  }
  if (m.restarts) {
    if (*m.restarts < 1) throw ConfigError("restarts must be at least 1");
    c.restarts = static_cast<int>(*m.restarts);
  }
  if (m.deltaA) c.deltaA = *m.deltaA;
  if (m.deltaB) c.deltaB = *m.deltaB;
  if (m.absC) c.absC = *m.absC;
  if (c.deltaA < 0.0 || c.deltaB < 0.0 || c.absC < 0.0) throw ConfigError("ensemble values must be non-negative");
  if (m.points) {
    if (*m.points < 2) throw ConfigError("points must be at least 2");
    c.points = static_cast<std::size_t>(*m.points);
  }
  if (m.grid) {
    if (*m.grid < 4) throw ConfigError("grid must be at least 4");
    c.grid = static_cast<std::size_t>(*m.grid);
  }
  if (m.suite) {
    static const std::vector<std::string> known{"prop1", "two-route", "gamma", "lambda", "max-corr"};
    for (const auto& name : split(*m.suite)) {
      if (name == "all") {
        c.suites.clear();
        break;
      }
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError("unknown suite '" + name + "'");
      }
      c.suites.push_back(name);
    }
  }
  if (m.dims) {
    c.dims.clear();
    for (const auto& d : split(*m.dims)) {
      std::size_t used = 0;
      long long n = 0;
      try {
        n = std::stoll(d, &used);
      } catch (const std::exception&) {
        throw ConfigError("dims entry '" + d + "' is not an integer");
      }
      if (used != d.size() || n < 2 || n > 8) throw ConfigError("dims entries must be integers in [2, 8]");
      c.dims.push_back(static_cast<std::size_t>(n));
    }
    if (c.dims.empty()) throw ConfigError("dims list is empty");
  }
  if (m.trials) {
    if (*m.trials < 1) throw ConfigError("trials must be at least 1");
    c.trials = static_cast<int>(*m.trials);
  }
  if (m.negativeControl) c.negativeControl = *m.negativeControl;
  return c;
}

}  // namespace mdrlab::cli
