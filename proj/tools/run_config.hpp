#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdrlab/mdr_catalog.hpp"
#include "table.hpp"

namespace mdrlab::cli {

/// Bad flag values or config contents; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::filesystem::path out = "-";
  Format format = Format::Csv;
  std::vector<MdrId> mdrs{kAllMdrs.begin(), kAllMdrs.end()};
  // theta3 grid on [thetaStart, thetaStop), thetaCount points
  double thetaStart = 0.0;
  double thetaStop = 6.283185307179586;
  std::size_t thetaCount = 721;
  int restarts = 50;
  // regions
  double deltaA = 1.0;
  double deltaB = 1.0;
  double absC = 1.0;
  std::size_t points = 400;
  // gamma search
  std::size_t grid = 64;
  // verify
  std::vector<std::string> suites;  // empty: all
  std::vector<std::size_t> dims{2, 3, 4, 5};
  int trials = 200;
  bool negativeControl = false;
};

/// Values as given on the command line (or in the config file), still unvalidated.
struct RawSettings {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> mdr;
  std::optional<double> thetaStart;
  std::optional<double> thetaStop;
  std::optional<long long> thetaCount;
  std::optional<long long> restarts;
  std::optional<double> deltaA;
  std::optional<double> deltaB;
  std::optional<double> absC;
  std::optional<long long> points;
  std::optional<long long> grid;
  std::optional<std::string> suite;
  std::optional<std::string> dims;
  std::optional<long long> trials;
  std::optional<bool> negativeControl;
};

/// Reads a flat JSON object. Throws ConfigError on unreadable files, parse
/// errors, unknown keys, or wrongly typed values.
RawSettings load_config_file(const std::filesystem::path& path);

/// Defaults, overlaid by `file`, overlaid by `flags`; then validated.
RunConfig resolve(const std::string& command, const RawSettings& file, const RawSettings& flags);

std::vector<MdrId> parse_mdr_list(const std::string& list);

}  // namespace mdrlab::cli
