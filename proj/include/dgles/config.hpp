#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "dgles/fluxes.hpp"
#include "dgles/gas.hpp"

namespace dgles {

enum class ModelType { none, filter, smagorinsky };
enum class InitType { tgv, dhit, uniform, checkpoint };

struct ModelConfig {
  ModelType type = ModelType::none;
  /// Filter: full modal diagonal sigma_0..sigma_N.
  std::vector<double> sigma;
  double c = 0.0;
  double l_ref = 2.0 * std::numbers::pi;
  /// Smagorinsky constant.
  double c_s = 0.15;
};

struct InitConfig {
  InitType type = InitType::tgv;
  double mach = 0.1;
  double slope = -5.0 / 3.0;
  int k_min = 1;
  int k_max = 16;
  std::uint64_t seed = 1;
  std::filesystem::path path;
  // uniform state
  double rho = 1.0;
  double p = 1.0;
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
};

struct TimeConfig {
  double cfl = 0.5;
  /// Fixed step when > 0 (the last step before an output time is shortened).
  double dt = 0.0;
  double end = 1.0;
};

struct OutputConfig {
  double cadence = 0.01;
  std::vector<double> spectra;
  bool checkpoint = true;
};

struct OptimizeConfig {
  std::filesystem::path reference;
  std::vector<double> times;  // empty: three evenly spaced points over `window`
  double window = 0.5;
  int max_evals = 300;
  int restart_every = 30;
  double c_start = 1.25;
  std::vector<double> sigma_start;  // sigma_1..sigma_{N-1}; empty: 0.55 ... 0.55 0.75
  std::array<double, 2> c_bounds{0.1, 2.0};
  std::array<double, 2> sigma_bounds{0.1, 1.0};
  std::uint64_t seed = 1;
};

struct RunConfig {
  std::array<int, 3> cells{4, 4, 4};
  std::array<double, 3> lengths{2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
  int degree = 7;
  GasModel gas;
  FluxVariant flux = FluxVariant::l2roe;
  ModelConfig model;
  InitConfig init;
  TimeConfig time;
  OutputConfig output;
  OptimizeConfig optimize;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses the INI-style format (`[section]` headers, `key = value`).
/// `overrides` are `section.key=value` strings applied on top.
RunConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Default optimizer start for sigma_1..sigma_{N-1}: 0.55 everywhere except 0.75 last.
std::vector<double> default_sigma_start(int degree);

}  // namespace dgles
