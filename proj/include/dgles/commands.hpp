#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dgles/config.hpp"
#include "dgles/diagnostics.hpp"
#include "dgles/optimizer.hpp"
#include "dgles/simulation.hpp"

namespace dgles {

using LogFn = std::function<void(const std::string&)>;

RunResult cmd_run(const RunConfig& config, const std::filesystem::path& out_dir, const LogFn& log = {});

/// Optimizes (c, sigma_1..sigma_{N-1}) against config.optimize.reference.
/// Writes best_kernel.txt (preset format) and optimization_log.csv to out_dir.
NelderMeadResult cmd_optimize(const RunConfig& config, const std::filesystem::path& out_dir, const LogFn& log = {});

/// Spectrum of a checkpoint, written as spectrum_t<time>.csv into out_dir.
/// Compensated when eps > 0.
Spectrum cmd_spectra(const std::filesystem::path& checkpoint, const std::filesystem::path& out_dir, double eps = 0.0);

void write_optimization_log(const NelderMeadResult& result, const std::filesystem::path& path);

}  // namespace dgles
