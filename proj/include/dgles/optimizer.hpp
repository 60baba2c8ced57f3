#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dgles {

/// Maps bounded coordinates to R: x_hat = ln((b_U - b_L) / (x - b_L) - 1).
/// Exact inverse of bound_unmap; decreasing in x. Throws ConfigError unless
/// b_L < x < b_U strictly.
std::vector<double> bound_map(std::span<const double> x, std::span<const double> lower, std::span<const double> upper);

/// x = (b_U - b_L) / (1 + exp(x_hat)) + b_L.
std::vector<double> bound_unmap(std::span<const double> x_hat, std::span<const double> lower,
                                std::span<const double> upper);

struct NelderMeadOptions {
  int max_evals = 300;
  /// Outer iterations between simplex re-initialisations (0 disables restarts).
  int restart_every = 30;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Initial simplex edge, as a fraction of each bound range.
  double initial_step = 0.05;
  /// Half-width of the uniform restart perturbation, as a fraction of each bound range.
  double restart_spread = 0.10;
  std::uint64_t seed = 1;
};

struct Evaluation {
  int eval = 0;
  int iteration = 0;
  int restart = 0;
  double f = 0.0;
  std::vector<double> x;  // bounded coordinates
};

struct NelderMeadResult {
  std::vector<double> x_best;
  double f_best = 0.0;
  std::vector<Evaluation> history;
  int iterations = 0;
  int restarts = 0;
};

using Objective = std::function<double(std::span<const double> x)>;

/// Downhill simplex in the mapped (unbounded) space with periodic randomized
/// restarts around the best point. Non-finite objective values count as +inf.
NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start, std::span<const double> lower,
                             std::span<const double> upper, const NelderMeadOptions& options);

}  // namespace dgles
