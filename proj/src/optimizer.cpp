#include "dgles/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

namespace {

void check_bounds(std::span<const double> lower, std::span<const double> upper, std::size_t n) {
  if (lower.size() != n || upper.size() != n) throw ConfigError("bound vectors must match the parameter count");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] < upper[i]))
      throw ConfigError("lower bound must be below upper bound for parameter " + std::to_string(i));
}

}  // namespace

std::vector<double> bound_map(std::span<const double> x, std::span<const double> lower, std::span<const double> upper) {
  check_bounds(lower, upper, x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > lower[i] && x[i] < upper[i]))
      throw ConfigError("parameter " + std::to_string(i) + " = " + std::to_string(x[i]) + " is not strictly inside (" +
                        std::to_string(lower[i]) + ", " + std::to_string(upper[i]) + ")");
    out[i] = std::log((upper[i] - lower[i]) / (x[i] - lower[i]) - 1.0);
  }
  return out;
}

std::vector<double> bound_unmap(std::span<const double> x_hat, std::span<const double> lower,
                                std::span<const double> upper) {
  check_bounds(lower, upper, x_hat.size());
  std::vector<double> out(x_hat.size());
  for (std::size_t i = 0; i < x_hat.size(); ++i)
    out[i] = (upper[i] - lower[i]) / (1.0 + std::exp(x_hat[i])) + lower[i];
  return out;
}

namespace {

struct BudgetExhausted {};

class SimplexDriver {
public:
  SimplexDriver(const Objective& objective, std::span<const double> lower, std::span<const double> upper,
                const NelderMeadOptions& options)
      : objective_(objective), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()),
        options_(options) {}

  double evaluate(const std::vector<double>& x_hat) {
    if (static_cast<int>(result_.history.size()) >= options_.max_evals) throw BudgetExhausted{};
    auto x = bound_unmap(x_hat, lower_, upper_);
    double f = objective_(x);
    if (!std::isfinite(f)) f = std::numeric_limits<double>::infinity();
    result_.history.push_back({static_cast<int>(result_.history.size()), iteration_, restart_, f, x});
    if (result_.x_best.empty() || f < result_.f_best) {
      result_.f_best = f;
      result_.x_best = x;
      best_hat_ = x_hat;
    }
    return f;
  }

  NelderMeadResult run(std::span<const double> start) {
    const std::size_t n = start.size();
    result_.f_best = std::numeric_limits<double>::infinity();
    try {
      // Initial simplex in bounded space, stepping inwards when a step would leave the box.
      std::vector<double> x0(start.begin(), start.end());
      vertices_.push_back(bound_map(x0, lower_, upper_));
      values_.push_back(evaluate(vertices_.back()));
      for (std::size_t i = 0; i < n; ++i) {
        auto x = x0;
        const double step = options_.initial_step * (upper_[i] - lower_[i]);
        x[i] = (x0[i] + step < upper_[i]) ? x0[i] + step : x0[i] - step;
        vertices_.push_back(bound_map(x, lower_, upper_));
        values_.push_back(evaluate(vertices_.back()));
      }
      for (;;) {
        if (options_.restart_every > 0 && iteration_ > 0 && iteration_ % options_.restart_every == 0 &&
            iteration_ != last_restart_iteration_)
          restart(n);
        iterate(n);
        ++iteration_;
      }
    } catch (const BudgetExhausted&) {
    }
    result_.iterations = iteration_;
    result_.restarts = restart_;
    return result_;
  }

private:
  void order() {
    std::vector<std::size_t> idx(vertices_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
    std::vector<std::vector<double>> v;
    std::vector<double> f;
    for (auto i : idx) {
      v.push_back(vertices_[i]);
      f.push_back(values_[i]);
    }
    vertices_ = std::move(v);
    values_ = std::move(f);
  }

  void restart(std::size_t n) {
    last_restart_iteration_ = iteration_;
    ++restart_;
    std::uniform_real_distribution<double> jitter(-options_.restart_spread, options_.restart_spread);
    const auto best = bound_unmap(best_hat_, lower_, upper_);
    vertices_.assign(1, best_hat_);
    values_.assign(1, result_.f_best);
    for (std::size_t v = 0; v < n; ++v) {
      auto x = best;
      for (std::size_t i = 0; i < n; ++i) {
        const double range = upper_[i] - lower_[i];
        const double margin = 1e-6 * range;
        x[i] = std::clamp(best[i] + jitter(rng_) * range, lower_[i] + margin, upper_[i] - margin);
      }
      vertices_.push_back(bound_map(x, lower_, upper_));
      values_.push_back(evaluate(vertices_.back()));
    }
  }

  std::vector<double> along(const std::vector<double>& c, const std::vector<double>& x, double t) const {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (x[i] - c[i]);
    return out;
  }

  void iterate(std::size_t n) {
    order();
    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += vertices_[v][i] / static_cast<double>(n);
    const auto& worst = vertices_[n];

    const auto xr = along(centroid, worst, -options_.reflection);
    const double fr = evaluate(xr);
    if (fr < values_[0]) {
      const auto xe = along(centroid, xr, options_.expansion);
      const double fe = evaluate(xe);
      if (fe < fr) replace_worst(n, xe, fe);
      else replace_worst(n, xr, fr);
      return;
    }
    if (fr < values_[n - 1]) {
      replace_worst(n, xr, fr);
      return;
    }
    if (fr < values_[n]) {
      const auto xc = along(centroid, xr, options_.contraction);
      const double fc = evaluate(xc);
      if (fc <= fr) {
        replace_worst(n, xc, fc);
        return;
      }
    } else {
      const auto xc = along(centroid, worst, options_.contraction);
      const double fc = evaluate(xc);
      if (fc < values_[n]) {
        replace_worst(n, xc, fc);
        return;
      }
    }
    for (std::size_t v = 1; v <= n; ++v) {
      vertices_[v] = along(vertices_[0], vertices_[v], options_.shrink);
      values_[v] = evaluate(vertices_[v]);
    }
  }

  void replace_worst(std::size_t n, const std::vector<double>& x, double f) {
    vertices_[n] = x;
    values_[n] = f;
  }

  const Objective& objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  NelderMeadOptions options_;
  std::mt19937_64 rng_{options_.seed};
  std::vector<std::vector<double>> vertices_;
  std::vector<double> values_;
  std::vector<double> best_hat_;
  NelderMeadResult result_;
  int iteration_ = 0;
  int restart_ = 0;
  int last_restart_iteration_ = -1;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start, std::span<const double> lower,
                             std::span<const double> upper, const NelderMeadOptions& options) {
  if (start.empty()) throw ConfigError("optimizer needs at least one parameter");
  if (options.max_evals < 1) throw ConfigError("optimize.max_evals must be >= 1");
  check_bounds(lower, upper, start.size());
  bound_map(start, lower, upper);  // validates that the start point is interior
  SimplexDriver driver(objective, lower, upper, options);
  return driver.run(start);
}

}  // namespace dgles
