#include "tripletctl/box_lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 50;

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
};

double masked_dot(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<char>& free) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (free[i]) acc += a[i] * b[i];
  }
  return acc;
}

}  // namespace

const char* to_string(ExitReason reason) {
  switch (reason) {
    case ExitReason::kGradientTolerance: return "gradient-tolerance";
    case ExitReason::kMaxIterations: return "max-iterations";
    case ExitReason::kStalled: return "stalled";
  }
  return "unknown";
}

BoxLbfgsResult minimize_box(const Objective& f, std::vector<double> x0, std::span<const double> lower,
                            std::span<const double> upper, const BoxLbfgsOptions& options) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw ValidationError("bound vectors must match the parameter count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i])) throw ValidationError("lower bound exceeds upper bound");
  }
  auto project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], lower[i], upper[i]);
  };

  BoxLbfgsResult result;
  std::vector<double> x = std::move(x0);
  project(x);
  std::vector<double> g(n);
  double fx = f(x, g);
  ++result.evaluations;

  std::deque<CurvaturePair> memory;
  std::vector<char> free(n, 1);
  std::vector<double> d(n), x_new(n), g_new(n), q(n);
  std::vector<double> alpha_hist;
  int stalled_for = 0;

  auto projected_gradient_norm = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m = std::max(m, std::abs(std::clamp(x[i] - g[i], lower[i], upper[i]) - x[i]));
    }
    return m;
  };

  result.reason = ExitReason::kMaxIterations;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (projected_gradient_norm() < options.gradient_tolerance) {
      result.reason = ExitReason::kGradientTolerance;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const bool pinned_low = x[i] <= lower[i] && g[i] > 0.0;
      const bool pinned_high = x[i] >= upper[i] && g[i] < 0.0;
      free[i] = !(pinned_low || pinned_high);
    }

    // Two-loop recursion on the free subspace.
    for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
    alpha_hist.assign(memory.size(), 0.0);
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& p = memory[m];
      const double sy = masked_dot(p.s, p.y, free);
      if (sy <= 0.0) continue;
      alpha_hist[m] = masked_dot(p.s, q, free) / sy;
      for (std::size_t i = 0; i < n; ++i) {
        if (free[i]) q[i] -= alpha_hist[m] * p.y[i];
      }
    }
    double gamma = 1.0;
    if (!memory.empty()) {
      const auto& p = memory.back();
      const double yy = masked_dot(p.y, p.y, free);
      const double sy = masked_dot(p.s, p.y, free);
      if (yy > 0.0 && sy > 0.0) gamma = sy / yy;
    }
    for (std::size_t i = 0; i < n; ++i) q[i] *= gamma;
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& p = memory[m];
      const double sy = masked_dot(p.s, p.y, free);
      if (sy <= 0.0) continue;
      const double beta = masked_dot(p.y, q, free) / sy;
      for (std::size_t i = 0; i < n; ++i) {
        if (free[i]) q[i] += (alpha_hist[m] - beta) * p.s[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -q[i] : 0.0;

    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += g[i] * d[i];
    double step = 1.0;
    if (memory.empty() || !(slope < 0.0)) {
      memory.clear();
      double gmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = free[i] ? -g[i] : 0.0;
        gmax = std::max(gmax, std::abs(d[i]));
      }
      step = gmax > 0.0 ? 1.0 / gmax : 1.0;
    }

    // Armijo backtracking along the projection arc.
    bool accepted = false;
    double f_new = fx;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      project(x_new);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (x_new[i] - x[i]);
      if (decrease >= 0.0) {
        step *= 0.5;
        continue;
      }
      f_new = f(x_new, g_new);
      ++result.evaluations;
      if (f_new <= fx + kArmijo * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      result.reason = ExitReason::kStalled;
      break;
    }

    CurvaturePair pair{std::vector<double>(n), std::vector<double>(n)};
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - x[i];
      pair.y[i] = g_new[i] - g[i];
      sy += pair.s[i] * pair.y[i];
      ss += pair.s[i] * pair.s[i];
      yy += pair.y[i] * pair.y[i];
    }
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }

    const double improvement = fx - f_new;
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;

    stalled_for = improvement <= options.stall_tolerance * (1.0 + std::abs(fx)) ? stalled_for + 1 : 0;
    if (stalled_for >= options.stall_iterations) {
      ++iter;
      result.reason = ExitReason::kStalled;
      break;
    }
  }

  result.iterations = iter;
  result.projected_gradient_norm = projected_gradient_norm();
  result.value = fx;
  result.x = std::move(x);
  return result;
}

}  // namespace tripletctl
