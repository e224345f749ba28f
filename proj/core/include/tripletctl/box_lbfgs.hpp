#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tripletctl/errors.hpp"

namespace tripletctl {

enum class ExitReason { kGradientTolerance, kMaxIterations, kStalled };

const char* to_string(ExitReason reason);

struct BoxLbfgsOptions {
  int max_iterations = 2000;
  // Infinity norm of the projected gradient x - P(x - g).
  double gradient_tolerance = 1e-8;
  int memory = 10;
  // Stop after this many consecutive iterations that decrease f by less than
  // stall_tolerance * (1 + |f|).
  int stall_iterations = 25;
  double stall_tolerance = 1e-15;
};

struct BoxLbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  ExitReason reason = ExitReason::kMaxIterations;
};

// Writes the gradient into `grad` and returns the objective value.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Minimizes f subject to lower <= x <= upper (infinite bounds allowed) with a
// projected limited-memory BFGS method: variables held at a bound by the
// gradient are frozen, the two-loop recursion acts on the free subspace, and
// an Armijo backtracking search runs along the projection arc.
BoxLbfgsResult minimize_box(const Objective& f, std::vector<double> x0, std::span<const double> lower,
                            std::span<const double> upper, const BoxLbfgsOptions& options = {});

}  // namespace tripletctl
