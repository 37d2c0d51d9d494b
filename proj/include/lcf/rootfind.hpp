#pragma once

#include <functional>

namespace lcf {

struct RootOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

// Safeguarded Newton iteration on a bracket [lo, hi] that is known to
// contain a root of f. Newton steps that leave the bracket fall back to
// bisection, so convergence is guaranteed for continuous monotone
// residuals. `scale` sets the magnitude against which the residual is
// judged converged.
double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double scale, const RootOptions& opt = {});

}  // namespace lcf
