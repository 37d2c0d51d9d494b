#include "lcf/rootfind.hpp"

#include <cmath>
#include <string>

#include "lcf/common.hpp"

namespace lcf {

double newton_bisect(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double scale, const RootOptions& opt) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw SolverError("newton_bisect: bracket does not contain a sign change");

  // Orient so f(lo) < 0 < f(hi).
  if (flo > 0.0) std::swap(lo, hi);

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  const double tol = opt.rel_tol * std::fmax(std::fabs(scale), 1e-300);

  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::fabs(fx) <= tol) return x;
    if (fx < 0.0)
      lo = x;
    else
      hi = x;

    const double d = df(x);
    double x_next = x - fx / d;
    bool accepted = std::isfinite(x_next) &&
                    (x_next - lo) * (x_next - hi) < 0.0;
    double f_next = accepted ? f(x_next) : 0.0;
    // Require Newton to at least halve the residual, otherwise bisect:
    // guarantees the bracket shrinks geometrically on steep residuals.
    if (!accepted || std::fabs(f_next) > 0.5 * std::fabs(fx)) {
      x_next = 0.5 * (lo + hi);
      f_next = f(x_next);
    }
    if (x_next == x) return x;  // interval exhausted at double precision
    x = x_next;
    fx = f_next;
  }
  if (std::fabs(fx) <= tol) return x;
  throw SolverError("newton_bisect: no convergence after " +
                    std::to_string(opt.max_iter) +
                    " iterations, residual " + std::to_string(fx));
}

}  // namespace lcf
