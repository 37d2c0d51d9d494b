#include "lcf/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "lcf/common.hpp"

namespace lcf::quadrature {

double Rule::weight_sum() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

namespace {

struct GaussCache {
  std::mutex mtx;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> rules;
};

GaussCache& cache() {
  static GaussCache c;
  return c;
}

void compute_gauss(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::fabs(z - z1) <= 1e-15) {
        // one polishing step
        double q0 = 1.0, q1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double q2 = q1;
          q1 = q0;
          q0 = ((2.0 * j + 1.0) * z * q1 - j * q2) / (j + 1.0);
        }
        pp = n * (z * q0 - q1) / (z * z - 1.0);
        z -= q0 / pp;
        break;
      }
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw NumericError("gauss_legendre: n must be >= 1");
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mtx);
  auto it = c.rules.find(n);
  if (it == c.rules.end()) {
    std::vector<double> x, w;
    compute_gauss(n, x, w);
    it = c.rules.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
  }
  nodes = it->second.first;
  weights = it->second.second;
}

Rule quad_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  Rule r;
  r.exactness = 2 * n - 1;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      r.points.emplace_back(x[i], x[j], 0.0);
      r.weights.push_back(w[i] * w[j]);
    }
  return r;
}

Rule hex_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  Rule r;
  r.exactness = 2 * n - 1;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        r.points.emplace_back(x[i], x[j], x[k]);
        r.weights.push_back(w[i] * w[j] * w[k]);
      }
  return r;
}

// Collapsed square -> triangle: (u,v) in [0,1]^2 maps to
// x = u(1-v), y = v with Jacobian (1-v). A monomial x^a y^b of total
// degree d pulls back to degree (a, a+b+1) <= (d, d+1), so n_u covering
// degree d and n_v covering d+1 give exactness d.
Rule triangle_rule(int degree) {
  const int nu = (degree + 2) / 2;      // 2*nu - 1 >= degree
  const int nv = (degree + 3) / 2;      // 2*nv - 1 >= degree + 1
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  Rule r;
  r.exactness = degree;
  for (int j = 0; j < nv; ++j) {
    const double v = 0.5 * (xv[j] + 1.0);
    for (int i = 0; i < nu; ++i) {
      const double u = 0.5 * (xu[i] + 1.0);
      r.points.emplace_back(u * (1.0 - v), v, 0.0);
      // 1/4 rescales both [-1,1] axes to [0,1].
      r.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - v));
    }
  }
  return r;
}

// Collapsed cube -> tetrahedron: x = a, y = b(1-a), z = c(1-a)(1-b),
// Jacobian (1-a)^2 (1-b). Degrees pull back to at most (d+2, d+1, d).
Rule tetrahedron_rule(int degree) {
  const int na = (degree + 4) / 2;
  const int nb = (degree + 3) / 2;
  const int nc = (degree + 2) / 2;
  std::vector<double> xa, wa, xb, wb, xc, wc;
  gauss_legendre(na, xa, wa);
  gauss_legendre(nb, xb, wb);
  gauss_legendre(nc, xc, wc);
  Rule r;
  r.exactness = degree;
  for (int k = 0; k < nc; ++k) {
    const double c = 0.5 * (xc[k] + 1.0);
    for (int j = 0; j < nb; ++j) {
      const double b = 0.5 * (xb[j] + 1.0);
      for (int i = 0; i < na; ++i) {
        const double a = 0.5 * (xa[i] + 1.0);
        r.points.emplace_back(a, b * (1.0 - a), c * (1.0 - a) * (1.0 - b));
        r.weights.push_back(0.125 * wa[i] * wb[j] * wc[k] *
                            (1.0 - a) * (1.0 - a) * (1.0 - b));
      }
    }
  }
  return r;
}

namespace {

double gauss_segment(const std::function<double(double)>& f, double a,
                     double b, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  KahanSum s;
  for (int i = 0; i < n; ++i) s.add(w[i] * f(mid + half * x[i]));
  return half * s.value();
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, double abs_floor, int depth, int max_depth) {
  const double coarse = gauss_segment(f, a, b, 7);
  const double fine = gauss_segment(f, a, b, 15);
  const double err = std::fabs(fine - coarse);
  if (!std::isfinite(fine))
    throw NumericError("adaptive_integrate: non-finite integrand on [" +
                       std::to_string(a) + ", " + std::to_string(b) + "]");
  if (err <= std::fmax(tol * std::fabs(fine), abs_floor) ||
      depth >= max_depth)
    return fine;
  const double mid = 0.5 * (a + b);
  return adapt(f, a, mid, tol, abs_floor, depth + 1, max_depth) +
         adapt(f, mid, b, tol, abs_floor, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_floor,
                          int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, rel_tol, abs_floor, 0, max_depth);
}

}  // namespace lcf::quadrature
