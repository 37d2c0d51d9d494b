#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lcf/quadrature.hpp"

using namespace lcf::quadrature;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// exact integral of x^a y^b over the unit triangle
double tri_exact(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

// exact integral of x^a y^b z^c over the unit tetrahedron
double tet_exact(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) /
         factorial(a + b + c + 3);
}

double monomial_1d(int a) { return a % 2 ? 0.0 : 2.0 / (a + 1); }

}  // namespace

TEST_CASE("weights sum to reference measures") {
  CHECK(quad_rule(4).weight_sum() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(hex_rule(2).weight_sum() == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(triangle_rule(8).weight_sum() ==
        doctest::Approx(0.5).epsilon(1e-13));
  CHECK(tetrahedron_rule(2).weight_sum() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(tetrahedron_rule(4).weight_sum() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("triangle rule exactness") {
  for (int degree : {1, 2, 4, 8}) {
    const Rule r = triangle_rule(degree);
    for (int a = 0; a + 0 <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < r.points.size(); ++i)
          sum += r.weights[i] * std::pow(r.points[i][0], a) *
                 std::pow(r.points[i][1], b);
        CHECK(sum == doctest::Approx(tri_exact(a, b)).epsilon(1e-12));
      }
  }
}

TEST_CASE("tetrahedron rule exactness") {
  for (int degree : {2, 4}) {
    const Rule r = tetrahedron_rule(degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) {
          double sum = 0.0;
          for (std::size_t i = 0; i < r.points.size(); ++i)
            sum += r.weights[i] * std::pow(r.points[i][0], a) *
                   std::pow(r.points[i][1], b) * std::pow(r.points[i][2], c);
          CHECK(sum == doctest::Approx(tet_exact(a, b, c)).epsilon(1e-12));
        }
  }
}

TEST_CASE("tensor rules are exact per axis") {
  const Rule q = quad_rule(4);  // degree 7 per axis
  for (int a = 0; a <= 7; ++a)
    for (int b = 0; b <= 7; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i)
        sum += q.weights[i] * std::pow(q.points[i][0], a) *
               std::pow(q.points[i][1], b);
      const double exact = monomial_1d(a) * monomial_1d(b);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("gauss nodes are symmetric and accurate") {
  std::vector<double> x, w;
  gauss_legendre(7, x, w);
  for (int i = 0; i < 7; ++i)
    CHECK(x[i] == doctest::Approx(-x[6 - i]).epsilon(1e-15));
  // degree-13 exactness for n = 7
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) sum += w[i] * std::pow(x[i], 12);
  CHECK(sum == doctest::Approx(2.0 / 13.0).epsilon(1e-13));
}

TEST_CASE("adaptive integrator") {
  const double got = adaptive_integrate(
      [](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  CHECK(got == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  // mildly oscillatory
  const double osc = adaptive_integrate(
      [](double x) { return std::sin(20.0 * x); }, 0.0, 1.0, 1e-11);
  CHECK(osc ==
        doctest::Approx((1.0 - std::cos(20.0)) / 20.0).epsilon(1e-10));

  CHECK(adaptive_integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}
