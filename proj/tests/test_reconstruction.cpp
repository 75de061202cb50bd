#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hgf/builtins.hpp"
#include "hgf/errors.hpp"
#include "hgf/fields.hpp"
#include "hgf/reconstruction.hpp"

using namespace hgf;
using std::numbers::pi;

namespace {

// Exact Hamilton-Jacobi solution along characteristics:
// U(t, x) = Phi(alpha) + t |grad Phi(alpha)|^2 / 2 with alpha the preimage of x.
double exact_height(const CharMap& m, const Vec& x) {
  const Vec alpha = invert(m, x).alpha;
  return m.phi().value(alpha) + 0.5 * m.t() * m.phi().gradient(alpha).norm_sq();
}

}  // namespace

TEST_CASE("paraboloid heights: U = |x|^2 / (2 (1 + t)) including the anchor") {
  const GridN g = GridN::box(Vec{0.3, 0.3}, Vec{2.3, 2.3}, 16);
  const CharMap base = CharMap::certified(paraboloid(2), 0.0, g);
  const FlowSource flow = characteristic_flow(base, g);
  for (double t : {0.5, 2.0, 10.0}) {
    const GraphSample u = evolve_potential(paraboloid(2), flow, t);
    double err = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p)
      err = std::max(err, std::abs(u.heights[p] - g.node(p).norm_sq() / (2.0 * (1.0 + t))));
    CHECK(err <= 1e-6);
    CHECK(u.anchor_value() == doctest::Approx(0.09 / (1.0 + t)).epsilon(1e-9));
  }
}

TEST_CASE("zero slope keeps the heights constant") {
  const PotentialFn c = polynomial(2, parse_monomials("1.5:0,0", 2));
  const GridN g = GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 8);
  const GraphSample u = evolve_potential(c, characteristic_flow(CharMap::certified(c, 0.0, g), g), 7.0);
  for (double h : u.heights) CHECK(h == 1.5);
}

TEST_CASE("reconstructed heights solve the Hamilton-Jacobi equation for log_cosh data") {
  const PotentialFn phi = log_cosh(2, 1.0, 0.7);
  const GridN g = GridN::box(Vec{-1.5, -1.0}, Vec{1.5, 2.0}, 48);
  const CharMap base = CharMap::certified(phi, 0.0, g);
  PotentialEvolution evo(phi, characteristic_flow(base, g));
  const std::vector<double> times{0.25, 1.0, 3.0};
  evo.advance(times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const GraphSample& u = evo.snapshots()[k];
    const CharMap m = base.at_time(times[k]);
    double err = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p) err = std::max(err, std::abs(u.heights[p] - exact_height(m, g.node(p))));
    CHECK(err <= 1e-5);
    // The anchor series alone is an RK4 solution of the gauge ODE.
    CHECK(std::abs(evo.anchor_series()[k] - exact_height(m, g.node(u.anchor_node))) <= 1e-8);
  }
  const double earlier[] = {2.0};
  CHECK_THROWS_AS(evo.advance(earlier), ContractViolation);
}

TEST_CASE("integrate_gauge checks its step and direction") {
  auto v = [](double, const Vec&) { return Vec{1.0}; };
  CHECK(integrate_gauge(v, Vec{0.0}, 0.0, 2.0, 3.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(integrate_gauge(v, Vec{0.0}, 0.0, 0.0, 1.0, 0.02), ContractViolation);
  CHECK_THROWS_AS(integrate_gauge(v, Vec{0.0}, 1.0, 0.0, 0.5), ContractViolation);
}

TEST_CASE("reconstruct_curve recovers -cos from exact sine averages") {
  const int n = 256;
  const GridN g = GridN::line(0.0, 2.0 * pi, n, true);
  const EntropyState1D s = EntropyState1D::from_potential(neg_cos(1), g, Boundary::Periodic);
  const GraphSample f = reconstruct_curve(s, -1.0);  // anchor at x = 0
  REQUIRE(f.heights.size() == static_cast<std::size_t>(n + 1));
  CHECK(f.anchor_node == 0u);
  const double h = s.cell_width();
  double err = 0.0;
  for (std::size_t j = 0; j < f.heights.size(); ++j)
    err = std::max(err, std::abs(f.heights[j] + std::cos(f.grid.coord(0, static_cast<int>(j)))));
  CHECK(err <= h * h);

  // Curve slopes match the field at second order.
  const GradientFieldSample df = fd_gradient(f);
  double slope_err = 0.0;
  for (std::size_t j = 1; j + 1 < f.heights.size(); ++j)
    slope_err = std::max(slope_err, std::abs(df.values[j][0] - std::sin(f.grid.coord(0, static_cast<int>(j)))));
  CHECK(slope_err <= h * h);
}

TEST_CASE("constant slope gives a straight line") {
  const EntropyState1D s(GridN::line(-2.0, 2.0, 40, true), 0.0, std::vector<double>(40, 0.3), Boundary::Periodic);
  const GraphSample f = reconstruct_curve(s, 5.0);
  for (std::size_t j = 0; j < f.heights.size(); ++j)
    CHECK(f.heights[j] == doctest::Approx(5.0 + 0.3 * f.grid.coord(0, static_cast<int>(j))).epsilon(1e-14));
  CHECK(straight_line_deviation(s, 0.3) <= 1e-14);
}

TEST_CASE("after the shock the curve has a single corner at pi") {
  const int n = 512;
  const EntropyState1D s = advance(
      EntropyState1D::from_potential(neg_cos(1), GridN::line(0.0, 2.0 * pi, n, true), Boundary::Periodic), 2.0);
  const auto u = s.cell_avgs();
  // A corner is a drop in the slope larger than 0.2 across a single cell pair.
  int corners = 0;
  std::size_t where = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    if (u[i] - u[i + 1] > 0.2) {
      ++corners;
      where = i + 1;
    }
  CHECK(corners == 1);
  CHECK(std::abs(s.grid().coord(0, static_cast<int>(where)) - pi) <= 2.0 * s.cell_width());
}

TEST_CASE("linear data has no curvature beyond rounding") {
  const PotentialFn lin = polynomial(2, parse_monomials("0.5:1,0; -0.25:0,1", 2));
  const CharMap m = CharMap::certified(lin, 0.0, GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 8));
  const std::vector<double> cps{1.0, 2.0, 4.0, 8.0, 16.0};
  const FlatteningReport r = flattening_report(m, Vec{-1.0, -1.0}, Vec{1.0, 1.0}, cps, {.cells = 24});
  for (std::size_t k = 0; k < cps.size(); ++k) {
    CHECK(r.sup_d2[k] <= 10.0 * r.d2_noise[k]);
    CHECK(r.sup_d3[k] <= 10.0 * r.d3_noise[k]);
    CHECK(r.tube_nodes[k] > 0u);
  }
}

TEST_CASE("paraboloid curvature decays like (1 + t)^-1") {
  const CharMap m = CharMap::certified(paraboloid(2), 0.0, GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 8));
  const std::vector<double> cps{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const FlatteningReport r = flattening_report(m, Vec{-1.0, -1.0}, Vec{1.0, 1.0}, cps, {.cells = 32});
  REQUIRE(r.fitted_slopes);
  CHECK(r.fitted_slopes->first == doctest::Approx(-1.0).epsilon(0.01));
  for (std::size_t k = 0; k < cps.size(); ++k)
    CHECK(r.sup_d2[k] == doctest::Approx(1.0 / (1.0 + cps[k])).epsilon(1e-6));
}

TEST_CASE("log_cosh third derivatives match the characteristic formula") {
  // Separable data: along each axis U_xxx = p3(a) / (1 + t p2(a))^3 with p2, p3
  // the second and third derivatives of w log cosh(a / w), so the sup over the
  // tube is a 1-D maximisation over the base interval.
  const double w = 0.7;
  auto exact_sup = [w](double t) {
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double a = -1.0 + 2.0 * i / 20000.0;
      const double s2 = 1.0 / (std::cosh(a / w) * std::cosh(a / w));
      const double p2 = s2 / w, p3 = -2.0 * s2 * std::tanh(a / w) / (w * w);
      best = std::max(best, std::abs(p3) / std::pow(1.0 + t * p2, 3));
    }
    return best;
  };
  const CharMap m = CharMap::certified(log_cosh(2, 1.0, w), 0.0, GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 8));
  const std::vector<double> cps{1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const FlatteningReport r = flattening_report(m, Vec{-1.0, -1.0}, Vec{1.0, 1.0}, cps, {.cells = 48});
  for (std::size_t k = 0; k < cps.size(); ++k) {
    CHECK(r.sup_d3[k] == doctest::Approx(exact_sup(cps[k])).epsilon(0.05));
    CHECK(r.sup_d3[k] > 10.0 * r.d3_noise[k]);
  }
}

TEST_CASE("flattening argument checks") {
  const CharMap m = CharMap::certified(paraboloid(1), 0.0, GridN::line(-1.0, 1.0, 8));
  const std::vector<double> few{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(flattening_report(m, Vec{-1.0}, Vec{1.0}, few), ContractViolation);
  CHECK_FALSE(fit_window_ok(few));
  const std::vector<double> narrow{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK_FALSE(fit_window_ok(narrow));
  const std::vector<double> wide{1.0, 2.0, 4.0, 8.0, 19.0};
  CHECK(fit_window_ok(wide));
}

TEST_CASE("1-D curve deviation decays for sine data") {
  const EntropyState1D s =
      EntropyState1D::from_potential(neg_cos(1), GridN::line(0.0, 2.0 * pi, 512, true), Boundary::Periodic);
  const std::vector<double> cps{5.0, 10.0, 20.0, 50.0, 100.0};
  const FlatteningReport r = flattening_report_1d(s, cps);
  REQUIRE(r.straight_line_slope);
  CHECK(std::abs(*r.straight_line_slope) <= 1e-14);
  CHECK(r.initial_deviation == doctest::Approx(2.0).epsilon(1e-3));
  for (std::size_t k = 1; k < r.deviations.size(); ++k) CHECK(r.deviations[k] < r.deviations[k - 1]);
  REQUIRE(r.deviation_slope);
  CHECK(*r.deviation_slope == doctest::Approx(-1.0).epsilon(0.15));
}
