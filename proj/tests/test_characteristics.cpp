#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hgf/builtins.hpp"
#include "hgf/characteristics.hpp"
#include "hgf/errors.hpp"
#include "hgf/fields.hpp"
#include "hgf/fit.hpp"

using namespace hgf;
using std::numbers::pi;

namespace {

// (|x|^4) / 4 + |x|^2 / 2 in two variables: Hessian >= I everywhere.
PotentialFn radial_quartic() {
  return polynomial(2, parse_monomials("0.25:4,0; 0.5:2,2; 0.25:0,4; 0.5:2,0; 0.5:0,2", 2));
}

GridN unit_box(int dim, double r, int cells) {
  Vec lo(dim), hi(dim);
  for (int a = 0; a < dim; ++a) {
    lo[a] = -r;
    hi[a] = r;
  }
  return GridN::box(lo, hi, cells);
}

}  // namespace

TEST_CASE("forward map and Jacobian examples") {
  const CharMap m(paraboloid(2), 3.0);
  const Vec y = forward_map(m, Vec{1.0, -2.0});
  CHECK(y[0] == doctest::Approx(4.0));
  CHECK(y[1] == doctest::Approx(-8.0));
  const CharJacobian j = jacobian(m, Vec{0.3, 0.3});
  CHECK(j.matrix(0, 0) == doctest::Approx(4.0));
  CHECK(j.matrix(0, 1) == doctest::Approx(0.0));
  CHECK(j.det == doctest::Approx(16.0));

  const CharMap nc(neg_cos(1), 2.0);
  CHECK(jacobian(nc, Vec{pi}).det == doctest::Approx(-1.0));
}

TEST_CASE("invert paraboloid: v = x / (1 + t)") {
  const CharMap m = CharMap::certified(paraboloid(3), 4.0, unit_box(3, 1.0, 4));
  const Vec x{5.0, -2.5, 1.0};
  const Preimage p = invert(m, x);
  CHECK(p.alpha[0] == doctest::Approx(1.0));
  CHECK(p.alpha[1] == doctest::Approx(-0.5));
  CHECK(p.residual <= 1e-12);
  const Vec v = evaluate_solution(m, x);
  for (int a = 0; a < 3; ++a) CHECK(v[a] == doctest::Approx(x[a] / 5.0).epsilon(1e-13));
}

TEST_CASE("inversion refuses uncertified or blow-up data") {
  CHECK_THROWS_AS(invert(CharMap(paraboloid(1), 1.0), Vec{0.5}), NotCertified);
  const CharMap nc = CharMap::certified(neg_cos(1), 0.5, GridN::line(0.0, 2.0 * pi, 32));
  CHECK_FALSE(nc.invertible());
  CHECK_THROWS_AS(invert(nc, Vec{1.0}), NotCertified);
  CHECK_THROWS_AS(CharMap(paraboloid(1), -1.0), InvalidInput);
}

TEST_CASE("round trip: forward_map(invert(x)) = x on convex data") {
  const PotentialFn phi = radial_quartic();
  const GridN box = unit_box(2, 2.0, 8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double t : {0.0, 0.5, 1.0, 10.0, 100.0}) {
    const CharMap m = CharMap::certified(phi, t, box);
    for (int k = 0; k < 50; ++k) {
      const Vec x{u(rng) * (1.0 + t), u(rng) * (1.0 + t)};
      const Preimage p = invert(m, x);
      const Vec back = forward_map(m, p.alpha);
      CHECK((back - x).norm_inf() <= 1e-10 * std::max(1.0, x.norm_inf()));
    }
  }
}

TEST_CASE("det of the characteristic Jacobian stays >= 1 for convex data") {
  const PotentialFn phi = log_cosh(2, 1.0, 0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (double t : {0.0, 0.1, 1.0, 10.0, 100.0})
    for (int k = 0; k < 100; ++k) CHECK(jacobian(CharMap(phi, t), Vec{u(rng), u(rng)}).det >= 1.0 - 1e-12);
}

TEST_CASE("sample_field example: v = x / 5 at t = 4") {
  const GridN g = unit_box(2, 2.0, 8);
  const CharMap m = CharMap::certified(paraboloid(2), 4.0, g);
  const GradientFieldSample f = sample_field(m, g);
  double err = 0.0;
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const Vec x = g.node(p);
    err = std::max(err, (f.values[p] - 0.2 * x).norm_inf());
  }
  CHECK(err <= 1e-14);
  CHECK(f.t == 4.0);
}

TEST_CASE("the sampled field Jacobian decays like (1 + t)^-1") {
  const GridN g = unit_box(2, 2.0, 16);
  const PotentialFn phi = paraboloid(2);
  std::vector<double> ts{1.0, 3.0, 7.0, 15.0}, sup;
  for (double t : ts) {
    const auto jac = fd_jacobian(sample_field(CharMap::certified(phi, t, g), g));
    double s = 0.0;
    for (const Mat& j : jac) s = std::max(s, j.max_abs());
    sup.push_back(s);
  }
  const auto slope = loglog_slope(ts, sup);
  REQUIRE(slope);
  CHECK(*slope == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("log_cosh solution matches high-precision characteristic values") {
  // Reference values solved independently at 40-digit precision.
  const CharMap base = CharMap::certified(log_cosh(1), 0.0, GridN::line(-2.0, 2.0, 16));
  CHECK(evaluate_solution(base.at_time(0.5), Vec{0.7})[0] == doctest::Approx(0.44445707514934985413).epsilon(1e-12));
  CHECK(evaluate_solution(base.at_time(2.0), Vec{1.3})[0] == doctest::Approx(0.42382643568673132371).epsilon(1e-12));
  CHECK(evaluate_solution(base.at_time(10.0), Vec{-4.0})[0] ==
        doctest::Approx(-0.36207303469736059611).epsilon(1e-12));
}

TEST_CASE("the characteristic solution satisfies v_t + v v_x = 0") {
  const CharMap base = CharMap::certified(log_cosh(1, 1.0, 0.8), 0.0, GridN::line(-2.0, 2.0, 16));
  const double h = 1e-4;
  auto v = [&](double t, double x) { return evaluate_solution(base.at_time(t), Vec{x})[0]; };
  for (double t : {0.3, 1.0, 4.0, 20.0})
    for (double x : {-3.0, -0.4, 0.0, 0.9, 5.0}) {
      const double vt = (v(t + h, x) - v(t - h, x)) / (2 * h);
      const double vx = (v(t, x + h) - v(t, x - h)) / (2 * h);
      CHECK(std::abs(vt + v(t, x) * vx) <= 1e-6);
    }
}

TEST_CASE("characteristic tube images the base box") {
  const CharMap m(paraboloid(2), 1.0);
  const CharacteristicTube tube = characteristic_tube(m, Vec{-1.0, 0.0}, Vec{1.0, 0.5}, 5);
  CHECK(tube.base_points.size() == 25u);
  const auto [lo, hi] = tube.image_bounds();
  CHECK(lo[0] == doctest::Approx(-2.0));
  CHECK(hi[0] == doctest::Approx(2.0));
  CHECK(lo[1] == doctest::Approx(0.0));
  CHECK(hi[1] == doctest::Approx(1.0));
  CHECK(tube.base_contains(Vec{0.0, 0.25}));
  CHECK_FALSE(tube.base_contains(Vec{0.0, 0.6}));
  CHECK_THROWS_AS(characteristic_tube(m, Vec{-1.0, 0.0}, Vec{1.0, 0.5}, 1), ContractViolation);
}
