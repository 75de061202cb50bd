#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hgf/builtins.hpp"
#include "hgf/errors.hpp"
#include "hgf/fields.hpp"
#include "hgf/grid.hpp"
#include "hgf/potential.hpp"

using namespace hgf;
using std::numbers::pi;

namespace {

GraphSample sample_heights(const GridN& g, double t, const std::function<double(const Vec&)>& f) {
  std::vector<double> h(g.node_count());
  for (std::size_t p = 0; p < g.node_count(); ++p) h[p] = f(g.node(p));
  return GraphSample(g, t, std::move(h), origin_anchor(g));
}

GradientFieldSample sample_slopes(const GridN& g, double t, const std::function<Vec(const Vec&)>& v) {
  std::vector<Vec> vals(g.node_count());
  for (std::size_t p = 0; p < g.node_count(); ++p) vals[p] = v(g.node(p));
  return GradientFieldSample(g, t, std::move(vals));
}

double max_gradient_error(const GradientFieldSample& f, const std::function<Vec(const Vec&)>& exact) {
  double e = 0.0;
  for (std::size_t p = 0; p < f.grid.node_count(); ++p) e = std::max(e, (f.values[p] - exact(f.grid.node(p))).norm_inf());
  return e;
}

}  // namespace

TEST_CASE("GridN validates its invariants") {
  CHECK_THROWS_AS(GridN::line(1.0, 1.0, 8), InvalidInput);
  CHECK_THROWS_AS(GridN::line(0.0, 1.0, 3), InvalidInput);
  CHECK_THROWS_AS(GridN::line(0.0, INFINITY, 8), InvalidInput);
  const GridN g = GridN::line(0.0, 1.0, 8);
  CHECK(g.nodes(0) == 9);
  CHECK(GridN::line(0.0, 1.0, 8, true).nodes(0) == 8);
}

TEST_CASE("GridN index and multi-index are inverse, axis 0 fastest") {
  const GridN g(3, Vec{0.0, 0.0, 0.0}, Vec{1.0, 2.0, 3.0}, {4, 5, 6});
  CHECK(g.node_count() == 5u * 6u * 7u);
  CHECK(g.stride(0) == 1u);
  CHECK(g.stride(1) == 5u);
  for (std::size_t p = 0; p < g.node_count(); p += 7) CHECK(g.index(g.multi_index(p)) == p);
  const Vec x = g.node(g.index({1, 2, 3}));
  CHECK(x[0] == doctest::Approx(0.25));
  CHECK(x[1] == doctest::Approx(0.8));
  CHECK(x[2] == doctest::Approx(1.5));
}

TEST_CASE("sample types reject non-finite entries and shape mismatches") {
  const GridN g = GridN::line(0.0, 1.0, 4);
  CHECK_THROWS_AS(GradientFieldSample(g, 0.0, std::vector<Vec>(3, Vec{0.0})), InvalidInput);
  CHECK_THROWS_AS(GradientFieldSample(g, 0.0, std::vector<Vec>(5, Vec{NAN})), InvalidInput);
  CHECK_THROWS_AS(GraphSample(g, 0.0, std::vector<double>(5, 0.0), 9), InvalidInput);
}

TEST_CASE("fd_gradient examples") {
  const GridN g = GridN::line(-1.0, 1.0, 256);
  const auto half_sq = sample_heights(g, 0.0, [](const Vec& x) { return 0.5 * x[0] * x[0]; });
  CHECK(max_gradient_error(fd_gradient(half_sq), [](const Vec& x) { return x; }) <= 1e-4);

  const auto flat = sample_heights(g, 0.0, [](const Vec&) { return 3.25; });
  CHECK(max_gradient_error(fd_gradient(flat), [](const Vec&) { return Vec{0.0}; }) == 0.0);

  std::vector<double> bad(g.node_count(), 0.0);
  bad[3] = NAN;
  CHECK_THROWS_AS(fd_gradient(GraphSample(g, 0.0, bad, 0)), InvalidInput);
}

TEST_CASE("fd_gradient of -cos x on a periodic grid converges at second order") {
  // Richardson study: the error ratio under refinement approaches 4.
  double prev = 0.0;
  for (int n : {64, 128, 256, 512}) {
    const GridN g = GridN::line(0.0, 2.0 * pi, n, true);
    const auto f = sample_heights(g, 0.0, [](const Vec& x) { return -std::cos(x[0]); });
    const double e = max_gradient_error(fd_gradient(f), [](const Vec& x) { return Vec{std::sin(x[0])}; });
    const double h = g.spacing(0);
    CHECK(e <= h * h / 6.0 * 1.001);
    if (prev > 0.0) CHECK(prev / e == doctest::Approx(4.0).epsilon(0.01));
    prev = e;
  }
}

TEST_CASE("fd_hessian examples") {
  const Mat id = fd_hessian(paraboloid(3), Vec{0.3, -0.2, 0.7});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(id(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8);

  const PotentialFn cross(
      2, [](const Vec& x) { return x[0] * x[1]; }, [](const Vec& x) { return Vec{x[1], x[0]}; });
  const Mat c = cross.hessian(Vec{0.4, 1.1});
  CHECK(std::abs(c(0, 1) - 1.0) <= 1e-6);
  CHECK(std::abs(c(0, 0)) <= 1e-6);
  CHECK(std::abs(c(1, 1)) <= 1e-6);

  const PotentialFn nc = neg_cos(2);
  const Mat h = fd_hessian(nc, Vec{0.0, 0.0});
  CHECK(std::abs(h(0, 0) - 1.0) <= 1e-6);
  CHECK(std::abs(h(1, 1) - 1.0) <= 1e-6);
}

TEST_CASE("fd_hessian is bitwise symmetric for a non-symmetric difference pattern") {
  const PotentialFn skewish(
      3, [](const Vec& x) { return std::exp(x[0]) * std::sin(x[1] * x[2]); },
      [](const Vec& x) {
        const double e = std::exp(x[0]);
        return Vec{e * std::sin(x[1] * x[2]), e * x[2] * std::cos(x[1] * x[2]), e * x[1] * std::cos(x[1] * x[2])};
      });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Mat h = fd_hessian(skewish, Vec{u(rng), u(rng), u(rng)});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(h(i, j) == h(j, i));
  }
}

TEST_CASE("gradient rules agree with finite differences of the value rule") {
  const PotentialFn pots[] = {paraboloid(2, 1.5), neg_cos(2, 1.0, 0.3), log_cosh(2, 2.0, 0.5),
                              polynomial(2, parse_monomials("1:4,0; 0.5:1,1; -2:0,3", 2))};
  for (const auto& phi : pots) {
    const Vec x{0.37, -0.61};
    const double h = 1e-5;
    const Vec g = phi.gradient(x);
    for (int a = 0; a < 2; ++a) {
      Vec xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      CHECK(std::abs((phi.value(xp) - phi.value(xm)) / (2 * h) - g[a]) <= 1e-8);
    }
  }
  const PotentialFn b = bump(1.0, 0.2);
  for (double x : {-0.19, -0.05, 0.0, 0.1, 0.15}) {
    const double h = 1e-6;
    CHECK(std::abs((b.value(Vec{x + h}) - b.value(Vec{x - h})) / (2 * h) - b.gradient(Vec{x})[0]) <= 1e-8);
  }
}

TEST_CASE("mean_value examples") {
  const GridN g = GridN::line(0.0, 2.0 * pi, 256, true);
  const auto sine = sample_slopes(g, 0.0, [](const Vec& x) { return Vec{std::sin(x[0])}; });
  CHECK(std::abs(mean_value(sine, MeanMode::Periodic)) <= 1e-12);
  const auto c = sample_slopes(g, 0.0, [](const Vec&) { return Vec{0.75}; });
  CHECK(mean_value(c, MeanMode::Periodic) == 0.75);
  const auto off = sample_slopes(g, 0.0, [](const Vec& x) { return Vec{std::sin(x[0]) + 0.3}; });
  CHECK(std::abs(mean_value(off, MeanMode::Periodic) - 0.3) <= 1e-12);
  const auto trig = sample_slopes(g, 0.0, [](const Vec& x) {
    return Vec{1.25 + std::cos(3 * x[0]) - 0.5 * std::sin(7 * x[0]) + 0.2 * std::cos(40 * x[0])};
  });
  CHECK(std::abs(mean_value(trig, MeanMode::Periodic) - 1.25) <= 1.25e-13);
}

TEST_CASE("mean_value in L1 mode checks decay at the domain edges") {
  const GridN g = GridN::line(-10.0, 10.0, 400);
  const auto bumpy = sample_slopes(g, 0.0, [](const Vec& x) { return Vec{std::exp(-x[0] * x[0])}; });
  CHECK(mean_value(bumpy, MeanMode::L1) == 0.0);
  const auto wide = sample_slopes(g, 0.0, [](const Vec& x) { return Vec{std::exp(-x[0] * x[0] / 50.0)}; });
  CHECK_THROWS_AS(mean_value(wide, MeanMode::L1), DomainTooSmall);
  CHECK_THROWS_AS(mean_value(bumpy, MeanMode::Periodic), ContractViolation);
}

TEST_CASE("line_integrate examples") {
  const GridN g1 = GridN::line(-1.0, 1.0, 64);
  const auto v = sample_slopes(g1, 0.0, [](const Vec& x) { return x; });
  const GraphSample f = line_integrate(v, 0.0);
  for (std::size_t p = 0; p < g1.node_count(); ++p) {
    const double x = g1.node(p)[0];
    CHECK(std::abs(f.heights[p] - 0.5 * x * x) <= 1e-4);
  }

  const GridN g2 = GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 32);
  const auto zero = sample_slopes(g2, 0.0, [](const Vec&) { return Vec{0.0, 0.0}; });
  for (double y : line_integrate(zero, -2.5).heights) CHECK(y == -2.5);

  const auto ex = sample_slopes(g2, 1.0, [](const Vec& x) { return 0.5 * x; });
  const GraphSample u = line_integrate(ex, 0.0);
  double err = 0.0;
  for (std::size_t p = 0; p < g2.node_count(); ++p) err = std::max(err, std::abs(u.heights[p] - 0.25 * g2.node(p).norm_sq()));
  CHECK(err <= 1e-4);
  CHECK(u.anchor_value() == 0.0);
}

TEST_CASE("line_integrate rejects a rotational field and reports the residual") {
  const GridN g = GridN::box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}, 16);
  const auto rot = sample_slopes(g, 0.0, [](const Vec& x) { return Vec{-x[1], x[0]}; });
  try {
    line_integrate(rot, 0.0);
    FAIL("expected NonIntegrableField");
  } catch (const NonIntegrableField& e) {
    CHECK(e.max_residual() == doctest::Approx(2.0));
    CHECK(e.tolerance() < e.max_residual());
  }
}

TEST_CASE("property: fd_gradient inverts line_integrate on quadratic fields") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3;
    Mat a(n);
    Vec b(n);
    for (int i = 0; i < n; ++i) {
      b[i] = u(rng);
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
    }
    const GridN g = GridN::box(Vec::filled(n, -1.0), Vec::filled(n, 1.5), n == 3 ? 12 : 24);
    const auto v = sample_slopes(g, 0.0, [&](const Vec& x) { return a * x + b; });
    const GradientFieldSample back = fd_gradient(line_integrate(v, u(rng)));
    double err = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p) err = std::max(err, (back.values[p] - v.values[p]).norm_inf());
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("property: curl of fd_gradient output is at rounding level") {
  const GridN g = GridN::box(Vec{-1.0, -1.0, -1.0}, Vec{1.0, 1.0, 1.0}, 16);
  const auto f = sample_heights(g, 0.0, [](const Vec& x) { return std::sin(2 * x[0]) * std::exp(x[1]) + x[2] * x[0] * x[1]; });
  const GradientFieldSample v = fd_gradient(f);
  const CurlResidual r = curl_residual(v);
  CHECK(r.max_abs <= 1e-10 * r.difference_scale);
}
