#include "hgf/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include "hgf/errors.hpp"
#include "hgf/parallel.hpp"

namespace hgf {

CharMap::CharMap(PotentialFn phi, double t) : phi_(std::move(phi)), t_(t) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("characteristic map time must be finite and >= 0");
}

CharMap::CharMap(PotentialFn phi, double t, ConvexityReport certificate) : CharMap(std::move(phi), t) {
  certificate_ = std::move(certificate);
}

CharMap CharMap::certified(PotentialFn phi, double t, const GridN& box, int samples) {
  ConvexityReport report = existence_verdict(phi, box, samples);
  return CharMap(std::move(phi), t, std::move(report));
}

bool CharMap::invertible() const { return certificate_ && certificate_->verdict != Verdict::BlowUpExpected; }

CharMap CharMap::at_time(double t) const {
  CharMap m(phi_, t);
  m.certificate_ = certificate_;
  return m;
}

Vec forward_map(const CharMap& map, const Vec& alpha) {
  const Vec g = map.phi().gradient(alpha);
  if (!g.all_finite()) throw InvalidInput("potential gradient is not finite");
  return alpha + map.t() * g;
}

CharJacobian jacobian(const CharMap& map, const Vec& alpha) {
  Mat j = Mat::identity(alpha.dim()) + map.t() * symmetrized(map.phi().hessian(alpha));
  return {j, determinant(j)};
}

Preimage invert(const CharMap& map, const Vec& x, const NewtonOptions& options, const std::optional<Vec>& guess) {
  if (!map.invertible())
    throw NotCertified("characteristic inversion needs data certified convex (no BlowUpExpected verdict)");
  if (x.dim() != map.phi().dim()) throw InvalidInput("point dimension does not match potential");
  const double t = map.t();
  if (t == 0.0) return {x, 0, 0.0};

  Vec alpha = x;
  if (guess) {
    alpha = *guess;
  } else {
    const double denom = 1.0 + t * map.certificate()->mean_eigenvalue;
    if (denom > 0.0 && std::isfinite(denom)) alpha = (1.0 / denom) * x;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto residual = [&](const Vec& a, Vec& g) {
    const Vec grad = map.phi().gradient(a);
    g = a + t * grad - x;
    // Absolute tolerance, floored at the rounding level of the residual itself.
    const double floor = 4.0 * eps * (x.norm_inf() + a.norm_inf() + t * grad.norm_inf());
    return std::pair{g.norm_inf(), std::max(options.tol, floor)};
  };

  Vec g(x.dim());
  auto [r, tol] = residual(alpha, g);
  for (int it = 0;; ++it) {
    if (!std::isfinite(r)) throw NoConvergence(r, it);
    if (r <= tol) return {alpha, it, r};
    if (it == options.max_iter) throw NoConvergence(r, it);

    const CharJacobian jac = jacobian(map, alpha);
    const auto step = solve(jac.matrix, -1.0 * g);
    if (!step || !(std::abs(jac.det) > 1e-14)) throw SingularMap("characteristic Jacobian is singular during inversion");

    // Backtracking keeps the residual monotone when far from the root.
    double s = 1.0;
    Vec trial = alpha, gt(x.dim());
    double rt = 0.0, tt = 0.0;
    for (;;) {
      trial = alpha + s * *step;
      std::tie(rt, tt) = residual(trial, gt);
      if (rt < r || s < 1.0 / 1024.0) break;
      s *= 0.5;
    }
    alpha = trial;
    g = gt;
    r = rt;
    tol = tt;
  }
}

Vec evaluate_solution(const CharMap& map, const Vec& x, const NewtonOptions& options) {
  return map.phi().gradient(invert(map, x, options).alpha);
}

std::vector<Vec> sample_preimages(const CharMap& map, const GridN& grid, const NewtonOptions& options) {
  if (grid.dim() != map.phi().dim()) throw InvalidInput("grid dimension does not match potential");
  const auto row_len = static_cast<std::size_t>(grid.nodes(0));
  const std::size_t rows = grid.node_count() / row_len;
  std::vector<Vec> alphas(grid.node_count(), Vec(grid.dim()));
  parallel_for(rows, [&](std::size_t row) {
    std::optional<Vec> warm;
    for (std::size_t i = 0; i < row_len; ++i) {
      const std::size_t p = row * row_len + i;
      const Preimage pre = invert(map, grid.node(p), options, warm);
      alphas[p] = pre.alpha;
      warm = pre.alpha;
    }
  });
  return alphas;
}

GradientFieldSample sample_field(const CharMap& map, const GridN& grid, const NewtonOptions& options) {
  std::vector<Vec> alphas = sample_preimages(map, grid, options);
  for (Vec& a : alphas) a = map.phi().gradient(a);
  return GradientFieldSample(grid, map.t(), std::move(alphas));
}

bool CharacteristicTube::base_contains(const Vec& alpha, double tol) const {
  for (int a = 0; a < alpha.dim(); ++a) {
    const double pad = tol * std::max(1.0, base_hi[a] - base_lo[a]);
    if (alpha[a] < base_lo[a] - pad || alpha[a] > base_hi[a] + pad) return false;
  }
  return true;
}

std::pair<Vec, Vec> CharacteristicTube::image_bounds() const {
  Vec lo = image_points.front(), hi = image_points.front();
  for (const Vec& x : image_points)
    for (int a = 0; a < x.dim(); ++a) {
      lo[a] = std::min(lo[a], x[a]);
      hi[a] = std::max(hi[a], x[a]);
    }
  return {lo, hi};
}

CharacteristicTube characteristic_tube(const CharMap& map, const Vec& base_lo, const Vec& base_hi,
                                       int samples_per_axis) {
  if (samples_per_axis < 2) throw ContractViolation("tube sampling needs at least 2 samples per axis");
  const int n = base_lo.dim();
  CharacteristicTube tube;
  tube.base_lo = base_lo;
  tube.base_hi = base_hi;
  tube.t = map.t();
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(samples_per_axis);
  tube.base_points.reserve(total);
  tube.image_points.reserve(total);
  for (std::size_t p = 0; p < total; ++p) {
    Vec alpha(n);
    std::size_t rem = p;
    for (int a = 0; a < n; ++a) {
      const auto k = static_cast<double>(rem % static_cast<std::size_t>(samples_per_axis));
      rem /= static_cast<std::size_t>(samples_per_axis);
      alpha[a] = base_lo[a] + k * (base_hi[a] - base_lo[a]) / (samples_per_axis - 1);
    }
    tube.base_points.push_back(alpha);
    tube.image_points.push_back(forward_map(map, alpha));
  }
  return tube;
}

}  // namespace hgf
