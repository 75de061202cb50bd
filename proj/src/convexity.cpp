#include "hgf/convexity.hpp"

#include <algorithm>
#include <cmath>

#include "hgf/errors.hpp"
#include "hgf/parallel.hpp"

namespace hgf {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::GloballySmooth:
      return "GloballySmooth";
    case Verdict::StrictlyConvexMargin:
      return "StrictlyConvexMargin";
    case Verdict::BlowUpExpected:
      return "BlowUpExpected";
  }
  return "unknown";
}

Mat build_v0(const PotentialFn& phi, const Vec& x) {
  if (x.dim() != phi.dim()) throw InvalidInput("point dimension does not match potential");
  Mat h = symmetrized(phi.hessian(x));
  if (!h.all_finite()) throw InvalidInput("V0 has non-finite entries");
  return h;
}

namespace {

double min_eigenvalue_at(const PotentialFn& phi, const Vec& x) { return symmetric_eigenvalues(build_v0(phi, x))[0]; }

// Compass search for a local minimum of the smallest eigenvalue, clamped to
// the box. Starts at one sample spacing and halves down to ~1e-10 of the box.
void refine(const PotentialFn& phi, const Vec& lo, const Vec& hi, int samples, Vec& x, double& value) {
  const int n = phi.dim();
  double step = 0.0, extent = 0.0;
  for (int a = 0; a < n; ++a) {
    step = std::max(step, (hi[a] - lo[a]) / (samples - 1));
    extent = std::max(extent, hi[a] - lo[a]);
  }
  while (step > 1e-10 * extent) {
    bool improved = false;
    for (int a = 0; a < n; ++a)
      for (double dir : {-1.0, 1.0}) {
        Vec y = x;
        y[a] = std::clamp(y[a] + dir * step, lo[a], hi[a]);
        const double fy = min_eigenvalue_at(phi, y);
        if (fy < value) {
          value = fy;
          x = y;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
}

}  // namespace

ConvexityReport existence_verdict(const PotentialFn& phi, const GridN& box, int samples,
                                  const ConvexityOptions& options) {
  if (samples < 16) throw ContractViolation("existence_verdict needs at least 16 samples per axis");
  if (box.dim() != phi.dim()) throw InvalidInput("sampling box dimension does not match potential");
  const int n = phi.dim();

  ConvexityReport r;
  r.box_lo = box.lo();
  r.box_hi = box.hi();
  r.samples_per_axis = samples;
  r.eig_tol = options.eig_tol;

  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(samples);
  r.sampled_points.resize(total, Vec(n));
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (int a = 0; a < n; ++a) {
      const auto k = static_cast<double>(rem % static_cast<std::size_t>(samples));
      rem /= static_cast<std::size_t>(samples);
      r.sampled_points[p][a] = box.lo(a) + k * (box.hi(a) - box.lo(a)) / (samples - 1);
    }
  }

  r.min_eigenvalue.assign(total, 0.0);
  std::vector<double> eig_sums(total, 0.0);
  parallel_for(total, [&](std::size_t p) {
    const Vec ev = symmetric_eigenvalues(build_v0(phi, r.sampled_points[p]));
    r.min_eigenvalue[p] = ev[0];
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += ev[i];
    eig_sums[p] = s;
  });

  // Fixed iteration order keeps the reduction deterministic.
  std::size_t worst = 0;
  double sum = 0.0;
  for (std::size_t p = 0; p < total; ++p) {
    if (r.min_eigenvalue[p] < r.min_eigenvalue[worst]) worst = p;
    sum += eig_sums[p];
  }
  r.mean_eigenvalue = sum / static_cast<double>(total * static_cast<std::size_t>(n));
  r.global_min_eigenvalue = r.min_eigenvalue[worst];
  r.argmin = r.sampled_points[worst];
  if (options.refine_minimum) refine(phi, box.lo(), box.hi(), samples, r.argmin, r.global_min_eigenvalue);

  const double lmin = r.global_min_eigenvalue;
  if (lmin >= options.delta_min) {
    r.verdict = Verdict::StrictlyConvexMargin;
    r.delta = lmin;
  } else if (lmin >= -options.eig_tol) {
    r.verdict = Verdict::GloballySmooth;
    r.delta = 0.0;
  } else {
    r.verdict = Verdict::BlowUpExpected;
    r.delta = 0.0;
    r.blowup_estimate = 1.0 / (-lmin);
  }
  return r;
}

double blowup_time_estimate(const ConvexityReport& report) {
  if (!(report.global_min_eigenvalue < -report.eig_tol))
    throw ContractViolation("blow-up estimate needs a negative minimum eigenvalue");
  return 1.0 / (-report.global_min_eigenvalue);
}

}  // namespace hgf
