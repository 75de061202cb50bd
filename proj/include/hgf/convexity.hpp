#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hgf/grid.hpp"
#include "hgf/potential.hpp"

namespace hgf {

enum class Verdict { GloballySmooth, StrictlyConvexMargin, BlowUpExpected };

std::string_view to_string(Verdict v);

struct ConvexityOptions {
  double eig_tol = 1e-9;    ///< eigenvalues >= -eig_tol count as non-negative
  double delta_min = 1e-6;  ///< smallest margin reported as strictly convex
  /// Polish the worst sample by compass search so the minimum eigenvalue is
  /// not limited by the sampling resolution.
  bool refine_minimum = true;
};

/// Spectrum of the initial-data matrix over a sampled box.
struct ConvexityReport {
  Vec box_lo, box_hi;
  int samples_per_axis = 0;
  std::vector<Vec> sampled_points;
  std::vector<double> min_eigenvalue;  ///< per sampled point
  double global_min_eigenvalue = 0.0;
  Vec argmin;
  double mean_eigenvalue = 0.0;
  /// Certified margin: the global minimum when it reaches delta_min, else 0.
  double delta = 0.0;
  Verdict verdict = Verdict::GloballySmooth;
  std::optional<double> blowup_estimate;
  double eig_tol = 1e-9;
};

/// Initial-data matrix V0(x) for gradient data: the symmetric Hessian of phi.
Mat build_v0(const PotentialFn& phi, const Vec& x);

ConvexityReport existence_verdict(const PotentialFn& phi, const GridN& box, int samples,
                                  const ConvexityOptions& options = {});

/// First time det(I + t Hess phi) can vanish on the sampled set: 1 / mu for
/// a global minimum eigenvalue -mu < 0.
double blowup_time_estimate(const ConvexityReport& report);

}  // namespace hgf
