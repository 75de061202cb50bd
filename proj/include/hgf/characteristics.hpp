#pragma once

#include <optional>
#include <vector>

#include "hgf/convexity.hpp"
#include "hgf/grid.hpp"
#include "hgf/potential.hpp"

namespace hgf {

/// Characteristic map alpha -> alpha + t grad Phi(alpha) at a fixed time.
///
/// Forward evaluation and the Jacobian work for any potential. Inversion
/// needs a convexity certificate whose verdict is not BlowUpExpected.
class CharMap {
 public:
  CharMap(PotentialFn phi, double t);
  CharMap(PotentialFn phi, double t, ConvexityReport certificate);

  /// Runs existence_verdict on `box` and attaches the result.
  static CharMap certified(PotentialFn phi, double t, const GridN& box, int samples = 17);

  const PotentialFn& phi() const { return phi_; }
  double t() const { return t_; }
  const std::optional<ConvexityReport>& certificate() const { return certificate_; }
  bool invertible() const;

  CharMap at_time(double t) const;

 private:
  PotentialFn phi_;
  double t_;
  std::optional<ConvexityReport> certificate_;
};

struct NewtonOptions {
  double tol = 1e-12;  ///< absolute, on the sup-norm of the map residual
  int max_iter = 50;
};

struct CharJacobian {
  Mat matrix;
  double det;
};

struct Preimage {
  Vec alpha;
  int iterations = 0;
  double residual = 0.0;
};

Vec forward_map(const CharMap& map, const Vec& alpha);

/// I + t Hess Phi(alpha) and its determinant.
CharJacobian jacobian(const CharMap& map, const Vec& alpha);

/// Newton solve of alpha + t grad Phi(alpha) = x. Throws NotCertified,
/// SingularMap or NoConvergence.
Preimage invert(const CharMap& map, const Vec& x, const NewtonOptions& options = {},
                const std::optional<Vec>& guess = std::nullopt);

/// v(t, x) = grad Phi(alpha(t, x)).
Vec evaluate_solution(const CharMap& map, const Vec& x, const NewtonOptions& options = {});

/// Preimages of every grid node; Newton is warm-started along each axis-0 row.
std::vector<Vec> sample_preimages(const CharMap& map, const GridN& grid, const NewtonOptions& options = {});

GradientFieldSample sample_field(const CharMap& map, const GridN& grid, const NewtonOptions& options = {});

/// Forward images of a fixed compact box of alpha values.
struct CharacteristicTube {
  Vec base_lo, base_hi;
  double t = 0.0;
  std::vector<Vec> base_points;
  std::vector<Vec> image_points;

  bool base_contains(const Vec& alpha, double tol = 1e-12) const;
  /// Bounding box of the image points.
  std::pair<Vec, Vec> image_bounds() const;
};

CharacteristicTube characteristic_tube(const CharMap& map, const Vec& base_lo, const Vec& base_hi,
                                       int samples_per_axis);

}  // namespace hgf
