#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hgf/linalg.hpp"

namespace hgf {

/// Initial potential Phi with gradient (the initial slope field) and an
/// optional analytic Hessian.
///
/// The optional metadata is used by the 1-D tooling: `slope_bound` bounds
/// sup |grad Phi| (search radius of the Lax-Oleinik oracle) and
/// `support_radius` / `slope_mass` describe compactly supported slopes
/// (truncation-domain checks).
class PotentialFn {
 public:
  using ValueRule = std::function<double(const Vec&)>;
  using GradientRule = std::function<Vec(const Vec&)>;
  using HessianRule = std::function<Mat(const Vec&)>;

  PotentialFn(int dim, ValueRule value, GradientRule gradient, HessianRule hessian = {},
              std::string name = "custom");

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// Analytic Hessian when available, otherwise the symmetrized
  /// central-difference Hessian.
  Mat hessian(const Vec& x) const;
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

  /// Same potential multiplied by c.
  PotentialFn scaled(double c) const;

  std::optional<double> slope_bound;
  std::optional<double> support_radius;
  std::optional<double> slope_mass;

 private:
  int dim_;
  ValueRule value_;
  GradientRule gradient_;
  HessianRule hessian_;
  std::string name_;
};

/// Central-difference Hessian of phi at x built from the gradient rule,
/// symmetrized. `step` <= 0 selects a step scaled to |x|.
Mat fd_hessian(const PotentialFn& phi, const Vec& x, double step = 0.0);

}  // namespace hgf
