#include "hgf/potential.hpp"

#include <cmath>
#include <utility>

#include "hgf/errors.hpp"

namespace hgf {

PotentialFn::PotentialFn(int dim, ValueRule value, GradientRule gradient, HessianRule hessian, std::string name)
    : dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      name_(std::move(name)) {
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("potential dimension must be in 1..3");
  if (!value_ || !gradient_) throw InvalidInput("potential needs value and gradient rules");
}

double PotentialFn::value(const Vec& x) const { return value_(x); }

Vec PotentialFn::gradient(const Vec& x) const { return gradient_(x); }

Mat PotentialFn::hessian(const Vec& x) const {
  if (hessian_) return hessian_(x);
  return fd_hessian(*this, x);
}

PotentialFn PotentialFn::scaled(double c) const {
  auto value = [v = value_, c](const Vec& x) { return c * v(x); };
  auto gradient = [g = gradient_, c](const Vec& x) { return c * g(x); };
  HessianRule hessian;
  if (hessian_) hessian = [h = hessian_, c](const Vec& x) { return c * h(x); };
  PotentialFn out(dim_, value, gradient, hessian, name_);
  const double a = std::abs(c);
  if (slope_bound) out.slope_bound = a * *slope_bound;
  out.support_radius = support_radius;
  if (slope_mass) out.slope_mass = a * *slope_mass;
  return out;
}

Mat fd_hessian(const PotentialFn& phi, const Vec& x, double step) {
  if (x.dim() != phi.dim()) throw InvalidInput("point dimension does not match potential");
  const int n = phi.dim();
  // Differencing the gradient: truncation ~ s^2, roundoff ~ eps / s.
  const double s = step > 0.0 ? step : 1e-5 * std::max(1.0, x.norm_inf());
  Mat h(n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += s;
    xm[j] -= s;
    const Vec gp = phi.gradient(xp);
    const Vec gm = phi.gradient(xm);
    const double width = xp[j] - xm[j];
    for (int i = 0; i < n; ++i) h(i, j) = (gp[i] - gm[i]) / width;
  }
  Mat sym = symmetrized(h);
  if (!sym.all_finite()) throw InvalidInput("potential Hessian is not finite");
  return sym;
}

}  // namespace hgf
