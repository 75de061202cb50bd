#include "hgf/fit.hpp"

#include <cmath>
#include <vector>

#include "hgf/errors.hpp"

namespace hgf {

std::optional<double> loglog_slope(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw InvalidInput("loglog_slope needs equally long series");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i]) || !(t[i] > -1.0)) continue;
    lx.push_back(std::log1p(t[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  return sxy / sxx;
}

}  // namespace hgf
