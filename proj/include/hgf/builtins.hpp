#pragma once

#include <string>
#include <vector>

#include "hgf/potential.hpp"

namespace hgf {

/// Phi = c |x|^2 / 2, slope c x.
PotentialFn paraboloid(int dim, double scale = 1.0);

/// Phi = sum_i (-A cos x_i + m x_i), slope A sin x_i + m.
PotentialFn neg_cos(int dim, double amplitude = 1.0, double offset = 0.0);

/// Phi = c w sum_i log cosh(x_i / w), slope c tanh(x_i / w).
PotentialFn log_cosh(int dim, double scale = 1.0, double width = 1.0);

/// 1-D compactly supported slope v0 = A (1 - (x/w)^2)^2 on |x| < w, with
/// Phi(-w) = 0.
PotentialFn bump(double amplitude = 1.0, double width = 1.0);

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;  ///< one per axis
};

/// Phi = sum of monomials.
PotentialFn polynomial(int dim, std::vector<Monomial> terms);

/// Parses "c:e1,e2,...;c:e1,..." into monomials of the given dimension.
std::vector<Monomial> parse_monomials(const std::string& text, int dim);

struct BuiltinInfo {
  std::string name;
  std::string description;
};

std::vector<BuiltinInfo> builtin_catalogue();

}  // namespace hgf
