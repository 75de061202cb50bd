#pragma once

// Finite-difference stencils, quadrature and path integration on GridN.

#include <cstddef>
#include <optional>
#include <vector>

#include "hgf/grid.hpp"

namespace hgf {

/// Gradient of sampled heights: second-order central differences in the
/// interior, second-order one-sided at non-periodic boundaries, wrapped on
/// periodic axes.
GradientFieldSample fd_gradient(const GraphSample& graph);

/// Per-node Jacobian J(i, j) = d v_i / d x_j using the fd_gradient stencil.
std::vector<Mat> fd_jacobian(const GradientFieldSample& field);

enum class MeanMode { Periodic, L1 };

/// Mean value of a 1-D slope field. Periodic mode integrates over the
/// period cell; L1 mode checks that the field has decayed at both edges of
/// the truncated domain and returns 0.
double mean_value(const GradientFieldSample& field, MeanMode mode, double edge_tol = 1e-6);

struct CurlResidual {
  double max_abs = 0.0;      ///< max over nodes and pairs i < j of |d_j v_i - d_i v_j|
  std::size_t node = 0;      ///< where the maximum occurs
  double difference_scale = 0.0;  ///< max node-to-node difference quotient of the field
};

CurlResidual curl_residual(const GradientFieldSample& field);

/// Default integrability tolerance: `factor` times the largest node-to-node
/// difference quotient of the field.
double default_curl_tol(const CurlResidual& residual, double factor = 1e-6);

/// Node nearest the origin, the default anchor for reconstructed heights.
std::size_t origin_anchor(const GridN& grid);

struct LineIntegrateOptions {
  std::optional<std::size_t> anchor_node;  ///< default: origin_anchor
  std::optional<double> curl_tol;          ///< absolute; default: default_curl_tol
};

/// Heights whose gradient is `field`, integrated with a fourth-order
/// composite rule along the axis-ordered path from the anchor node (axis 0
/// first, then axis 1, then axis 2). Throws NonIntegrableField when the
/// discrete curl exceeds the tolerance.
GraphSample line_integrate(const GradientFieldSample& field, double anchor_value,
                           const LineIntegrateOptions& options = {});

}  // namespace hgf
