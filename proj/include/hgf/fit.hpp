#pragma once

#include <optional>
#include <span>

namespace hgf {

/// Least-squares slope of log y against log(1 + t). Points with y <= 0 are
/// dropped; returns nullopt when fewer than two usable points remain or the
/// times do not differ.
std::optional<double> loglog_slope(std::span<const double> t, std::span<const double> y);

}  // namespace hgf
