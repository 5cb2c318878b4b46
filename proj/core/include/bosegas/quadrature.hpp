#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace bosegas {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  ///< Kronrod-Gauss difference summed over panels
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_panels = 4000;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on [a, b].
/// The panel with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Same as integrate() but never bisects across the given interior points
/// (discontinuities of f or of its derivative).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breaks, const QuadOptions& opts = {});

/// Non-adaptive G7K15 on `panels` equal-width subintervals of [a, b].
QuadResult integrate_fixed(const std::function<double(double)>& f, double a, double b,
                           std::size_t panels);

}  // namespace bosegas
