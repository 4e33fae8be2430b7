#pragma once

#include <cstddef>
#include <functional>

namespace tcsde {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // accumulated Richardson error estimate
    std::size_t evaluations = 0;
};

// Adaptive Simpson with interval bisection. The interval is first cut into
// `initial_panels` pieces so that narrow features are not skipped by the
// first error test. Throws QuadratureError when some panel fails to reach its
// share of `abs_tol` within `max_depth` bisections, or when the integrand is
// not finite at a node (the message names the node).
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-8, int max_depth = 48,
                                  int initial_panels = 8);

}  // namespace tcsde
