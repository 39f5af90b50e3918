#pragma once

#include <functional>

namespace srled {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    int evaluations = 0;
    int intervals = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 2000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Throws
/// QuadratureNoConvergence when the interval budget runs out first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                                    const QuadratureOptions& options = {});

/// Integral over the whole real line of an even function decaying at least as
/// fast as 1/w^2, via w = scale * tan(t) on [0, pi/2].
QuadratureResult integrate_even_real_line(const std::function<double(double)>& fn, double scale,
                                          const QuadratureOptions& options = {});

}  // namespace srled
