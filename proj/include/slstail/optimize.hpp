#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace slstail {

struct NelderMeadOptions {
    std::size_t max_evaluations = 4000;
    double f_tolerance = 1e-11;  ///< spread of simplex values
    double x_tolerance = 1e-10;  ///< simplex diameter
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Minimizes `f` with the standard Nelder-Mead simplex (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). Non-finite objective values are
/// treated as +infinity. `steps` gives the initial simplex edge per coordinate.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::vector<double> steps, NelderMeadOptions options = {});

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search on [lo, hi] for a unimodal function.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance = 1e-10, std::size_t max_iterations = 200);

/// Adaptive Gauss-Kronrod (61-point) on a finite interval. Throws NumericError
/// when the result is not finite.
double integrate(const std::function<double(double)>& f, double a, double b, double relative_tolerance = 1e-12,
                 double* error_estimate = nullptr);

}  // namespace slstail
