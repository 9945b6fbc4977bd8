#include "slstail/optimize.hpp"

#include "slstail/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace slstail {

namespace {

double finite_or_inf(double v)
{
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::vector<double> steps, NelderMeadOptions options)
{
    const std::size_t dim = x0.size();
    if (dim == 0 || steps.size() != dim) {
        throw UsageError("nelder_mead: dimension mismatch");
    }
    NelderMeadResult result;
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return finite_or_inf(f(x));
    };
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += steps[i];
    }
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    auto along = [&](double t, std::vector<double>& out) {
        // out = centroid + t * (centroid - worst)
        const auto& worst = simplex[order[dim]];
        for (std::size_t j = 0; j < dim; ++j) {
            out[j] = centroid[j] + t * (centroid[j] - worst[j]);
        }
    };

    while (result.evaluations < options.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const double best = values[order[0]];
        const double worst = values[order[dim]];

        double diameter = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                diameter = std::max(diameter, std::abs(simplex[order[i]][j] - simplex[order[0]][j]));
            }
        }
        if (std::isfinite(worst) && std::abs(worst - best) <= options.f_tolerance * (1.0 + std::abs(best)) &&
            diameter <= options.x_tolerance * (1.0 + std::abs(simplex[order[0]][0]))) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                centroid[j] += simplex[order[i]][j];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(dim);
        }

        along(1.0, trial);
        const double reflected = eval(trial);
        const double second_worst = values[order[dim - 1]];
        if (reflected < best) {
            along(2.0, trial2);
            const double expanded = eval(trial2);
            if (expanded < reflected) {
                simplex[order[dim]] = trial2;
                values[order[dim]] = expanded;
            } else {
                simplex[order[dim]] = trial;
                values[order[dim]] = reflected;
            }
            continue;
        }
        if (reflected < second_worst) {
            simplex[order[dim]] = trial;
            values[order[dim]] = reflected;
            continue;
        }
        const bool outside = reflected < worst;
        along(outside ? 0.5 : -0.5, trial2);
        const double contracted = eval(trial2);
        if (contracted < (outside ? reflected : worst)) {
            simplex[order[dim]] = trial2;
            values[order[dim]] = contracted;
            continue;
        }
        const auto& anchor = simplex[order[0]];
        for (std::size_t i = 1; i <= dim; ++i) {
            auto& v = simplex[order[i]];
            for (std::size_t j = 0; j < dim; ++j) {
                v[j] = anchor[j] + 0.5 * (v[j] - anchor[j]);
            }
            values[order[i]] = eval(v);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    result.value = *best_it;
    return result;
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance, std::size_t max_iterations)
{
    if (!(lo < hi)) {
        throw UsageError("golden_section_minimize: empty interval");
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = finite_or_inf(f(c));
    double fd = finite_or_inf(f(d));
    for (std::size_t it = 0; it < max_iterations && (b - a) > tolerance * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = finite_or_inf(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = finite_or_inf(f(d));
        }
    }
    return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

double integrate(const std::function<double(double)>& f, double a, double b, double relative_tolerance,
                 double* error_estimate)
{
    if (a == b) {
        if (error_estimate) {
            *error_estimate = 0.0;
        }
        return 0.0;
    }
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, relative_tolerance, &err);
    if (!std::isfinite(value)) {
        throw NumericError("quadrature produced a non-finite value");
    }
    if (error_estimate) {
        *error_estimate = err;
    }
    return value;
}

}  // namespace slstail
