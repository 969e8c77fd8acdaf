#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace burdenbias {

/// A set of abscissae and weights. Rules returned by the distribution helpers
/// carry probability weights (they sum to one).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
        return acc;
    }
};

/// Gauss-Hermite rule for the standard normal weight, weights sum to 1.
/// Nodes come from the Golub-Welsch eigenproblem of the probabilists' Hermite recurrence.
QuadratureRule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
QuadratureRule gauss_legendre(int n);

struct Interval {
    double lo;
    double hi;
};

/// Splits [lo, hi] into panels until an order-point Gauss-Legendre estimate of
/// every integrand agrees with the estimate from the two half panels to within
/// rel_tol relative to the integrand's total (plus abs_floor).
std::vector<Interval> adaptive_partition(const std::vector<std::function<double(double)>>& integrands,
                                         double lo, double hi, int order, double rel_tol,
                                         double abs_floor = 1e-300, int max_depth = 40);

/// Composite Gauss-Legendre rule on the given panels (plain length weights).
QuadratureRule composite_gauss_legendre(const std::vector<Interval>& panels, int order);

/// Adaptive composite Gauss-Legendre integral of f over [lo, hi].
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol = 1e-10, int order = 20);

}  // namespace burdenbias
