#include "burdenbias/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace burdenbias {

namespace {

// Orthonormal probabilists' Hermite values p_n(x), p_{n-1}(x) and sum of squares
// of p_0..p_{n-1}.
struct HermiteEval {
    double pn;
    double pn1;
    double sumsq;
};

HermiteEval hermite_orthonormal(int n, double x) {
    double pm1 = 0.0;
    double p = 1.0;
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        sumsq += p * p;
        const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm1) / std::sqrt(k + 1.0);
        pm1 = p;
        p = next;
    }
    return {p, pm1, sumsq};
}

double gl_panel(const std::function<double(double)>& f, double a, double b, const QuadratureRule& ref) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) acc += ref.weights[k] * f(mid + half * ref.nodes[k]);
    return acc * half;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 1.0;
        return rule;
    }
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = jacobi(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()(i);
        // Newton polish: p_n' = sqrt(n) p_{n-1}
        for (int it = 0; it < 8; ++it) {
            const auto h = hermite_orthonormal(n, x);
            const double step = h.pn / (std::sqrt(static_cast<double>(n)) * h.pn1);
            x -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / hermite_orthonormal(n, x).sumsq;
    }
    // symmetrize to remove round-off asymmetry
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double step = p0 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

std::vector<Interval> adaptive_partition(const std::vector<std::function<double(double)>>& integrands,
                                         double lo, double hi, int order, double rel_tol,
                                         double abs_floor, int max_depth) {
    if (!(hi > lo)) throw std::invalid_argument("adaptive_partition: empty interval");
    const QuadratureRule ref = gauss_legendre(order);

    // coarse totals set the scale for the relative tolerance
    std::vector<double> scale(integrands.size(), 0.0);
    constexpr int coarse = 16;
    for (std::size_t i = 0; i < integrands.size(); ++i) {
        double acc = 0.0;
        for (int p = 0; p < coarse; ++p) {
            const double a = lo + (hi - lo) * p / coarse;
            const double b = lo + (hi - lo) * (p + 1) / coarse;
            acc += std::abs(gl_panel(integrands[i], a, b, ref));
        }
        scale[i] = acc;
    }

    struct Pending {
        Interval iv;
        int depth;
    };
    std::vector<Pending> stack{{{lo, hi}, 0}};
    std::vector<Interval> accepted;
    while (!stack.empty()) {
        const Pending cur = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (cur.iv.lo + cur.iv.hi);
        bool ok = true;
        for (std::size_t i = 0; i < integrands.size() && ok; ++i) {
            const double whole = gl_panel(integrands[i], cur.iv.lo, cur.iv.hi, ref);
            const double halves = gl_panel(integrands[i], cur.iv.lo, mid, ref) +
                                  gl_panel(integrands[i], mid, cur.iv.hi, ref);
            ok = std::abs(whole - halves) <= rel_tol * scale[i] + abs_floor;
        }
        if (ok || cur.depth >= max_depth) {
            accepted.push_back(cur.iv);
        } else {
            stack.push_back({{mid, cur.iv.hi}, cur.depth + 1});
            stack.push_back({{cur.iv.lo, mid}, cur.depth + 1});
        }
    }
    std::sort(accepted.begin(), accepted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return accepted;
}

QuadratureRule composite_gauss_legendre(const std::vector<Interval>& panels, int order) {
    const QuadratureRule ref = gauss_legendre(order);
    QuadratureRule rule;
    rule.nodes.reserve(panels.size() * ref.size());
    rule.weights.reserve(panels.size() * ref.size());
    for (const auto& p : panels) {
        const double half = 0.5 * (p.hi - p.lo);
        const double mid = 0.5 * (p.hi + p.lo);
        for (std::size_t k = 0; k < ref.size(); ++k) {
            rule.nodes.push_back(mid + half * ref.nodes[k]);
            rule.weights.push_back(half * ref.weights[k]);
        }
    }
    return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi, double rel_tol, int order) {
    const auto panels = adaptive_partition({f}, lo, hi, order, rel_tol);
    return composite_gauss_legendre(panels, order).integrate(f);
}

}  // namespace burdenbias
