#pragma once
// Test-only reference computations, independent of the library's quadrature
// and distribution code.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

inline double normal_pdf(double x, double mu, double sd) {
    const double z = (x - mu) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

inline double normal_cdf(double x, double mu, double sd) {
    return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0)));
}

inline double t_pdf(double x, double df) {
    const double c = std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)) / std::sqrt(df * std::numbers::pi);
    return c * std::pow(1.0 + x * x / df, -0.5 * (df + 1.0));
}

/// CDF of Student t by Simpson integration from 0 (symmetry).
inline double t_cdf(double x, double df) {
    const double half = simpson([df](double u) { return t_pdf(u, df); }, 0.0, std::abs(x), 20000);
    return x >= 0 ? 0.5 + half : 0.5 - half;
}

template <class F>
double bisect(F f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Exposure probability by explicit 2x2 Bayes enumeration: carriers have risk
/// odds K/(1-K) * OR, non-carriers K.
inline double exposure_bayes(bool cases, double f, double K, double gamma) {
    const double risk_carrier = expit(logit(K) + gamma);
    const double risk_noncarrier = K;
    const double joint_carrier = f * (cases ? risk_carrier : 1.0 - risk_carrier);
    const double joint_noncarrier = (1.0 - f) * (cases ? risk_noncarrier : 1.0 - risk_noncarrier);
    return joint_carrier / (joint_carrier + joint_noncarrier);
}

}  // namespace oracle
