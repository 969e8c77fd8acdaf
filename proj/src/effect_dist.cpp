#include "burdenbias/effect_dist.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace burdenbias {

namespace {

using boost::math::normal_distribution;
using boost::math::students_t_distribution;

}  // namespace

EffectDistribution::EffectDistribution(std::variant<Gaussian, TruncatedScaledT> law) : law_(law) {}

EffectDistribution EffectDistribution::gaussian(double mu, double tau) {
    if (!std::isfinite(mu)) throw std::invalid_argument("gaussian: mu must be finite");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("gaussian: tau must be finite and >= 0");
    EffectDistribution d(Gaussian{mu, tau});
    d.moments_ = {mu, tau};
    return d;
}

EffectDistribution EffectDistribution::truncated_t(double df, double scale, double bound, double location) {
    if (!(df > 0.0) || !std::isfinite(df)) throw std::invalid_argument("truncated_t: df must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("truncated_t: scale must be positive");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw std::invalid_argument("truncated_t: bound must be positive");
    if (!std::isfinite(location)) throw std::invalid_argument("truncated_t: location must be finite");
    EffectDistribution d(TruncatedScaledT{df, scale, bound, location});
    d.cache_truncation();
    return d;
}

void EffectDistribution::cache_truncation() {
    const auto& t = std::get<TruncatedScaledT>(law_);
    const students_t_distribution<double> st(t.df);
    t_cdf_lo_ = boost::math::cdf(st, -t.bound / t.scale);
    t_mass_ = boost::math::cdf(st, t.bound / t.scale) - t_cdf_lo_;
    // the truncation window is symmetric about the location, so the mean is the location
    const QuadratureRule rule = discretize();
    const double second = rule.integrate([&](double x) { return (x - t.location) * (x - t.location); });
    moments_ = {t.location, std::sqrt(second)};
}

std::pair<double, double> EffectDistribution::support() const {
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return {g.mu, g.mu};
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    const auto& t = as_truncated_t();
    return {t.location - t.bound, t.location + t.bound};
}

double EffectDistribution::pdf(double gamma) const {
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return gamma == g.mu ? std::numeric_limits<double>::infinity() : 0.0;
        return boost::math::pdf(normal_distribution<double>(g.mu, g.tau), gamma);
    }
    const auto& t = as_truncated_t();
    if (gamma < t.location - t.bound || gamma > t.location + t.bound) return 0.0;
    const students_t_distribution<double> st(t.df);
    return boost::math::pdf(st, (gamma - t.location) / t.scale) / (t.scale * t_mass_);
}

double EffectDistribution::cdf(double gamma) const {
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return gamma >= g.mu ? 1.0 : 0.0;
        return boost::math::cdf(normal_distribution<double>(g.mu, g.tau), gamma);
    }
    const auto& t = as_truncated_t();
    if (gamma <= t.location - t.bound) return 0.0;
    if (gamma >= t.location + t.bound) return 1.0;
    const students_t_distribution<double> st(t.df);
    const double v = (boost::math::cdf(st, (gamma - t.location) / t.scale) - t_cdf_lo_) / t_mass_;
    return std::clamp(v, 0.0, 1.0);
}

double EffectDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return g.mu;
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return boost::math::quantile(normal_distribution<double>(g.mu, g.tau), p);
    }
    const auto& t = as_truncated_t();
    if (p == 0.0) return t.location - t.bound;
    if (p == 1.0) return t.location + t.bound;
    const students_t_distribution<double> st(t.df);
    const double x = t.location + t.scale * boost::math::quantile(st, t_cdf_lo_ + p * t_mass_);
    return std::clamp(x, t.location - t.bound, t.location + t.bound);
}

double EffectDistribution::sample(Rng& rng) const {
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return g.mu;
        return std::normal_distribution<double>(g.mu, g.tau)(rng);
    }
    return quantile(uniform_open(rng));
}

QuadratureRule EffectDistribution::discretize(const QuadratureOptions& opts) const {
    if (is_gaussian()) {
        const auto& g = as_gaussian();
        if (g.tau == 0.0) return QuadratureRule{{g.mu}, {1.0}};
        QuadratureRule rule = gauss_hermite(opts.hermite_nodes);
        for (double& x : rule.nodes) x = g.mu + g.tau * x;
        return rule;
    }
    const auto& t = as_truncated_t();
    const double lo = t.location - t.bound;
    const double hi = t.location + t.bound;
    auto density = [this](double x) { return pdf(x); };
    auto second = [this, &t](double x) { return (x - t.location) * (x - t.location) * pdf(x); };
    const auto panels = adaptive_partition({density, second}, lo, hi, opts.legendre_order, opts.rel_tol);
    QuadratureRule rule = composite_gauss_legendre(panels, opts.legendre_order);
    double total = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        rule.weights[k] *= pdf(rule.nodes[k]);
        total += rule.weights[k];
    }
    for (double& w : rule.weights) w /= total;
    return rule;
}

std::string EffectDistribution::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (is_gaussian()) {
        os << "gaussian(mu=" << as_gaussian().mu << ", tau=" << as_gaussian().tau << ")";
    } else {
        const auto& t = as_truncated_t();
        os << "t(df=" << t.df << ", scale=" << t.scale << ", bound=" << t.bound << ", location=" << t.location
           << ")";
    }
    return os.str();
}

EffectDistribution make_matched_t(double df, const EffectDistribution& reference, double bound, QuantileMatch mode) {
    if (!reference.is_gaussian() || reference.as_gaussian().mu != 0.0 || reference.as_gaussian().tau <= 0.0)
        throw std::invalid_argument("make_matched_t: reference must be a mean-zero Gaussian with tau > 0");
    if (!(df > 0.0)) throw std::invalid_argument("make_matched_t: df must be positive");
    if (!(bound > 0.0)) throw std::invalid_argument("make_matched_t: bound must be positive");

    const double target = reference.quantile(0.8);
    if (target >= bound) throw std::invalid_argument("make_matched_t: bound lies inside the matched quantile");
    const students_t_distribution<double> st(df);
    const double untruncated = target / boost::math::quantile(st, 0.8);
    if (mode == QuantileMatch::BeforeTruncation) return EffectDistribution::truncated_t(df, untruncated, bound);

    // Truncation only pulls mass inward, so the truncated 80% quantile sits below
    // `target` at the untruncated scale; the root lies above it.
    auto excess = [&](double scale) {
        const double lo = boost::math::cdf(st, -bound / scale);
        const double mass = boost::math::cdf(st, bound / scale) - lo;
        return (boost::math::cdf(st, target / scale) - lo) / mass - 0.8;
    };
    double a = untruncated;
    double b = untruncated;
    int expand = 0;
    while (excess(b) > 0.0) {
        b *= 1.25;
        if (++expand > 200) throw std::runtime_error("make_matched_t: root-find failed to bracket the scale");
    }
    if (excess(a) < 0.0) a = untruncated * 0.5;
    std::uintmax_t iters = 200;
    const auto [r0, r1] =
        boost::math::tools::toms748_solve(excess, a, b, boost::math::tools::eps_tolerance<double>(52), iters);
    if (iters >= 200) throw std::runtime_error("make_matched_t: root-find did not converge");
    return EffectDistribution::truncated_t(df, 0.5 * (r0 + r1), bound);
}

std::vector<CdfPoint> cdf_curve(const EffectDistribution& d, const std::vector<double>& grid) {
    std::vector<CdfPoint> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("cdf_curve: grid must be sorted");
        out.push_back({grid[i], d.cdf(grid[i])});
    }
    return out;
}

}  // namespace burdenbias
