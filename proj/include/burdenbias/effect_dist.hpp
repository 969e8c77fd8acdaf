#pragma once

#include "burdenbias/quadrature.hpp"
#include "burdenbias/rng.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace burdenbias {

/// Normal law of SNP log-odds-ratios. tau == 0 is a point mass at mu.
struct Gaussian {
    double mu = 0.0;
    double tau = 0.0;
};

/// location + scale * T_df restricted to [location - bound, location + bound].
struct TruncatedScaledT {
    double df = 1.0;
    double scale = 1.0;
    double bound = 4.0;
    double location = 0.0;
};

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

struct QuadratureOptions {
    int hermite_nodes = 64;
    int legendre_order = 20;
    double rel_tol = 1e-10;
    int max_tensor_dim = 3;
    // Monte Carlo stand-in for allele counts above max_tensor_dim.
    bool monte_carlo_fallback = false;
    long long mc_draws = 1'000'000;
    std::uint64_t mc_seed = 0x5eedULL;

    /// Same settings with twice the nodes per rule, used for self-consistency checks.
    QuadratureOptions refined() const {
        QuadratureOptions o = *this;
        o.hermite_nodes *= 2;
        o.legendre_order *= 2;
        return o;
    }
};

class EffectDistribution {
public:
    static EffectDistribution gaussian(double mu, double tau);
    static EffectDistribution point_mass(double at) { return gaussian(at, 0.0); }
    static EffectDistribution truncated_t(double df, double scale, double bound, double location = 0.0);

    bool is_gaussian() const { return std::holds_alternative<Gaussian>(law_); }
    bool is_point_mass() const { return is_gaussian() && std::get<Gaussian>(law_).tau == 0.0; }
    const Gaussian& as_gaussian() const { return std::get<Gaussian>(law_); }
    const TruncatedScaledT& as_truncated_t() const { return std::get<TruncatedScaledT>(law_); }

    /// Closed interval holding all mass (infinite for a nondegenerate Gaussian).
    std::pair<double, double> support() const;

    /// Density. A point mass reports +inf at its atom and 0 elsewhere.
    double pdf(double gamma) const;
    double cdf(double gamma) const;
    double quantile(double p) const;
    Moments moments() const { return moments_; }

    /// Inverse-CDF draw for the truncated t (one uniform per draw); Gaussian uses std::normal_distribution.
    double sample(Rng& rng) const;

    /// Probability-weighted rule (weights sum to 1) that stands in for this law
    /// inside expectations.
    QuadratureRule discretize(const QuadratureOptions& opts = {}) const;

    /// Text form accepted by the config grammar.
    std::string describe() const;

private:
    explicit EffectDistribution(std::variant<Gaussian, TruncatedScaledT> law);
    void cache_truncation();

    std::variant<Gaussian, TruncatedScaledT> law_;
    Moments moments_{};
    double t_cdf_lo_ = 0.0;  // T_df(-bound/scale)
    double t_mass_ = 1.0;    // T_df(bound/scale) - T_df(-bound/scale)
};

enum class QuantileMatch {
    AfterTruncation,   // the truncated law hits the reference 80% quantile exactly
    BeforeTruncation,  // scale matched on the untruncated t, then truncated
};

/// Truncated, location-0 scaled t whose 20% and 80% quantiles equal those of a
/// mean-zero Gaussian reference.
EffectDistribution make_matched_t(double df, const EffectDistribution& reference, double bound,
                                  QuantileMatch mode = QuantileMatch::AfterTruncation);

struct CdfPoint {
    double gamma;
    double probability;
};

std::vector<CdfPoint> cdf_curve(const EffectDistribution& d, const std::vector<double>& grid);

}  // namespace burdenbias
