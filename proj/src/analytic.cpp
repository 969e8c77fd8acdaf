#include "burdenbias/analytic.hpp"

#include "burdenbias/parallel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace burdenbias {

namespace {

constexpr double kLogisticScale = 1.6;

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

// Sum over all g-tuples of rule nodes of prod(weights) * expit(alpha + sum(nodes)).
double tensor_expit(const QuadratureRule& law, double alpha, int g) {
    if (g == 0) return expit(alpha);
    double acc = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k) {
        if (law.weights[k] == 0.0) continue;
        acc += law.weights[k] * tensor_expit(law, alpha + law.nodes[k], g - 1);
    }
    return acc;
}

}  // namespace

double logit(double p) { return std::log(p) - std::log1p(-p); }

double expit(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double prevalence_threshold(double prevalence) {
    if (!(prevalence > 0.0 && prevalence < 1.0)) throw std::domain_error("prevalence must lie strictly inside (0, 1)");
    return -logit(prevalence);
}

void StudyDesign::validate() const {
    std::ostringstream problems;
    if (!(prevalence > 0.0 && prevalence < 1.0)) problems << "prevalence must satisfy 0 < K < 1; ";
    if (!(maf > 0.0 && maf < 0.5)) problems << "maf must satisfy 0 < f < 0.5; ";
    if (n_per_arm < 1) problems << "n_per_arm must be >= 1; ";
    if (snp_count < 1) problems << "snp_count must be >= 1; ";
    if (cohort_size < 1) problems << "cohort_size must be >= 1; ";
    const std::string msg = problems.str();
    if (!msg.empty()) throw std::invalid_argument("invalid study design: " + msg.substr(0, msg.size() - 2));
}

std::string_view to_string(SnpClass c) {
    switch (c) {
        case SnpClass::All: return "all";
        case SnpClass::PreviouslyPolymorphic: return "old";
        case SnpClass::Novel: return "novel";
    }
    return "?";
}

SnpClass parse_snp_class(std::string_view name) {
    if (name == "all") return SnpClass::All;
    if (name == "old" || name == "prev" || name == "previously_polymorphic") return SnpClass::PreviouslyPolymorphic;
    if (name == "novel") return SnpClass::Novel;
    throw std::invalid_argument("unknown SNP class '" + std::string(name) + "'");
}

double burden_lor_closed_form(double mu, double tau, double prevalence, int g) {
    const double c = prevalence_threshold(prevalence);
    if (g < 1) throw std::invalid_argument("burden_lor_closed_form: g must be >= 1");
    if (!(tau >= 0.0)) throw std::invalid_argument("burden_lor_closed_form: tau must be >= 0");
    const double s = std::sqrt(1.0 + tau * tau * g / (kLogisticScale * kLogisticScale));
    return (mu * g + c * (s - 1.0)) / s;
}

double exposure_prob(Arm arm, double maf, double prevalence, double gamma) {
    require_probability(maf, "maf");
    require_probability(prevalence, "prevalence");
    if (maf == 0.0) return 0.0;
    const double odds_ratio = std::exp(gamma);
    const double x = arm == Arm::Controls ? 1.0 - prevalence + prevalence * odds_ratio
                                          : (1.0 - prevalence) / odds_ratio + prevalence;
    return maf / (maf + (1.0 - maf) * x);
}

double ascertainment_prob(double maf, double prevalence, double gamma, int n_per_arm, AscertainmentMethod method) {
    require_probability(maf, "maf");
    if (n_per_arm < 0) throw std::invalid_argument("ascertainment_prob: N must be >= 0");
    if (maf == 0.0 || n_per_arm == 0) return 0.0;
    if (method == AscertainmentMethod::Poisson)
        return -std::expm1(-maf * n_per_arm * (1.0 + std::exp(gamma)));
    const double p_case = exposure_prob(Arm::Cases, maf, prevalence, gamma);
    const double p_control = exposure_prob(Arm::Controls, maf, prevalence, gamma);
    return -std::expm1(n_per_arm * (std::log1p(-p_case) + std::log1p(-p_control)));
}

ConditionedEffectDistribution::ConditionedEffectDistribution(EffectDistribution base, SnpClass condition,
                                                             StudyDesign design)
    : base_(std::move(base)), condition_(condition), design_(design) {}

double ConditionedEffectDistribution::weight(double gamma) const {
    if (condition_ == SnpClass::All) return 1.0;
    const double p = ascertainment_prob(design_.maf, design_.prevalence, gamma, design_.n_per_arm);
    return condition_ == SnpClass::PreviouslyPolymorphic ? p : 1.0 - p;
}

double ConditionedEffectDistribution::pdf(double gamma) const {
    const double b = base_.pdf(gamma);
    if (b == 0.0) return 0.0;
    return b * weight(gamma) / normalizer_;
}

double ConditionedEffectDistribution::sample(Rng& rng) const {
    for (;;) {
        const double gamma = base_.sample(rng);
        if (uniform01(rng) < weight(gamma)) return gamma;
    }
}

ConditionedEffectDistribution condition_distribution(const EffectDistribution& base, const StudyDesign& design,
                                                     SnpClass condition, const QuadratureOptions& opts) {
    design.validate();
    ConditionedEffectDistribution out(base, condition, design);
    QuadratureRule rule = base.discretize(opts);
    double z = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        rule.weights[k] *= out.weight(rule.nodes[k]);
        z += rule.weights[k];
    }
    if (!(z >= 1e-12)) {
        throw std::domain_error("condition '" + std::string(to_string(condition)) +
                                "' is essentially impossible under this design (probability " +
                                std::to_string(z) + ")");
    }
    double mean = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        rule.weights[k] /= z;
        mean += rule.weights[k] * rule.nodes[k];
    }
    double var = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) var += rule.weights[k] * (rule.nodes[k] - mean) * (rule.nodes[k] - mean);
    out.normalizer_ = condition == SnpClass::All ? 1.0 : z;
    out.moments_ = {mean, std::sqrt(var)};
    out.rule_ = std::move(rule);
    return out;
}

McEstimate marginal_prob_given_g_mc(const std::function<double(Rng&)>& sampler, double prevalence, int g,
                                    long long draws, std::uint64_t seed) {
    const double alpha = -prevalence_threshold(prevalence);
    if (g == 0) return {prevalence, 0.0};
    if (draws < 2) throw std::invalid_argument("marginal_prob_given_g_mc: need at least two draws");
    Rng rng = substream(seed, {static_cast<std::uint64_t>(g)});
    double sum = 0.0;
    double sumsq = 0.0;
    for (long long i = 0; i < draws; ++i) {
        double eta = alpha;
        for (int j = 0; j < g; ++j) eta += sampler(rng);
        const double p = expit(eta);
        sum += p;
        sumsq += p * p;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

double marginal_prob_given_g(const QuadratureRule& law, double prevalence, int g, const QuadratureOptions& opts,
                             const std::function<double(Rng&)>& sampler) {
    const double alpha = -prevalence_threshold(prevalence);
    if (g < 0) throw std::invalid_argument("marginal_prob_given_g: g must be >= 0");
    if (g == 0) return prevalence;
    if (g > opts.max_tensor_dim) {
        if (!opts.monte_carlo_fallback || !sampler) {
            throw std::invalid_argument("marginal_prob_given_g: g = " + std::to_string(g) +
                                        " exceeds the tensor quadrature limit " +
                                        std::to_string(opts.max_tensor_dim) +
                                        " and Monte Carlo fallback is disabled");
        }
        return marginal_prob_given_g_mc(sampler, prevalence, g, opts.mc_draws, opts.mc_seed).value;
    }
    return tensor_expit(law, alpha, g);
}

double marginal_prob_given_g(const EffectDistribution& d, double prevalence, int g, const QuadratureOptions& opts) {
    if (g == 0) {
        prevalence_threshold(prevalence);
        return prevalence;
    }
    return marginal_prob_given_g(d.discretize(opts), prevalence, g, opts, [&d](Rng& r) { return d.sample(r); });
}

double marginal_prob_given_g(const ConditionedEffectDistribution& d, double prevalence, int g,
                             const QuadratureOptions& opts) {
    return marginal_prob_given_g(d.rule(), prevalence, g, opts, [&d](Rng& r) { return d.sample(r); });
}

double burden_lor_quadrature(const EffectDistribution& d, double prevalence, int g, const QuadratureOptions& opts) {
    return logit(marginal_prob_given_g(d, prevalence, g, opts)) - logit(prevalence);
}

double burden_lor_quadrature(const ConditionedEffectDistribution& d, double prevalence, int g,
                             const QuadratureOptions& opts) {
    return logit(marginal_prob_given_g(d, prevalence, g, opts)) - logit(prevalence);
}

BurdenTheory phase_two_burden(const EffectDistribution& base, const StudyDesign& design, SnpClass snp_class, int g,
                              const QuadratureOptions& opts) {
    BurdenTheory out{snp_class, g, BurdenMethod::Quadrature, 0.0};
    if (snp_class == SnpClass::All) {
        out.value = burden_lor_quadrature(base, design.prevalence, g, opts);
    } else {
        const auto cond = condition_distribution(base, design, snp_class, opts);
        out.value = burden_lor_quadrature(cond, design.prevalence, g, opts);
    }
    return out;
}

BurdenTheory phase_two_burden_closed_form(const EffectDistribution& base, const StudyDesign& design,
                                          SnpClass snp_class, int g, const QuadratureOptions& opts) {
    Moments m = base.moments();
    if (snp_class != SnpClass::All) m = condition_distribution(base, design, snp_class, opts).moments();
    return {snp_class, g, BurdenMethod::ClosedForm, burden_lor_closed_form(m.mean, m.sd, design.prevalence, g)};
}

CurveQuantity parse_curve_quantity(std::string_view name) {
    static constexpr std::pair<std::string_view, CurveQuantity> table[] = {
        {"beta_all", CurveQuantity::BetaAll},
        {"beta_prev", CurveQuantity::BetaPrev},
        {"beta_novel", CurveQuantity::BetaNovel},
        {"mu_prev", CurveQuantity::MuPrev},
        {"mu_novel", CurveQuantity::MuNovel},
        {"tau_prev", CurveQuantity::TauPrev},
        {"tau_novel", CurveQuantity::TauNovel},
        {"ascertainment_ratio", CurveQuantity::AscertainmentRatio},
        {"ascertainment_diff", CurveQuantity::AscertainmentDiff},
        {"closed_form_beta", CurveQuantity::ClosedFormBeta},
    };
    for (const auto& [k, v] : table)
        if (k == name) return v;
    throw std::invalid_argument("unknown quantity '" + std::string(name) + "'");
}

std::string_view to_string(CurveQuantity q) {
    switch (q) {
        case CurveQuantity::BetaAll: return "beta_all";
        case CurveQuantity::BetaPrev: return "beta_prev";
        case CurveQuantity::BetaNovel: return "beta_novel";
        case CurveQuantity::MuPrev: return "mu_prev";
        case CurveQuantity::MuNovel: return "mu_novel";
        case CurveQuantity::TauPrev: return "tau_prev";
        case CurveQuantity::TauNovel: return "tau_novel";
        case CurveQuantity::AscertainmentRatio: return "ascertainment_ratio";
        case CurveQuantity::AscertainmentDiff: return "ascertainment_diff";
        case CurveQuantity::ClosedFormBeta: return "closed_form_beta";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "prevalence") return SweepParameter::Prevalence;
    if (name == "mu") return SweepParameter::Mu;
    if (name == "tau") return SweepParameter::Tau;
    if (name == "maf") return SweepParameter::Maf;
    if (name == "N" || name == "n") return SweepParameter::N;
    if (name == "Nf" || name == "nf") return SweepParameter::Nf;
    throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Prevalence: return "prevalence";
        case SweepParameter::Mu: return "mu";
        case SweepParameter::Tau: return "tau";
        case SweepParameter::Maf: return "maf";
        case SweepParameter::N: return "N";
        case SweepParameter::Nf: return "Nf";
    }
    return "?";
}

double curve_value(const CurveSpec& spec, double x) {
    StudyDesign design = spec.design;
    EffectDistribution dist = spec.dist;
    switch (spec.sweep) {
        case SweepParameter::Prevalence: design.prevalence = x; break;
        case SweepParameter::Maf: design.maf = x; break;
        case SweepParameter::N: design.n_per_arm = static_cast<int>(std::lround(x)); break;
        case SweepParameter::Nf: design.maf = x / design.n_per_arm; break;
        case SweepParameter::Mu:
        case SweepParameter::Tau: {
            if (!dist.is_gaussian()) throw std::invalid_argument("mu/tau sweeps require a Gaussian effect distribution");
            const Gaussian g = dist.as_gaussian();
            dist = spec.sweep == SweepParameter::Mu ? EffectDistribution::gaussian(x, g.tau)
                                                    : EffectDistribution::gaussian(g.mu, x);
            break;
        }
    }
    design.validate();
    const double log_or = std::log(spec.odds_ratio);
    switch (spec.quantity) {
        case CurveQuantity::BetaAll:
            return burden_lor_quadrature(dist, design.prevalence, spec.g, spec.quad);
        case CurveQuantity::BetaPrev:
            return phase_two_burden(dist, design, SnpClass::PreviouslyPolymorphic, spec.g, spec.quad).value;
        case CurveQuantity::BetaNovel:
            return phase_two_burden(dist, design, SnpClass::Novel, spec.g, spec.quad).value;
        case CurveQuantity::MuPrev:
            return condition_distribution(dist, design, SnpClass::PreviouslyPolymorphic, spec.quad).moments().mean;
        case CurveQuantity::MuNovel:
            return condition_distribution(dist, design, SnpClass::Novel, spec.quad).moments().mean;
        case CurveQuantity::TauPrev:
            return condition_distribution(dist, design, SnpClass::PreviouslyPolymorphic, spec.quad).moments().sd;
        case CurveQuantity::TauNovel:
            return condition_distribution(dist, design, SnpClass::Novel, spec.quad).moments().sd;
        case CurveQuantity::AscertainmentRatio:
            return ascertainment_prob(design.maf, design.prevalence, log_or, design.n_per_arm) /
                   ascertainment_prob(design.maf, design.prevalence, -log_or, design.n_per_arm);
        case CurveQuantity::AscertainmentDiff:
            return ascertainment_prob(design.maf, design.prevalence, log_or, design.n_per_arm) -
                   ascertainment_prob(design.maf, design.prevalence, -log_or, design.n_per_arm);
        case CurveQuantity::ClosedFormBeta: {
            const Moments m = dist.moments();
            return burden_lor_closed_form(m.mean, m.sd, design.prevalence, spec.g);
        }
    }
    throw std::logic_error("unhandled curve quantity");
}

std::vector<CurvePoint> curve(const CurveSpec& spec, int workers) {
    std::vector<CurvePoint> out(spec.grid.size());
    parallel_for(spec.grid.size(), workers, [&](std::size_t i) { out[i] = {spec.grid[i], curve_value(spec, spec.grid[i])}; });
    return out;
}

}  // namespace burdenbias
