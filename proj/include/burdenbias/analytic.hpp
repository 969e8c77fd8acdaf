#pragma once

#include "burdenbias/effect_dist.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace burdenbias {

double logit(double p);
double expit(double x);

/// c = -logit(K). Throws std::domain_error unless 0 < K < 1.
double prevalence_threshold(double prevalence);

struct StudyDesign {
    double prevalence = 0.05;  // disease probability among carriers of no minor allele
    double maf = 0.01;
    int n_per_arm = 100;  // cases == controls == N
    int snp_count = 50;
    long long cohort_size = 1'000'000;

    /// Throws std::invalid_argument naming every violated bound.
    void validate() const;
    double threshold() const { return prevalence_threshold(prevalence); }
};

enum class SnpClass { All, PreviouslyPolymorphic, Novel };
enum class Arm { Cases, Controls };
enum class AscertainmentMethod { Exact, Poisson };

std::string_view to_string(SnpClass c);
/// Accepts all | old | prev | previously_polymorphic | novel.
SnpClass parse_snp_class(std::string_view name);

/// Normal-approximation burden contrast at allele count g versus 0:
/// (mu g + c (s - 1)) / s with s = sqrt(1 + tau^2 g / 1.6^2).
double burden_lor_closed_form(double mu, double tau, double prevalence, int g);

/// Probability that a case (control) carries the minor allele of a SNP with
/// MAF f and log-odds-ratio gamma.
double exposure_prob(Arm arm, double maf, double prevalence, double gamma);

/// Probability that the SNP has at least one carrier among N cases and N controls.
double ascertainment_prob(double maf, double prevalence, double gamma, int n_per_arm,
                          AscertainmentMethod method = AscertainmentMethod::Exact);

/// An effect law reweighted by phase-one polymorphism status.
class ConditionedEffectDistribution {
public:
    const EffectDistribution& base() const { return base_; }
    SnpClass condition() const { return condition_; }
    const StudyDesign& design() const { return design_; }
    double normalizer() const { return normalizer_; }
    Moments moments() const { return moments_; }
    const QuadratureRule& rule() const { return rule_; }

    /// Relative weight of a SNP with effect gamma: ascertainment probability,
    /// its complement, or 1.
    double weight(double gamma) const;
    double pdf(double gamma) const;
    /// Rejection draw: base draw accepted with probability weight(gamma).
    double sample(Rng& rng) const;

private:
    friend ConditionedEffectDistribution condition_distribution(const EffectDistribution&, const StudyDesign&,
                                                                SnpClass, const QuadratureOptions&);
    ConditionedEffectDistribution(EffectDistribution base, SnpClass condition, StudyDesign design);

    EffectDistribution base_;
    SnpClass condition_;
    StudyDesign design_;
    double normalizer_ = 1.0;
    Moments moments_{};
    QuadratureRule rule_;
};

/// Throws std::domain_error when the condition has probability below 1e-12.
ConditionedEffectDistribution condition_distribution(const EffectDistribution& base, const StudyDesign& design,
                                                     SnpClass condition, const QuadratureOptions& opts = {});

/// Pr{Y = 1 | g} for a sum of g IID effects drawn from a probability rule, by
/// tensor-product quadrature. g above opts.max_tensor_dim throws unless a
/// sampler is supplied and opts.monte_carlo_fallback is set.
double marginal_prob_given_g(const QuadratureRule& law, double prevalence, int g, const QuadratureOptions& opts = {},
                             const std::function<double(Rng&)>& sampler = {});
double marginal_prob_given_g(const EffectDistribution& d, double prevalence, int g,
                             const QuadratureOptions& opts = {});
double marginal_prob_given_g(const ConditionedEffectDistribution& d, double prevalence, int g,
                             const QuadratureOptions& opts = {});

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};

/// Plain Monte Carlo estimate of Pr{Y = 1 | g}.
McEstimate marginal_prob_given_g_mc(const std::function<double(Rng&)>& sampler, double prevalence, int g,
                                    long long draws, std::uint64_t seed);

/// logit Pr{Y=1|g} - logit Pr{Y=1|0}.
double burden_lor_quadrature(const EffectDistribution& d, double prevalence, int g, const QuadratureOptions& opts = {});
double burden_lor_quadrature(const ConditionedEffectDistribution& d, double prevalence, int g,
                             const QuadratureOptions& opts = {});

enum class BurdenMethod { ClosedForm, Quadrature };

struct BurdenTheory {
    SnpClass snp_class = SnpClass::All;
    int g_contrast = 1;
    BurdenMethod method = BurdenMethod::Quadrature;
    double value = 0.0;
};

/// Expected phase-two burden contrast for SNPs of one class.
BurdenTheory phase_two_burden(const EffectDistribution& base, const StudyDesign& design, SnpClass snp_class, int g,
                              const QuadratureOptions& opts = {});
/// Same contrast from the closed form using the class's conditioned mean and SD.
BurdenTheory phase_two_burden_closed_form(const EffectDistribution& base, const StudyDesign& design,
                                          SnpClass snp_class, int g, const QuadratureOptions& opts = {});

enum class CurveQuantity {
    BetaAll,
    BetaPrev,
    BetaNovel,
    MuPrev,
    MuNovel,
    TauPrev,
    TauNovel,
    AscertainmentRatio,
    AscertainmentDiff,
    ClosedFormBeta,
};

enum class SweepParameter { Prevalence, Mu, Tau, Maf, N, Nf };

CurveQuantity parse_curve_quantity(std::string_view name);
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(CurveQuantity q);
std::string_view to_string(SweepParameter p);

struct CurveSpec {
    CurveQuantity quantity = CurveQuantity::BetaAll;
    SweepParameter sweep = SweepParameter::Prevalence;
    std::vector<double> grid;
    StudyDesign design;
    EffectDistribution dist = EffectDistribution::gaussian(0.0, 0.6);
    double odds_ratio = 2.0;  // used by the ascertainment quantities
    int g = 1;
    QuadratureOptions quad;
};

struct CurvePoint {
    double x;
    double value;
};

/// Evaluates one quantity pointwise along a sweep. Output order follows the grid.
std::vector<CurvePoint> curve(const CurveSpec& spec, int workers = 1);

/// Single point of a curve; `x` is interpreted by spec.sweep.
double curve_value(const CurveSpec& spec, double x);

}  // namespace burdenbias
