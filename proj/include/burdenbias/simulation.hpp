#pragma once

#include "burdenbias/analytic.hpp"
#include "burdenbias/cohort.hpp"
#include "burdenbias/effect_dist.hpp"
#include "burdenbias/estimators.hpp"
#include "burdenbias/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace burdenbias {

/// Per-SNP minor allele frequency: a fixed value or Beta(mean, sd) draws.
struct MafSpec {
    enum class Kind { Fixed, Beta };
    Kind kind = Kind::Fixed;
    double mean = 0.01;
    double sd = 0.0;

    static MafSpec fixed(double f) { return {Kind::Fixed, f, 0.0}; }
    static MafSpec beta(double mean, double sd) { return {Kind::Beta, mean, sd}; }

    void validate() const;
    /// Shape parameters (a, b) with the requested mean and SD.
    std::pair<double, double> beta_shapes() const;
    double draw(Rng& rng) const;
    std::string describe() const;
};

struct PopulationSpec {
    long long population_size = 1'000'000;
    int snp_count = 50;
    MafSpec maf;
    EffectDistribution effect_dist = EffectDistribution::gaussian(0.0, 0.6);
    double prevalence = 0.05;

    void validate() const;
};

struct SnpParameters {
    std::vector<double> gammas;
    std::vector<double> mafs;

    std::size_t size() const { return gammas.size(); }
};

/// Thrown when the dense reference generator would exceed its cell budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a sample cannot be filled from the available individuals.
class InsufficientIndividuals : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SnpParameters draw_snp_parameters(const PopulationSpec& spec, Rng& rng);

/// n fresh individuals. Carriers of SNP j are found by geometric skipping, then
/// every individual consumes one uniform for its outcome.
CohortData generate_cohort(const SnpParameters& snps, double prevalence, long long n, Rng& rng);

/// Dense genotype-matrix version of generate_cohort. Consumes the RNG in the same
/// order, so both produce identical cohorts from identical streams.
CohortData generate_cohort_dense(const SnpParameters& snps, double prevalence, long long n, Rng& rng,
                                 long long cell_budget = 100'000'000);

/// Draws SNP parameters and a stored population of spec.population_size.
CohortData generate_population(const PopulationSpec& spec, Rng& rng);

/// N cases and N controls drawn uniformly without replacement from a stored
/// population. Cases occupy indices [0, N), controls [N, 2N).
CohortData draw_case_control(const CohortData& population, int n_per_arm, Rng& rng);

/// N cases and N controls from an unbounded population, generated in blocks
/// until both arms are full. Same index layout as draw_case_control.
CohortData sample_case_control(const SnpParameters& snps, double prevalence, int n_per_arm, Rng& rng,
                               long long max_individuals = 2'000'000'000LL);

/// Fresh prospective cohort sharing the phase-one SNP parameters.
CohortData draw_prospective(const SnpParameters& snps, double prevalence, long long n, Rng& rng);

/// PreviouslyPolymorphic iff the SNP has at least one carrier in phase one.
SnpClassMask classify_snps(const CohortData& phase_one);

enum class SamplingDesign { Prospective, CaseControl };

std::string_view to_string(SamplingDesign d);

struct SimulationSettings {
    PopulationSpec population;
    SamplingDesign design = SamplingDesign::CaseControl;
    int n_per_arm = 100;
    long long cohort_size = 1'000'000;
    std::vector<SnpClass> classes{SnpClass::All, SnpClass::Novel, SnpClass::PreviouslyPolymorphic};
    std::vector<int> g_levels{1};
    int replicates = 2000;
    /// Phase one drawn from a stored population instead of an unbounded one.
    bool validation_mode = false;

    void validate() const;
};

struct ReplicateRow {
    int replicate = 0;
    BurdenEstimate estimate;
};

struct ClassSummary {
    SnpClass snp_class = SnpClass::All;
    int g_level = 1;
    double mean = 0.0;
    double se = 0.0;
    int n_effective = 0;
    int n_undefined = 0;
    int n_corrected = 0;
    double ivw_mean = 0.0;
    double ivw_se = 0.0;
};

struct ReplicateTable {
    std::vector<ReplicateRow> rows;
    std::vector<ClassSummary> summary;

    const ClassSummary& summary_for(SnpClass cls, int g_level) const;
    /// Estimates of one (class, g) pair in replicate order; NaN when undefined.
    std::vector<double> estimates(SnpClass cls, int g_level) const;
    void write_csv(std::ostream& out) const;
};

/// Replicate r draws everything from substream(seed, {tag, r}).
ReplicateTable run_replicates(const SimulationSettings& settings, std::uint64_t seed, int workers = 1,
                              std::uint64_t tag = 0);

/// Unweighted and inverse-variance summaries of the replicate estimates.
std::vector<ClassSummary> summarize(const std::vector<ReplicateRow>& rows, const std::vector<SnpClass>& classes,
                                    const std::vector<int>& g_levels);

struct PowerSettings {
    PopulationSpec population;
    int n_per_arm = 500;
    double alpha = 0.05;
    int replicates = 2000;
    bool validation_mode = false;
};

struct PowerResult {
    double tau = 0.0;
    int rejections = 0;
    int replicates = 0;
    double power = 0.0;
    double alpha = 0.05;
    int undefined = 0;
    std::vector<double> p_values;
};

/// Rejection rate of the allele-count t-test at each SD of Gaussian effects
/// centred on the population's effect mean.
std::vector<PowerResult> power_sweep(const PowerSettings& settings, const std::vector<double>& tau_grid,
                                     std::uint64_t seed, int workers = 1, std::uint64_t tag = 0);

}  // namespace burdenbias
