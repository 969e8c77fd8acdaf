#include "burdenbias/simulation.hpp"

#include "burdenbias/parallel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

namespace burdenbias {

namespace {

constexpr long long kBlockSize = 8192;

// Appends the carriers of one SNP among n individuals; returns them in order.
template <class Visit>
void skip_carriers(double f, long long n, Rng& rng, Visit&& visit) {
    if (f <= 0.0 || n <= 0) return;
    if (f >= 1.0) {
        for (long long i = 0; i < n; ++i) visit(i);
        return;
    }
    const double log_q = std::log1p(-f);
    double pos = std::floor(std::log(uniform_open(rng)) / log_q);
    while (pos < static_cast<double>(n)) {
        const auto i = static_cast<long long>(pos);
        visit(i);
        pos = static_cast<double>(i) + 1.0 + std::floor(std::log(uniform_open(rng)) / log_q);
    }
}

void check_cohort_size(long long n) {
    if (n < 0) throw std::invalid_argument("cohort size must be nonnegative");
    if (n > static_cast<long long>(std::numeric_limits<std::uint32_t>::max()))
        throw std::invalid_argument("cohort size exceeds 32-bit carrier indices");
}

// Outcomes given per-person effect offsets; one uniform per person in index order.
void assign_outcomes(CohortData& c, const std::vector<double>& offset, const std::vector<std::uint8_t>& carrier,
                     double alpha, double prevalence, Rng& rng) {
    const std::size_t n = offset.size();
    c.outcomes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform01(rng);
        const double risk = carrier[i] ? expit(alpha + offset[i]) : prevalence;
        c.outcomes[i] = u < risk ? 1 : 0;
    }
}

// Keeps the listed individuals of `src` in the given order.
CohortData subset(const CohortData& src, const std::vector<std::uint32_t>& keep) {
    CohortData out;
    out.snp_gammas = src.snp_gammas;
    out.snp_mafs = src.snp_mafs;
    out.outcomes.resize(keep.size());
    std::vector<std::int64_t> new_index(src.size(), -1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        new_index[keep[k]] = static_cast<std::int64_t>(k);
        out.outcomes[k] = src.outcomes[keep[k]];
    }
    out.carriers.resize(src.snp_count());
    for (std::size_t j = 0; j < src.snp_count(); ++j) {
        auto& dst = out.carriers[j];
        for (std::uint32_t i : src.carriers[j])
            if (new_index[i] >= 0) dst.push_back(static_cast<std::uint32_t>(new_index[i]));
        std::sort(dst.begin(), dst.end());
    }
    return out;
}

}  // namespace

void MafSpec::validate() const {
    if (kind == Kind::Fixed) {
        if (!(mean > 0.0 && mean < 0.5))
            throw std::invalid_argument("maf must satisfy 0 < f < 0.5 (got " + std::to_string(mean) + ")");
        return;
    }
    if (!(mean > 0.0 && mean < 1.0)) throw std::invalid_argument("beta maf mean must lie in (0, 1)");
    if (!(sd > 0.0)) throw std::invalid_argument("beta maf sd must be positive");
    if (!(sd * sd < mean * (1.0 - mean)))
        throw std::invalid_argument("beta maf requires sd^2 < mean (1 - mean)");
}

std::pair<double, double> MafSpec::beta_shapes() const {
    validate();
    if (kind != Kind::Beta) throw std::logic_error("beta_shapes on a fixed MAF");
    const double nu = mean * (1.0 - mean) / (sd * sd) - 1.0;
    return {mean * nu, (1.0 - mean) * nu};
}

double MafSpec::draw(Rng& rng) const {
    if (kind == Kind::Fixed) return mean;
    const auto [a, b] = beta_shapes();
    return boost::math::ibeta_inv(a, b, uniform_open(rng));
}

std::string MafSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (kind == Kind::Fixed)
        os << mean;
    else
        os << "beta(mean=" << mean << ", sd=" << sd << ")";
    return os.str();
}

void PopulationSpec::validate() const {
    std::ostringstream problems;
    if (population_size < 1) problems << "population_size must be >= 1; ";
    if (snp_count < 1) problems << "snp_count must be >= 1; ";
    if (!(prevalence > 0.0 && prevalence < 1.0)) problems << "prevalence must satisfy 0 < K < 1; ";
    try {
        maf.validate();
    } catch (const std::invalid_argument& e) {
        problems << e.what() << "; ";
    }
    const std::string msg = problems.str();
    if (!msg.empty()) throw std::invalid_argument("invalid population: " + msg.substr(0, msg.size() - 2));
}

SnpParameters draw_snp_parameters(const PopulationSpec& spec, Rng& rng) {
    spec.validate();
    SnpParameters p;
    p.gammas.resize(spec.snp_count);
    p.mafs.resize(spec.snp_count);
    for (int j = 0; j < spec.snp_count; ++j) {
        p.gammas[j] = spec.effect_dist.sample(rng);
        p.mafs[j] = spec.maf.draw(rng);
    }
    return p;
}

CohortData generate_cohort(const SnpParameters& snps, double prevalence, long long n, Rng& rng) {
    check_cohort_size(n);
    const double alpha = -prevalence_threshold(prevalence);
    CohortData c;
    c.snp_gammas = snps.gammas;
    c.snp_mafs = snps.mafs;
    c.carriers.resize(snps.size());
    std::vector<double> offset(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> carrier(static_cast<std::size_t>(n), 0);
    for (std::size_t j = 0; j < snps.size(); ++j) {
        auto& list = c.carriers[j];
        list.reserve(static_cast<std::size_t>(1.2 * snps.mafs[j] * static_cast<double>(n)) + 8);
        const double gamma = snps.gammas[j];
        skip_carriers(snps.mafs[j], n, rng, [&](long long i) {
            list.push_back(static_cast<std::uint32_t>(i));
            offset[i] += gamma;
            carrier[i] = 1;
        });
    }
    assign_outcomes(c, offset, carrier, alpha, prevalence, rng);
    return c;
}

CohortData generate_cohort_dense(const SnpParameters& snps, double prevalence, long long n, Rng& rng,
                                 long long cell_budget) {
    check_cohort_size(n);
    const auto m = static_cast<long long>(snps.size());
    if (m > 0 && n > cell_budget / m)
        throw BudgetExceeded("dense genotype matrix of " + std::to_string(n) + " x " + std::to_string(m) +
                             " exceeds the budget of " + std::to_string(cell_budget) + " cells");
    const double alpha = -prevalence_threshold(prevalence);
    std::vector<std::uint8_t> g(static_cast<std::size_t>(n * m), 0);
    for (long long j = 0; j < m; ++j)
        skip_carriers(snps.mafs[j], n, rng, [&](long long i) { g[i * m + j] = 1; });

    std::vector<double> offset(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> carrier(static_cast<std::size_t>(n), 0);
    for (long long i = 0; i < n; ++i) {
        for (long long j = 0; j < m; ++j) {
            if (g[i * m + j]) {
                offset[i] += snps.gammas[j];
                carrier[i] = 1;
            }
        }
    }
    CohortData c;
    c.snp_gammas = snps.gammas;
    c.snp_mafs = snps.mafs;
    c.carriers.resize(snps.size());
    for (long long j = 0; j < m; ++j)
        for (long long i = 0; i < n; ++i)
            if (g[i * m + j]) c.carriers[j].push_back(static_cast<std::uint32_t>(i));
    assign_outcomes(c, offset, carrier, alpha, prevalence, rng);
    return c;
}

CohortData generate_population(const PopulationSpec& spec, Rng& rng) {
    const SnpParameters snps = draw_snp_parameters(spec, rng);
    return generate_cohort(snps, spec.prevalence, spec.population_size, rng);
}

CohortData draw_case_control(const CohortData& population, int n_per_arm, Rng& rng) {
    if (n_per_arm < 1) throw std::invalid_argument("case-control sample needs n_per_arm >= 1");
    std::vector<std::uint32_t> cases, controls;
    for (std::size_t i = 0; i < population.size(); ++i)
        (population.outcomes[i] ? cases : controls).push_back(static_cast<std::uint32_t>(i));
    const auto n = static_cast<std::size_t>(n_per_arm);
    if (cases.size() < n || controls.size() < n)
        throw InsufficientIndividuals("population holds " + std::to_string(cases.size()) + " cases and " +
                                      std::to_string(controls.size()) + " controls; need " +
                                      std::to_string(n_per_arm) + " of each");
    auto partial_shuffle = [&](std::vector<std::uint32_t>& v) {
        for (std::size_t k = 0; k < n; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, v.size() - 1);
            std::swap(v[k], v[pick(rng)]);
        }
        v.resize(n);
    };
    partial_shuffle(cases);
    partial_shuffle(controls);
    std::vector<std::uint32_t> keep(cases);
    keep.insert(keep.end(), controls.begin(), controls.end());
    return subset(population, keep);
}

CohortData sample_case_control(const SnpParameters& snps, double prevalence, int n_per_arm, Rng& rng,
                               long long max_individuals) {
    if (n_per_arm < 1) throw std::invalid_argument("case-control sample needs n_per_arm >= 1");
    const auto n = static_cast<std::uint32_t>(n_per_arm);
    CohortData out;
    out.snp_gammas = snps.gammas;
    out.snp_mafs = snps.mafs;
    out.carriers.resize(snps.size());
    out.outcomes.assign(2 * static_cast<std::size_t>(n), 0);
    std::fill(out.outcomes.begin(), out.outcomes.begin() + n, 1);
    std::uint32_t n_cases = 0, n_controls = 0;
    long long screened = 0;
    std::vector<std::int64_t> new_index;
    while (n_cases < n || n_controls < n) {
        if (screened >= max_individuals)
            throw InsufficientIndividuals("screened " + std::to_string(screened) + " individuals and found " +
                                          std::to_string(n_cases) + " cases and " + std::to_string(n_controls) +
                                          " controls; need " + std::to_string(n_per_arm) + " of each");
        const CohortData block = generate_cohort(snps, prevalence, kBlockSize, rng);
        screened += kBlockSize;
        new_index.assign(block.size(), -1);
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (block.outcomes[i]) {
                if (n_cases < n) new_index[i] = n_cases++;
            } else if (n_controls < n) {
                new_index[i] = n + n_controls++;
            }
        }
        for (std::size_t j = 0; j < snps.size(); ++j)
            for (std::uint32_t i : block.carriers[j])
                if (new_index[i] >= 0) out.carriers[j].push_back(static_cast<std::uint32_t>(new_index[i]));
    }
    for (auto& list : out.carriers) std::sort(list.begin(), list.end());
    return out;
}

CohortData draw_prospective(const SnpParameters& snps, double prevalence, long long n, Rng& rng) {
    return generate_cohort(snps, prevalence, n, rng);
}

SnpClassMask classify_snps(const CohortData& phase_one) {
    SnpClassMask mask(phase_one.snp_count());
    for (std::size_t j = 0; j < mask.size(); ++j)
        mask[j] = phase_one.carriers[j].empty() ? SnpStatus::Novel : SnpStatus::PreviouslyPolymorphic;
    return mask;
}

std::string_view to_string(SamplingDesign d) {
    return d == SamplingDesign::Prospective ? "prospective" : "case_control";
}

void SimulationSettings::validate() const {
    population.validate();
    std::ostringstream problems;
    if (n_per_arm < 1) problems << "n_per_arm must be >= 1; ";
    if (cohort_size < 1) problems << "cohort_size must be >= 1; ";
    if (replicates < 1) problems << "replicates must be >= 1; ";
    if (classes.empty()) problems << "at least one SNP class is required; ";
    if (g_levels.empty()) problems << "at least one g level is required; ";
    for (int g : g_levels)
        if (g < 1) problems << "g levels must be >= 1; ";
    if (design == SamplingDesign::Prospective)
        for (SnpClass c : classes)
            if (c != SnpClass::All) problems << "prospective design only supports the 'all' class; ";
    if (validation_mode && population.population_size < 10LL * n_per_arm)
        problems << "population_size must be at least 10 N; ";
    const std::string msg = problems.str();
    if (!msg.empty()) throw std::invalid_argument("invalid simulation settings: " + msg.substr(0, msg.size() - 2));
}

const ClassSummary& ReplicateTable::summary_for(SnpClass cls, int g_level) const {
    for (const auto& s : summary)
        if (s.snp_class == cls && s.g_level == g_level) return s;
    throw std::out_of_range("no summary for class " + std::string(to_string(cls)) + " at g = " +
                            std::to_string(g_level));
}

std::vector<double> ReplicateTable::estimates(SnpClass cls, int g_level) const {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.estimate.snp_class != cls || r.estimate.g_contrast != g_level) continue;
        out.push_back(r.estimate.status == EstimateStatus::Undefined ? std::numeric_limits<double>::quiet_NaN()
                                                                      : r.estimate.lor);
    }
    return out;
}

void ReplicateTable::write_csv(std::ostream& out) const {
    out << "replicate,snp_class,g_level,n_g0,n_g1,cases_g0,cases_g1,lor,se,status\n";
    char buf[64];
    auto num = [&](double v) -> const char* {
        if (!std::isfinite(v)) return "NA";
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    };
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        out << r.replicate << ',' << to_string(e.snp_class) << ',' << e.g_contrast << ',' << e.cells.n_g0() << ','
            << e.cells.n_g() << ',' << e.cells.cases_g0 << ',' << e.cells.cases_g << ',' << num(e.lor) << ',';
        out << num(e.se) << ',' << to_string(e.status) << '\n';
    }
}

std::vector<ClassSummary> summarize(const std::vector<ReplicateRow>& rows, const std::vector<SnpClass>& classes,
                                    const std::vector<int>& g_levels) {
    std::vector<ClassSummary> out;
    for (SnpClass cls : classes) {
        for (int g : g_levels) {
            ClassSummary s;
            s.snp_class = cls;
            s.g_level = g;
            double sum = 0.0, sum_sq = 0.0, w_sum = 0.0, w_lor = 0.0;
            for (const auto& r : rows) {
                const auto& e = r.estimate;
                if (e.snp_class != cls || e.g_contrast != g) continue;
                if (e.status == EstimateStatus::Undefined) {
                    ++s.n_undefined;
                    continue;
                }
                if (e.status == EstimateStatus::ZeroCellCorrected) ++s.n_corrected;
                ++s.n_effective;
                sum += e.lor;
                sum_sq += e.lor * e.lor;
                const double w = 1.0 / (e.se * e.se);
                w_sum += w;
                w_lor += w * e.lor;
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            if (s.n_effective > 0) {
                const double n = s.n_effective;
                s.mean = sum / n;
                const double var = s.n_effective > 1 ? std::max(0.0, (sum_sq - n * s.mean * s.mean) / (n - 1)) : nan;
                s.se = std::sqrt(var / n);
                s.ivw_mean = w_lor / w_sum;
                s.ivw_se = std::sqrt(1.0 / w_sum);
            } else {
                s.mean = s.se = s.ivw_mean = s.ivw_se = nan;
            }
            out.push_back(s);
        }
    }
    return out;
}

namespace {

std::vector<BurdenEstimate> estimate_classes(const CohortData& cohort, const SnpClassMask& mask,
                                             const SimulationSettings& settings) {
    std::vector<BurdenEstimate> out;
    const int g_max = *std::max_element(settings.g_levels.begin(), settings.g_levels.end());
    for (SnpClass cls : settings.classes) {
        const auto g = allele_counts(cohort, select_snps(cls, mask, cohort.snp_count()));
        std::vector<long long> cases(g_max + 1, 0), total(g_max + 1, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] > g_max) continue;
            ++total[g[i]];
            cases[g[i]] += cohort.outcomes[i] ? 1 : 0;
        }
        for (int level : settings.g_levels) {
            CellCounts cells;
            cells.cases_g0 = cases[0];
            cells.controls_g0 = total[0] - cases[0];
            cells.cases_g = cases[level];
            cells.controls_g = total[level] - cases[level];
            out.push_back(burden_from_cells(cells, cls, level));
        }
    }
    return out;
}

}  // namespace

ReplicateTable run_replicates(const SimulationSettings& settings, std::uint64_t seed, int workers,
                              std::uint64_t tag) {
    settings.validate();
    const auto reps = static_cast<std::size_t>(settings.replicates);
    std::vector<std::vector<BurdenEstimate>> per_rep(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        Rng rng = substream(seed, {tag, static_cast<std::uint64_t>(r)});
        const PopulationSpec& pop = settings.population;
        SnpClassMask mask;
        SnpParameters snps;
        if (settings.design == SamplingDesign::CaseControl) {
            CohortData phase_one;
            if (settings.validation_mode) {
                const CohortData population = generate_population(pop, rng);
                snps.gammas = population.snp_gammas;
                snps.mafs = population.snp_mafs;
                phase_one = draw_case_control(population, settings.n_per_arm, rng);
            } else {
                snps = draw_snp_parameters(pop, rng);
                phase_one = sample_case_control(snps, pop.prevalence, settings.n_per_arm, rng);
            }
            mask = classify_snps(phase_one);
        } else {
            snps = draw_snp_parameters(pop, rng);
        }
        const CohortData cohort = draw_prospective(snps, pop.prevalence, settings.cohort_size, rng);
        per_rep[r] = estimate_classes(cohort, mask, settings);
    });
    ReplicateTable table;
    for (std::size_t r = 0; r < reps; ++r)
        for (const auto& e : per_rep[r]) table.rows.push_back({static_cast<int>(r), e});
    table.summary = summarize(table.rows, settings.classes, settings.g_levels);
    return table;
}

std::vector<PowerResult> power_sweep(const PowerSettings& settings, const std::vector<double>& tau_grid,
                                     std::uint64_t seed, int workers, std::uint64_t tag) {
    settings.population.validate();
    if (settings.replicates < 1) throw std::invalid_argument("power sweep needs replicates >= 1");
    if (!(settings.alpha > 0.0 && settings.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!settings.population.effect_dist.is_gaussian())
        throw std::invalid_argument("power sweep varies the SD of a Gaussian effect law");
    for (double tau : tau_grid)
        if (!(tau >= 0.0)) throw std::invalid_argument("tau grid values must be nonnegative");
    const double mu = settings.population.effect_dist.as_gaussian().mu;
    const auto reps = static_cast<std::size_t>(settings.replicates);
    const std::size_t total = tau_grid.size() * reps;
    std::vector<TTestResult> tests(total);
    parallel_for(total, workers, [&](std::size_t k) {
        const std::size_t t = k / reps;
        const std::size_t r = k % reps;
        Rng rng = substream(seed, {tag, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(r)});
        PopulationSpec pop = settings.population;
        pop.effect_dist = EffectDistribution::gaussian(mu, tau_grid[t]);
        CohortData sample;
        if (settings.validation_mode) {
            sample = draw_case_control(generate_population(pop, rng), settings.n_per_arm, rng);
        } else {
            const SnpParameters snps = draw_snp_parameters(pop, rng);
            sample = sample_case_control(snps, pop.prevalence, settings.n_per_arm, rng);
        }
        const auto g = allele_counts(sample, std::vector<std::uint8_t>(sample.snp_count(), 1));
        const auto n = static_cast<std::size_t>(settings.n_per_arm);
        tests[k] = allele_count_t_test(std::span<const int>(g.data(), n), std::span<const int>(g.data() + n, n),
                                       settings.alpha);
    });
    std::vector<PowerResult> out;
    for (std::size_t t = 0; t < tau_grid.size(); ++t) {
        PowerResult p;
        p.tau = tau_grid[t];
        p.alpha = settings.alpha;
        p.replicates = settings.replicates;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& test = tests[t * reps + r];
            if (!test.defined) ++p.undefined;
            if (test.reject) ++p.rejections;
            p.p_values.push_back(test.p_value);
        }
        p.power = static_cast<double>(p.rejections) / p.replicates;
        out.push_back(p);
    }
    return out;
}

}  // namespace burdenbias
