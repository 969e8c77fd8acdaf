#include "burdenbias/simulation.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

using namespace burdenbias;

namespace {

SnpParameters spread_snps(int m, double f, double lo, double hi) {
    SnpParameters p;
    for (int j = 0; j < m; ++j) {
        p.gammas.push_back(lo + (hi - lo) * j / (m - 1));
        p.mafs.push_back(f);
    }
    return p;
}

bool same_cohort(const CohortData& a, const CohortData& b) {
    return a.outcomes == b.outcomes && a.carriers == b.carriers && a.snp_gammas == b.snp_gammas &&
           a.snp_mafs == b.snp_mafs;
}

}  // namespace

TEST_CASE("beta MAF shapes and draws") {
    const auto spec = MafSpec::beta(0.12, 0.02);
    const auto [a, b] = spec.beta_shapes();
    CHECK(a / (a + b) == doctest::Approx(0.12));
    CHECK(std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1))) == doctest::Approx(0.02));
    Rng rng = substream(3, {});
    double s = 0, ss = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double f = spec.draw(rng);
        s += f;
        ss += f * f;
    }
    const double mean = s / n;
    CHECK(std::abs(mean - 0.12) < 3 * 0.02 / std::sqrt(n));
    CHECK(std::sqrt(ss / n - mean * mean) == doctest::Approx(0.02).epsilon(0.01));
    CHECK_THROWS_AS(MafSpec::beta(0.5, 0.6).validate(), std::invalid_argument);
    CHECK_THROWS_AS(MafSpec::fixed(0.7).validate(), std::invalid_argument);
}

TEST_CASE("sparse and dense generators agree") {
    PopulationSpec spec;
    spec.snp_count = 30;
    spec.maf = MafSpec::fixed(0.03);
    spec.effect_dist = EffectDistribution::gaussian(0.1, 0.8);
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng r1 = substream(s, {7});
        Rng r2 = substream(s, {7});
        const auto snps = draw_snp_parameters(spec, r1);
        draw_snp_parameters(spec, r2);
        const auto sparse = generate_cohort(snps, 0.05, 10'000, r1);
        const auto dense = generate_cohort_dense(snps, 0.05, 10'000, r2);
        CHECK(same_cohort(sparse, dense));
        CHECK_NOTHROW(sparse.check_invariants());
    }
    Rng rng = substream(0, {});
    const auto snps = spread_snps(50, 0.01, 0, 0);
    CHECK_THROWS_AS(generate_cohort_dense(snps, 0.05, 1'000'000, rng, 1'000'000), BudgetExceeded);
}

TEST_CASE("generated cohorts") {
    PopulationSpec spec;
    spec.population_size = 400'000;
    spec.snp_count = 50;
    spec.maf = MafSpec::fixed(0.01);
    spec.effect_dist = EffectDistribution::gaussian(0.0, 0.6);
    spec.prevalence = 0.05;
    Rng rng = substream(99, {1});
    const auto pop = generate_population(spec, rng);
    CHECK_NOTHROW(pop.check_invariants());

    const auto g = allele_counts(pop, std::vector<std::uint8_t>(50, 1));
    double total = 0;
    long long zero = 0, zero_cases = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        total += g[i];
        if (g[i] == 0) {
            ++zero;
            zero_cases += pop.outcomes[i];
        }
    }
    // 50 SNPs at f = 0.01: half a minor allele per person
    CHECK(std::abs(total / g.size() - 0.5) < 4 * std::sqrt(0.5 * 0.99 / g.size()));
    const double rate = static_cast<double>(zero_cases) / zero;
    CHECK(std::abs(rate - 0.05) < 3 * std::sqrt(0.05 * 0.95 / zero));

    SUBCASE("null effects leave prevalence at K") {
        SnpParameters null = spread_snps(50, 0.01, 0.0, 0.0);
        const auto c = generate_cohort(null, 0.2, 200'000, rng);
        const double p = static_cast<double>(c.case_count()) / c.size();
        CHECK(std::abs(p - 0.2) < 3 * std::sqrt(0.2 * 0.8 / c.size()));
    }
    SUBCASE("prospective cohorts keep the SNP parameters") {
        SnpParameters snps{pop.snp_gammas, pop.snp_mafs};
        const auto c = draw_prospective(snps, 0.05, 1'000'000, rng);
        CHECK(c.snp_gammas == pop.snp_gammas);
        double carriers = 0;
        for (const auto& l : c.carriers) carriers += l.size();
        CHECK(std::abs(carriers / 50 - 10'000) < 4 * std::sqrt(10'000.0 / 50));
    }
}

TEST_CASE("case-control draws") {
    PopulationSpec spec;
    spec.population_size = 100'000;
    spec.snp_count = 20;
    spec.prevalence = 0.5;
    Rng rng = substream(5, {});
    const auto pop = generate_population(spec, rng);
    const auto cc = draw_case_control(pop, 100, rng);
    CHECK(cc.size() == 200);
    CHECK(cc.case_count() == 100);
    for (int i = 0; i < 100; ++i) CHECK(cc.outcomes[i] == 1);
    CHECK_NOTHROW(cc.check_invariants());
    CHECK_THROWS_AS(draw_case_control(pop, 0, rng), std::invalid_argument);

    spec.population_size = 1000;
    spec.prevalence = 0.01;
    const auto small = generate_population(spec, rng);
    try {
        draw_case_control(small, 100, rng);
        FAIL("expected an error");
    } catch (const InsufficientIndividuals& e) {
        CHECK(std::string(e.what()).find("cases") != std::string::npos);
    }
    const SnpParameters snps = spread_snps(5, 0.01, 0, 0);
    CHECK_THROWS_AS(sample_case_control(snps, 0.001, 100, rng, 10'000), InsufficientIndividuals);
}

TEST_CASE("phase-one exposure and ascertainment follow the analytic forms") {
    const double f = 0.01, K = 0.05;
    const int N = 100, reps = 2000;
    const SnpParameters snps = spread_snps(9, f, -2.0, 2.0);
    std::vector<double> case_carriers(9), control_carriers(9), polymorphic(9);
    for (int r = 0; r < reps; ++r) {
        Rng rng = substream(77, {static_cast<std::uint64_t>(r)});
        const auto cc = sample_case_control(snps, K, N, rng);
        const auto mask = classify_snps(cc);
        for (int j = 0; j < 9; ++j) {
            for (auto i : cc.carriers[j]) (i < static_cast<std::uint32_t>(N) ? case_carriers : control_carriers)[j] += 1;
            polymorphic[j] += mask[j] == SnpStatus::PreviouslyPolymorphic;
        }
    }
    const double n_arm = static_cast<double>(N) * reps;
    for (int j = 0; j < 9; ++j) {
        const double gamma = snps.gammas[j];
        const double pa = exposure_prob(Arm::Cases, f, K, gamma);
        const double pc = exposure_prob(Arm::Controls, f, K, gamma);
        CHECK(std::abs(case_carriers[j] / n_arm - pa) < 3 * std::sqrt(pa * (1 - pa) / n_arm));
        CHECK(std::abs(control_carriers[j] / n_arm - pc) < 3 * std::sqrt(pc * (1 - pc) / n_arm));
        const double q = ascertainment_prob(f, K, gamma, N);
        CHECK(std::abs(polymorphic[j] / reps - q) < 3 * std::sqrt(q * (1 - q) / reps));
    }
    // risk-raising SNPs are enriched among sampled cases
    CHECK(case_carriers[8] > case_carriers[4]);
    CHECK(case_carriers[4] > case_carriers[0]);
}

TEST_CASE("classification") {
    CohortData c;
    c.outcomes = {1, 0};
    c.carriers = {{}, {0}, {0, 1}};
    const auto mask = classify_snps(c);
    CHECK(mask[0] == SnpStatus::Novel);
    CHECK(mask[1] == SnpStatus::PreviouslyPolymorphic);
    CHECK(mask[2] == SnpStatus::PreviouslyPolymorphic);

    // common SNPs are essentially never novel
    const SnpParameters snps = spread_snps(10, 0.2, 0, 0);
    Rng rng = substream(1, {});
    const auto cc = sample_case_control(snps, 0.05, 100, rng);
    for (auto s : classify_snps(cc)) CHECK(s == SnpStatus::PreviouslyPolymorphic);
}

TEST_CASE("replicates are deterministic across workers") {
    SimulationSettings s;
    s.population.snp_count = 50;
    s.population.maf = MafSpec::fixed(0.005);
    s.population.prevalence = 0.05;
    s.cohort_size = 20'000;
    s.replicates = 12;
    const auto a = run_replicates(s, 42, 1);
    const auto b = run_replicates(s, 42, 4);
    std::ostringstream sa, sb;
    a.write_csv(sa);
    b.write_csv(sb);
    CHECK(sa.str() == sb.str());
    CHECK(a.rows.size() == 36);
    CHECK(sa.str().rfind("replicate,snp_class,g_level,n_g0,n_g1,cases_g0,cases_g1,lor,se,status\n", 0) == 0);
    const auto c = run_replicates(s, 43, 1);
    std::ostringstream sc;
    c.write_csv(sc);
    CHECK(sc.str() != sa.str());

    s.validation_mode = true;
    s.population.population_size = 50'000;
    const auto v1 = run_replicates(s, 42, 1);
    const auto v2 = run_replicates(s, 42, 3);
    CHECK(v1.estimates(SnpClass::Novel, 1) == v2.estimates(SnpClass::Novel, 1));
}

TEST_CASE("strong null replicates centre on zero") {
    SimulationSettings s;
    s.population.effect_dist = EffectDistribution::point_mass(0.0);
    s.population.maf = MafSpec::fixed(0.01);
    s.cohort_size = 50'000;
    s.replicates = 100;
    const auto t = run_replicates(s, 8, 1);
    for (SnpClass c : s.classes) {
        const auto& sum = t.summary_for(c, 1);
        CHECK(sum.n_effective > 90);
        CHECK(std::abs(sum.mean) < 3 * sum.se);
        CHECK(std::abs(sum.ivw_mean) < 3 * sum.ivw_se);
    }
}

TEST_CASE("replicate means approach the quadrature values") {
    SimulationSettings s;
    s.population.effect_dist = EffectDistribution::gaussian(0.0, 0.6);
    s.population.maf = MafSpec::fixed(0.005);
    s.population.prevalence = 0.05;
    s.cohort_size = 100'000;
    s.replicates = 100;
    const auto t = run_replicates(s, 2718, 1);
    StudyDesign d;
    d.prevalence = 0.05;
    d.maf = 0.005;
    for (SnpClass c : s.classes) {
        const double theory = phase_two_burden(s.population.effect_dist, d, c, 1).value;
        const auto& sum = t.summary_for(c, 1);
        CHECK(std::abs(sum.mean - theory) < std::max(0.05, 3 * sum.se));
    }

    SimulationSettings p = s;
    p.design = SamplingDesign::Prospective;
    p.classes = {SnpClass::All};
    p.g_levels = {1, 2};
    p.population.maf = MafSpec::fixed(0.01);
    const auto tp = run_replicates(p, 1, 1);
    for (int g : {1, 2}) {
        const double theory = burden_lor_quadrature(p.population.effect_dist, 0.05, g);
        const auto& sum = tp.summary_for(SnpClass::All, g);
        CHECK(std::abs(sum.mean - theory) < std::max(0.05, 3 * sum.se));
    }
}

TEST_CASE("settings validation") {
    SimulationSettings s;
    s.design = SamplingDesign::Prospective;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.classes = {SnpClass::All};
    CHECK_NOTHROW(s.validate());
    s.g_levels = {0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.g_levels = {1};
    s.population.maf = MafSpec::fixed(0.7);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("power sweep") {
    PowerSettings p;
    p.population.snp_count = 40;
    p.population.maf = MafSpec::beta(0.12, 0.02);
    p.replicates = 100;
    const auto a = power_sweep(p, {0.0, 0.8}, 5, 1);
    const auto b = power_sweep(p, {0.0, 0.8}, 5, 3);
    REQUIRE(a.size() == 2);
    CHECK(a[0].p_values == b[0].p_values);
    CHECK(a[1].rejections == b[1].rejections);
    CHECK(a[1].power > a[0].power);
    CHECK(a[1].power == static_cast<double>(a[1].rejections) / a[1].replicates);
    p.population.effect_dist = make_matched_t(3, EffectDistribution::gaussian(0, 0.6), 4);
    CHECK_THROWS_AS(power_sweep(p, {0.1}, 5, 1), std::invalid_argument);
}
