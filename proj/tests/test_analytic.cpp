#include "burdenbias/analytic.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace burdenbias;

namespace {

// E[expit(alpha + X)] for X ~ N(mean, sd) by Simpson over +-12 sd.
double normal_expit_oracle(double alpha, double mean, double sd) {
    return oracle::simpson([&](double x) { return oracle::normal_pdf(x, mean, sd) * oracle::expit(alpha + x); },
                           mean - 12 * sd, mean + 12 * sd, 20000);
}

double ascertainment_oracle(double f, double K, double gamma, int N) {
    const double pa = oracle::exposure_bayes(true, f, K, gamma);
    const double pc = oracle::exposure_bayes(false, f, K, gamma);
    return 1.0 - std::pow(1.0 - pa, N) * std::pow(1.0 - pc, N);
}

StudyDesign design(double K, double f, int N) {
    StudyDesign d;
    d.prevalence = K;
    d.maf = f;
    d.n_per_arm = N;
    return d;
}

}  // namespace

TEST_CASE("closed form reproduces the prospective tables") {
    // left numbers of the prevalence, SD and mean sweeps (g = 1, 2, 3)
    struct Cell {
        double mu, tau, K;
        double v[3];
    };
    const std::vector<Cell> cells{
        {0, 0.6, 0.2, {0.09, 0.16, 0.22}},     {0, 0.6, 0.1, {0.14, 0.26, 0.35}},
        {0, 0.6, 0.05, {0.19, 0.34, 0.48}},    {0, 0.6, 0.01, {0.29, 0.54, 0.74}},
        {0, 0.25, 0.05, {0.04, 0.07, 0.10}},   {0, 0.5, 0.05, {0.13, 0.25, 0.35}},
        {0, 0.75, 0.05, {0.28, 0.49, 0.66}},   {0, 1.0, 0.05, {0.45, 0.74, 0.95}},
        {0, 1.25, 0.05, {0.62, 0.97, 1.19}},
        // mean rows are printed rounded; the means are log odds ratios 0.625 .. 2.5
        {std::log(0.625), 0.7, 0.05, {-0.18, -0.36, -0.53}},
        {0, 0.7, 0.05, {0.25, 0.44, 0.60}},
        {std::log(1.3), 0.7, 0.05, {0.49, 0.89, 1.22}},
        {std::log(1.6), 0.7, 0.05, {0.68, 1.24, 1.72}},
        {std::log(2.0), 0.7, 0.05, {0.88, 1.62, 2.26}},
        {std::log(2.5), 0.7, 0.05, {1.09, 2.00, 2.79}},
    };
    for (const auto& c : cells)
        for (int g = 1; g <= 3; ++g) CHECK(std::abs(burden_lor_closed_form(c.mu, c.tau, c.K, g) - c.v[g - 1]) <= 0.005);

    CHECK(burden_lor_closed_form(0.0, 0.0, 0.3, 1) == 0.0);
    CHECK(burden_lor_closed_form(0.4, 0.0, 0.01, 2) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(burden_lor_closed_form(0, 0.6, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(burden_lor_closed_form(0, 0.6, 1.0, 1), std::domain_error);
}

TEST_CASE("closed form is linear in mu with slope g/s") {
    for (int g = 1; g <= 3; ++g) {
        const double s = std::sqrt(1.0 + 0.7 * 0.7 * g / (1.6 * 1.6));
        const double b0 = burden_lor_closed_form(0.0, 0.7, 0.05, g);
        for (double mu : {-0.5, 0.3, 1.1})
            CHECK(burden_lor_closed_form(mu, 0.7, 0.05, g) - b0 == doctest::Approx(mu * g / s).epsilon(1e-12));
    }
}

TEST_CASE("marginal probability given g") {
    CHECK(marginal_prob_given_g(EffectDistribution::gaussian(0, 0.6), 0.05, 0) == 0.05);
    CHECK(marginal_prob_given_g(EffectDistribution::point_mass(0.5), 0.05, 1) ==
          doctest::Approx(oracle::expit(oracle::logit(0.05) + 0.5)).epsilon(1e-14));

    const double alpha = oracle::logit(0.05);
    const auto g = EffectDistribution::gaussian(0.0, 0.6);
    const double p1 = marginal_prob_given_g(g, 0.05, 1);
    CHECK(p1 == doctest::Approx(normal_expit_oracle(alpha, 0, 0.6)).epsilon(1e-10));
    CHECK(p1 == doctest::Approx(0.0585).epsilon(0.005));
    // tensor products of IID Gaussians against the exact Gaussian law of the sum
    const auto h = EffectDistribution::gaussian(0.2, 0.7);
    CHECK(marginal_prob_given_g(h, 0.05, 2) ==
          doctest::Approx(normal_expit_oracle(alpha, 0.4, 0.7 * std::sqrt(2.0))).epsilon(1e-10));
    CHECK(marginal_prob_given_g(h, 0.05, 3) ==
          doctest::Approx(normal_expit_oracle(alpha, 0.6, 0.7 * std::sqrt(3.0))).epsilon(1e-10));
}

TEST_CASE("tensor limit and Monte Carlo fallback") {
    const auto h = EffectDistribution::gaussian(0.0, 0.6);
    CHECK_THROWS_AS(marginal_prob_given_g(h, 0.05, 4), std::invalid_argument);
    QuadratureOptions opts;
    opts.monte_carlo_fallback = true;
    opts.mc_draws = 400'000;
    const auto est = marginal_prob_given_g_mc([&](Rng& r) { return h.sample(r); }, 0.05, 4, opts.mc_draws, 9);
    const double exact = normal_expit_oracle(oracle::logit(0.05), 0.0, 1.2);
    CHECK(est.se > 0.0);
    CHECK(std::abs(est.value - exact) < 4 * est.se);
    CHECK(std::abs(marginal_prob_given_g(h, 0.05, 4, opts) - exact) < 0.002);
}

TEST_CASE("burden lOR by quadrature") {
    const auto g = EffectDistribution::gaussian(0.0, 0.6);
    CHECK(std::abs(burden_lor_quadrature(g, 0.05, 1) - 0.16) <= 0.005);
    const double at20 = burden_lor_quadrature(g, 0.2, 1);
    CHECK(at20 >= 0.09);
    CHECK(at20 <= 0.10);
    CHECK(burden_lor_quadrature(EffectDistribution::point_mass(0.5), 0.3, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(burden_lor_quadrature(EffectDistribution::point_mass(0.0), 0.05, 2)) < 1e-12);
    // weak null: nonzero burden effect
    CHECK(burden_lor_quadrature(g, 0.05, 1) > 0.1);
}

TEST_CASE("exposure probabilities") {
    CHECK(exposure_prob(Arm::Cases, 0.01, 0.05, 0.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(exposure_prob(Arm::Controls, 0.01, 0.05, 0.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(exposure_prob(Arm::Cases, 0.01, 0.05, std::log(2.0)) == doctest::Approx(0.018877).epsilon(1e-5));
    for (double K : {0.001, 0.05, 0.3})
        for (double f : {0.001, 0.01, 0.2})
            for (double gamma : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
                CHECK(exposure_prob(Arm::Cases, f, K, gamma) ==
                      doctest::Approx(oracle::exposure_bayes(true, f, K, gamma)).epsilon(1e-12));
                CHECK(exposure_prob(Arm::Controls, f, K, gamma) ==
                      doctest::Approx(oracle::exposure_bayes(false, f, K, gamma)).epsilon(1e-12));
            }
    double prev_case = 0.0;
    double prev_control = 1.0;
    for (double gamma = -3.0; gamma <= 3.0; gamma += 0.25) {
        const double pa = exposure_prob(Arm::Cases, 0.01, 0.05, gamma);
        const double pc = exposure_prob(Arm::Controls, 0.01, 0.05, gamma);
        CHECK(pa > prev_case);
        CHECK(pc < prev_control);
        CHECK(pa > 0.0);
        CHECK(pa < 1.0);
        CHECK(pc > 0.0);
        CHECK(pc < 1.0);
        prev_case = pa;
        prev_control = pc;
    }
}

TEST_CASE("ascertainment probability") {
    CHECK(ascertainment_prob(0.005, 0.05, 0.0, 100, AscertainmentMethod::Poisson) ==
          doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(ascertainment_prob(0.005, 1e-12, 0.0, 100) == doctest::Approx(1 - std::pow(0.995, 200)).epsilon(1e-9));
    CHECK(ascertainment_prob(0.005, 1e-12, 0.0, 100) == doctest::Approx(0.63305).epsilon(1e-5));
    CHECK(ascertainment_prob(0.0, 0.05, 1.0, 100) == 0.0);
    CHECK(ascertainment_prob(0.0, 0.05, 1.0, 100, AscertainmentMethod::Poisson) == 0.0);
    for (double gamma : {-1.5, 0.0, 0.9})
        CHECK(ascertainment_prob(0.003, 0.02, gamma, 150) ==
              doctest::Approx(ascertainment_oracle(0.003, 0.02, gamma, 150)).epsilon(1e-12));

    // monotone in f, N and gamma
    for (double gamma = -2; gamma < 2; gamma += 0.5) {
        CHECK(ascertainment_prob(0.005, 0.05, gamma + 0.5, 100) > ascertainment_prob(0.005, 0.05, gamma, 100));
        CHECK(ascertainment_prob(0.006, 0.05, gamma, 100) > ascertainment_prob(0.005, 0.05, gamma, 100));
        CHECK(ascertainment_prob(0.005, 0.05, gamma, 101) > ascertainment_prob(0.005, 0.05, gamma, 100));
    }
}

TEST_CASE("Poisson approximation tracks the exact ascertainment probability") {
    auto max_gap = [](double k_max, double g_max) {
        double gap = 0.0;
        for (double K = 1e-4; K <= k_max * 1.0000001; K *= std::pow(k_max / 1e-4, 1.0 / 12))
            for (double f = 1e-5; f <= 0.01 * 1.0000001; f *= std::pow(1e3, 1.0 / 30))
                for (double gamma = -g_max; gamma <= g_max + 1e-12; gamma += g_max / 20)
                    for (int N : {100, 1000})
                        gap = std::max(gap, std::abs(ascertainment_prob(f, K, gamma, N) -
                                                     ascertainment_prob(f, K, gamma, N, AscertainmentMethod::Poisson)));
        return gap;
    };
    CHECK(max_gap(0.005, 2.0) <= 0.02);
    CHECK(max_gap(0.05, 0.5) <= 0.02);
    // The Poisson form drops the K * OR term, so at K = 5% and OR = e^2 the
    // two differ by about 0.1.
    CHECK(max_gap(0.05, 2.0) > 0.05);
}

TEST_CASE("conditioned effect distributions") {
    const auto base = EffectDistribution::gaussian(0.0, 0.6);
    const auto d = design(0.01, 0.005, 100);
    const auto poly = condition_distribution(base, d, SnpClass::PreviouslyPolymorphic);
    const auto novel = condition_distribution(base, d, SnpClass::Novel);
    const auto all = condition_distribution(base, d, SnpClass::All);
    CHECK(all.normalizer() == 1.0);
    CHECK(poly.moments().mean > 0.0);
    CHECK(novel.moments().mean < 0.0);
    CHECK(poly.normalizer() + novel.normalizer() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(poly.normalizer() * poly.moments().mean + novel.normalizer() * novel.moments().mean) < 1e-6);

    // moments against a Simpson oracle with the Bayes-table weight
    auto w = [&](double x) { return ascertainment_oracle(0.005, 0.01, x, 100); };
    auto dens = [&](double x) { return oracle::normal_pdf(x, 0, 0.6) * w(x); };
    const double z = oracle::simpson(dens, -7.2, 7.2, 20000);
    const double m = oracle::simpson([&](double x) { return x * dens(x); }, -7.2, 7.2, 20000) / z;
    const double v = oracle::simpson([&](double x) { return (x - m) * (x - m) * dens(x); }, -7.2, 7.2, 20000) / z;
    CHECK(poly.normalizer() == doctest::Approx(z).epsilon(1e-9));
    CHECK(poly.moments().mean == doctest::Approx(m).epsilon(1e-8));
    CHECK(poly.moments().sd == doctest::Approx(std::sqrt(v)).epsilon(1e-8));

    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7})
        CHECK(poly.normalizer() * poly.pdf(x) + novel.normalizer() * novel.pdf(x) ==
              doctest::Approx(base.pdf(x)).epsilon(1e-12));

    // a point mass is unchanged by reweighting
    const auto pm = condition_distribution(EffectDistribution::point_mass(0.3), d, SnpClass::PreviouslyPolymorphic);
    CHECK(pm.moments().mean == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(pm.moments().sd == 0.0);
    CHECK(pm.normalizer() == doctest::Approx(ascertainment_prob(0.005, 0.01, 0.3, 100)).epsilon(1e-15));

    CHECK_THROWS_AS(condition_distribution(base, design(0.05, 0.45, 5000), SnpClass::Novel), std::domain_error);
}

TEST_CASE("phase-two burden reproduces the case-control tables") {
    struct Row {
        double mu, tau, K, f;
        int N;
        double all, novel, old;
    };
    const std::vector<Row> rows{
        // prevalence sweep (tau 0.6, MAF 0.005)
        {0, 0.6, 0.2, 0.005, 100, 0.10, -0.01, 0.15},
        {0, 0.6, 0.1, 0.005, 100, 0.13, -0.02, 0.21},
        {0, 0.6, 0.05, 0.005, 100, 0.16, -0.02, 0.24},
        {0, 0.6, 0.01, 0.005, 100, 0.17, -0.03, 0.27},
        {0, 0.6, 0.001, 0.005, 100, 0.18, -0.03, 0.27},
        {0, 0.6, 1e-4, 0.005, 100, 0.18, -0.03, 0.27},
        // SD sweep
        {0, 0.25, 0.05, 0.01, 100, 0.03, -0.03, 0.03},
        {0, 0.5, 0.05, 0.01, 100, 0.11, -0.11, 0.14},
        {0, 0.75, 0.05, 0.01, 100, 0.24, -0.23, 0.29},
        {0, 1.0, 0.05, 0.01, 100, 0.40, -0.36, 0.48},
        {0, 1.25, 0.05, 0.01, 100, 0.58, -0.49, 0.68},
        // mean sweep
        {std::log(0.625), 0.7, 0.05, 0.01, 100, -0.25, -0.56, -0.20},
        {0, 0.7, 0.05, 0.01, 100, 0.21, -0.20, 0.26},
        {std::log(1.3), 0.7, 0.05, 0.01, 100, 0.46, -0.01, 0.51},
        {std::log(1.6), 0.7, 0.05, 0.01, 100, 0.66, 0.13, 0.70},
        {std::log(2.0), 0.7, 0.05, 0.01, 100, 0.87, 0.28, 0.91},
        {std::log(2.5), 0.7, 0.05, 0.01, 100, 1.09, 0.43, 1.11},
        // MAF sweep
        {0, 0.7, 0.05, 0.005, 100, 0.21, -0.03, 0.32},
        {0, 0.7, 0.05, 0.02, 100, 0.21, -0.44, 0.22},
        {0, 0.7, 0.05, 0.03, 100, 0.21, -0.62, 0.21},
        {0, 0.7, 0.05, 0.05, 100, 0.21, -0.88, 0.20},
    };
    for (const auto& r : rows) {
        CAPTURE(r.mu);
        CAPTURE(r.tau);
        CAPTURE(r.K);
        CAPTURE(r.f);
        const auto base = EffectDistribution::gaussian(r.mu, r.tau);
        const auto d = design(r.K, r.f, r.N);
        CHECK(std::abs(phase_two_burden(base, d, SnpClass::All, 1).value - r.all) <= 0.01);
        CHECK(std::abs(phase_two_burden(base, d, SnpClass::Novel, 1).value - r.novel) <= 0.01);
        CHECK(std::abs(phase_two_burden(base, d, SnpClass::PreviouslyPolymorphic, 1).value - r.old) <= 0.01);
    }
    // class All is the unconditioned quadrature
    const auto base = EffectDistribution::gaussian(0.0, 0.6);
    CHECK(phase_two_burden(base, design(0.05, 0.01, 100), SnpClass::All, 1).value ==
          burden_lor_quadrature(base, 0.05, 1));
}

TEST_CASE("ordering and null properties") {
    for (double K : {0.2, 0.05, 0.01, 0.001})
        for (double tau : {0.2, 0.6, 1.2})
            for (double f : {0.002, 0.01}) {
                const auto base = EffectDistribution::gaussian(0.0, tau);
                const auto d = design(K, f, 100);
                const double all = phase_two_burden(base, d, SnpClass::All, 1).value;
                const double prev = phase_two_burden(base, d, SnpClass::PreviouslyPolymorphic, 1).value;
                const double nov = phase_two_burden(base, d, SnpClass::Novel, 1).value;
                CHECK(nov <= all);
                CHECK(all <= prev);
                const double mp = condition_distribution(base, d, SnpClass::PreviouslyPolymorphic).moments().mean;
                const double mr = condition_distribution(base, d, SnpClass::Novel).moments().mean;
                CHECK(mr <= 0.0);
                CHECK(mp >= 0.0);
            }
    const auto null = EffectDistribution::gaussian(0.0, 0.0);
    for (auto cls : {SnpClass::All, SnpClass::PreviouslyPolymorphic, SnpClass::Novel})
        for (int g = 1; g <= 3; ++g) CHECK(std::abs(phase_two_burden(null, design(0.05, 0.01, 100), cls, g).value) < 1e-8);
}

TEST_CASE("doubling the node count changes reported values by less than 1e-6") {
    const QuadratureOptions base_opts;
    const QuadratureOptions fine = base_opts.refined();
    const auto t1 = make_matched_t(1.0, EffectDistribution::gaussian(0, 0.6), 4.0);
    for (const auto& dist : {EffectDistribution::gaussian(0.0, 0.6), EffectDistribution::gaussian(0.3, 1.25), t1}) {
        for (auto cls : {SnpClass::All, SnpClass::PreviouslyPolymorphic, SnpClass::Novel}) {
            const auto d = design(0.01, 0.005, 100);
            CHECK(std::abs(phase_two_burden(dist, d, cls, 1, base_opts).value -
                           phase_two_burden(dist, d, cls, 1, fine).value) < 1e-6);
            const auto c0 = condition_distribution(dist, d, cls, base_opts).moments();
            const auto c1 = condition_distribution(dist, d, cls, fine).moments();
            CHECK(std::abs(c0.mean - c1.mean) < 1e-6);
            CHECK(std::abs(c0.sd - c1.sd) < 1e-6);
        }
        CHECK(std::abs(burden_lor_quadrature(dist, 0.05, 2, base_opts) - burden_lor_quadrature(dist, 0.05, 2, fine)) <
              1e-6);
    }
}

TEST_CASE("curves") {
    CurveSpec spec;
    spec.design = design(0.05, 0.005, 100);
    spec.quantity = CurveQuantity::BetaAll;
    spec.sweep = SweepParameter::Prevalence;
    spec.grid = {1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2};
    const auto pts = curve(spec);
    REQUIRE(pts.size() == spec.grid.size());
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].value <= pts[i - 1].value);

    spec.quantity = CurveQuantity::AscertainmentRatio;
    spec.sweep = SweepParameter::Nf;
    spec.odds_ratio = 1.0;
    spec.grid = {0.05, 0.5, 2.0, 10.0};
    for (const auto& p : curve(spec)) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));

    const auto g = EffectDistribution::gaussian(0, 0.6);
    CHECK(std::abs(burden_lor_closed_form(0, 0.6, 0.05, 1) - burden_lor_quadrature(g, 0.05, 1)) <= 0.05);

    CHECK(parse_curve_quantity("tau_novel") == CurveQuantity::TauNovel);
    CHECK(parse_sweep_parameter("Nf") == SweepParameter::Nf);
    CHECK_THROWS_AS(parse_curve_quantity("beta_everything"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_parameter("size"), std::invalid_argument);

    // parallel evaluation does not change values
    spec.quantity = CurveQuantity::MuPrev;
    spec.grid = {0.1, 0.3, 0.5, 1.0, 3.0};
    const auto serial = curve(spec, 1);
    const auto threaded = curve(spec, 4);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].value == threaded[i].value);
}

TEST_CASE("study design validation") {
    StudyDesign d;
    CHECK_NOTHROW(d.validate());
    d.maf = 0.7;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.maf = 0.01;
    d.prevalence = 1.0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    CHECK(design(0.05, 0.01, 100).threshold() == doctest::Approx(-std::log(0.05 / 0.95)));
}
