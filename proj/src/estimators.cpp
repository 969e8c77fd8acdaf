#include "burdenbias/estimators.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace burdenbias {

std::string_view to_string(EstimateStatus s) {
    switch (s) {
        case EstimateStatus::Ok: return "ok";
        case EstimateStatus::ZeroCellCorrected: return "zero_cell_corrected";
        case EstimateStatus::Undefined: return "undefined";
    }
    return "?";
}

std::vector<std::uint8_t> select_snps(SnpClass cls, const SnpClassMask& mask, std::size_t snp_count) {
    std::vector<std::uint8_t> included(snp_count, 1);
    if (cls == SnpClass::All) return included;
    if (mask.size() != snp_count) throw std::invalid_argument("select_snps: mask size does not match SNP count");
    const SnpStatus want = cls == SnpClass::Novel ? SnpStatus::Novel : SnpStatus::PreviouslyPolymorphic;
    for (std::size_t j = 0; j < snp_count; ++j) included[j] = mask[j] == want;
    return included;
}

std::vector<int> allele_counts(const CohortData& cohort, const std::vector<std::uint8_t>& included) {
    if (included.size() != cohort.snp_count())
        throw std::invalid_argument("allele_counts: inclusion flags do not match SNP count");
    std::vector<int> g(cohort.size(), 0);
    for (std::size_t j = 0; j < cohort.snp_count(); ++j) {
        if (!included[j]) continue;
        for (std::uint32_t i : cohort.carriers[j]) ++g[i];
    }
    return g;
}

BurdenEstimate burden_from_cells(const CellCounts& cells, SnpClass cls, int g_level) {
    BurdenEstimate est;
    est.snp_class = cls;
    est.g_contrast = g_level;
    est.cells = cells;
    if (cells.n_g0() == 0 || cells.n_g() == 0) {
        est.status = EstimateStatus::Undefined;
        est.lor = std::numeric_limits<double>::quiet_NaN();
        est.se = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    double a = static_cast<double>(cells.cases_g);
    double b = static_cast<double>(cells.controls_g);
    double c = static_cast<double>(cells.cases_g0);
    double d = static_cast<double>(cells.controls_g0);
    est.status = EstimateStatus::Ok;
    if (a == 0 || b == 0 || c == 0 || d == 0) {
        a += 0.5;
        b += 0.5;
        c += 0.5;
        d += 0.5;
        est.status = EstimateStatus::ZeroCellCorrected;
    }
    est.lor = std::log(a) - std::log(b) - std::log(c) + std::log(d);
    est.se = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
    return est;
}

BurdenEstimate empirical_burden_lor(const CohortData& cohort, SnpClass cls, const SnpClassMask& mask, int g_level) {
    if (g_level < 1) throw std::invalid_argument("empirical_burden_lor: g_level must be >= 1");
    const auto g = allele_counts(cohort, select_snps(cls, mask, cohort.snp_count()));
    CellCounts cells;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const bool y = cohort.outcomes[i] != 0;
        if (g[i] == 0) {
            (y ? cells.cases_g0 : cells.controls_g0) += 1;
        } else if (g[i] == g_level) {
            (y ? cells.cases_g : cells.controls_g) += 1;
        }
    }
    return burden_from_cells(cells, cls, g_level);
}

BurdenEstimate empirical_burden_lor(const CohortData& cohort, int g_level) {
    return empirical_burden_lor(cohort, SnpClass::All, {}, g_level);
}

LogisticFit fit_logistic(std::span<const int> counts, std::span<const std::uint8_t> outcomes) {
    if (counts.size() != outcomes.size()) throw std::invalid_argument("fit_logistic: length mismatch");
    LogisticFit fit;
    struct Group {
        double n = 0;
        double cases = 0;
    };
    std::map<int, Group> groups;
    long long total_cases = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto& grp = groups[counts[i]];
        grp.n += 1;
        grp.cases += outcomes[i] ? 1 : 0;
        total_cases += outcomes[i] ? 1 : 0;
    }
    const auto n = static_cast<long long>(counts.size());
    if (n == 0 || total_cases == 0 || total_cases == n) {
        fit.diagnostic = "all outcomes identical";
        return fit;
    }
    if (groups.size() < 2) {
        fit.diagnostic = "fewer than two distinct allele counts";
        return fit;
    }
    int min_case = std::numeric_limits<int>::max(), max_case = std::numeric_limits<int>::min();
    int min_control = min_case, max_control = max_case;
    for (const auto& [g, grp] : groups) {
        if (grp.cases > 0) {
            min_case = std::min(min_case, g);
            max_case = std::max(max_case, g);
        }
        if (grp.cases < grp.n) {
            min_control = std::min(min_control, g);
            max_control = std::max(max_control, g);
        }
    }
    if (!(min_case < max_control && min_control < max_case)) {
        fit.diagnostic = "complete or quasi-complete separation of outcomes by allele count";
        return fit;
    }

    const double ybar = static_cast<double>(total_cases) / static_cast<double>(n);
    double a = std::log(ybar / (1.0 - ybar));
    double b = 0.0;
    double i00 = 0, i01 = 0, i11 = 0;
    for (fit.iterations = 0; fit.iterations < 50; ++fit.iterations) {
        double u0 = 0, u1 = 0;
        i00 = i01 = i11 = 0;
        for (const auto& [g, grp] : groups) {
            const double p = expit(a + b * g);
            const double r = grp.cases - grp.n * p;
            const double w = grp.n * p * (1.0 - p);
            u0 += r;
            u1 += r * g;
            i00 += w;
            i01 += w * g;
            i11 += w * g * g;
        }
        if (std::hypot(u0, u1) < 1e-10) break;
        const double det = i00 * i11 - i01 * i01;
        const double da = (i11 * u0 - i01 * u1) / det;
        const double db = (i00 * u1 - i01 * u0) / det;
        a += da;
        b += db;
        if (std::abs(da) + std::abs(db) < 1e-14 * (1.0 + std::abs(a) + std::abs(b))) {
            ++fit.iterations;
            break;
        }
    }
    const double det = i00 * i11 - i01 * i01;
    fit.beta = b;
    fit.intercept = a;
    fit.se = std::sqrt(i00 / det);
    if (!std::isfinite(fit.beta) || !std::isfinite(fit.se) || fit.se <= 0.0) {
        fit.status = EstimateStatus::Undefined;
        fit.diagnostic = "IRLS diverged";
    } else {
        fit.status = EstimateStatus::Ok;
    }
    return fit;
}

LogisticFit fit_logistic_burden(const CohortData& cohort, SnpClass cls, const SnpClassMask& mask) {
    const auto g = allele_counts(cohort, select_snps(cls, mask, cohort.snp_count()));
    return fit_logistic(g, cohort.outcomes);
}

TTestResult allele_count_t_test(std::span<const int> case_counts, std::span<const int> control_counts, double alpha) {
    if (case_counts.empty() || control_counts.empty())
        throw std::invalid_argument("allele_count_t_test: both arms must be nonempty");
    auto stats = [](std::span<const int> xs) {
        double mean = 0.0;
        for (int x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (int x : xs) ss += (x - mean) * (x - mean);
        const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
        return std::pair{mean, var};
    };
    const auto [m1, v1] = stats(case_counts);
    const auto [m2, v2] = stats(control_counts);
    const double n1 = static_cast<double>(case_counts.size());
    const double n2 = static_cast<double>(control_counts.size());
    TTestResult out;
    const double s1 = v1 / n1;
    const double s2 = v2 / n2;
    if (s1 + s2 == 0.0) {
        out.defined = false;
        out.statistic = std::numeric_limits<double>::quiet_NaN();
        out.df = std::numeric_limits<double>::quiet_NaN();
        out.p_value = std::numeric_limits<double>::quiet_NaN();
        out.reject = false;
        return out;
    }
    out.statistic = (m1 - m2) / std::sqrt(s1 + s2);
    const double denom = (n1 > 1 ? s1 * s1 / (n1 - 1) : 0.0) + (n2 > 1 ? s2 * s2 / (n2 - 1) : 0.0);
    out.df = (s1 + s2) * (s1 + s2) / denom;
    const boost::math::students_t_distribution<double> t(out.df);
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(out.statistic))));
    out.reject = out.p_value < alpha;
    return out;
}

}  // namespace burdenbias
