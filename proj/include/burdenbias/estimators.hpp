#pragma once

#include "burdenbias/analytic.hpp"
#include "burdenbias/cohort.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace burdenbias {

enum class EstimateStatus { Ok, ZeroCellCorrected, Undefined };

std::string_view to_string(EstimateStatus s);

/// Affected/unaffected counts at g = 0 and at the contrasted level.
struct CellCounts {
    long long cases_g0 = 0;
    long long controls_g0 = 0;
    long long cases_g = 0;
    long long controls_g = 0;

    long long n_g0() const { return cases_g0 + controls_g0; }
    long long n_g() const { return cases_g + controls_g; }
};

struct BurdenEstimate {
    SnpClass snp_class = SnpClass::All;
    int g_contrast = 1;
    double lor = 0.0;
    double se = 0.0;
    CellCounts cells;
    EstimateStatus status = EstimateStatus::Undefined;
};

/// Per-SNP inclusion flags for a class. SnpClass::All ignores the mask.
std::vector<std::uint8_t> select_snps(SnpClass cls, const SnpClassMask& mask, std::size_t snp_count);

/// Per-person minor allele count over the included SNPs.
std::vector<int> allele_counts(const CohortData& cohort, const std::vector<std::uint8_t>& included);

/// 2x2 log odds ratio with Woolf SE. A zero cell adds 0.5 to all four cells;
/// an empty g level gives Undefined.
BurdenEstimate burden_from_cells(const CellCounts& cells, SnpClass cls, int g_level);

BurdenEstimate empirical_burden_lor(const CohortData& cohort, SnpClass cls, const SnpClassMask& mask, int g_level);
BurdenEstimate empirical_burden_lor(const CohortData& cohort, int g_level);

struct LogisticFit {
    double beta = 0.0;
    double intercept = 0.0;
    double se = 0.0;
    int iterations = 0;
    EstimateStatus status = EstimateStatus::Undefined;
    std::string diagnostic;
};

/// Maximum likelihood for logit Pr{Y=1|g} = a + beta g by IRLS on grouped counts.
/// Stops when the score norm drops below 1e-10 or after 50 iterations.
LogisticFit fit_logistic(std::span<const int> counts, std::span<const std::uint8_t> outcomes);
LogisticFit fit_logistic_burden(const CohortData& cohort, SnpClass cls, const SnpClassMask& mask);

struct TTestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool reject = false;
    bool defined = true;
};

/// Welch two-sample t-test, two-sided.
TTestResult allele_count_t_test(std::span<const int> case_counts, std::span<const int> control_counts, double alpha);

}  // namespace burdenbias
