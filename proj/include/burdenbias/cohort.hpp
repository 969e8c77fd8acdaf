#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace burdenbias {

/// Individuals with binary outcomes and sparse 0/1 genotypes: carriers[j] is the
/// sorted list of individuals carrying the minor allele of SNP j.
struct CohortData {
    std::vector<std::uint8_t> outcomes;
    std::vector<std::vector<std::uint32_t>> carriers;
    std::vector<double> snp_gammas;
    std::vector<double> snp_mafs;

    std::size_t size() const { return outcomes.size(); }
    std::size_t snp_count() const { return carriers.size(); }
    std::size_t case_count() const;

    /// Throws std::logic_error if a carrier list is unsorted, repeats an
    /// individual or points past the cohort.
    void check_invariants() const;
};

enum class SnpStatus : std::uint8_t { PreviouslyPolymorphic, Novel };

/// Phase-one status of every SNP.
using SnpClassMask = std::vector<SnpStatus>;

}  // namespace burdenbias
