#include "burdenbias/cohort.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace burdenbias {

std::size_t CohortData::case_count() const {
    return static_cast<std::size_t>(std::count_if(outcomes.begin(), outcomes.end(), [](std::uint8_t y) { return y != 0; }));
}

void CohortData::check_invariants() const {
    for (std::size_t j = 0; j < carriers.size(); ++j) {
        const auto& list = carriers[j];
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (list[k] >= size())
                throw std::logic_error("SNP " + std::to_string(j) + ": carrier index " + std::to_string(list[k]) +
                                       " outside cohort of " + std::to_string(size()));
            if (k > 0 && list[k] <= list[k - 1])
                throw std::logic_error("SNP " + std::to_string(j) + ": carrier list unsorted or repeated");
        }
    }
    if (!snp_gammas.empty() && snp_gammas.size() != carriers.size())
        throw std::logic_error("effect vector length does not match SNP count");
    if (!snp_mafs.empty() && snp_mafs.size() != carriers.size())
        throw std::logic_error("MAF vector length does not match SNP count");
}

}  // namespace burdenbias
