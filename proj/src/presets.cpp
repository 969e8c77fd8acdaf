#include "burdenbias/scenario.hpp"

#include <array>
#include <cmath>
#include <map>

namespace burdenbias {

namespace {

struct Row {
    const char* label;
    double value;
    // (theory, simulation) for three columns: g = 1, 2, 3 or all, novel, old
    std::array<const char*, 6> cells;
};

Scenario table(const char* id, const char* citation, SamplingDesign design, RowSweep sweep, double tau,
               double maf, const std::vector<Row>& rows) {
    Scenario s;
    s.id = id;
    s.citation = citation;
    s.kind = ScenarioKind::Table;
    s.design = design;
    s.prevalence = 0.05;
    s.maf = MafSpec::fixed(maf);
    s.n_per_arm = 100;
    s.snp_count = 50;
    s.population_size = 1'000'000;
    s.cohort_size = 1'000'000;
    s.replicates = 2000;
    s.dist = EffectDistribution::gaussian(0.0, tau);
    s.sweep = sweep;
    if (design == SamplingDesign::Prospective) {
        s.g_levels = {1, 2, 3};
        s.classes = {SnpClass::All};
        s.paper_method = BurdenMethod::ClosedForm;
    } else {
        s.g_levels = {1};
        s.classes = {SnpClass::All, SnpClass::Novel, SnpClass::PreviouslyPolymorphic};
        s.paper_method = BurdenMethod::Quadrature;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        s.rows.push_back({rows[r].label, rows[r].value});
        for (int c = 0; c < 3; ++c) {
            PaperCell cell;
            cell.row = static_cast<int>(r);
            if (design == SamplingDesign::Prospective) {
                cell.g_level = c + 1;
            } else {
                cell.snp_class = s.classes[c];
            }
            cell.theory = rows[r].cells[2 * c];
            cell.sim = rows[r].cells[2 * c + 1];
            s.paper.push_back(cell);
        }
    }
    return s;
}

// The mean rows are printed as rounded log odds ratios.
const double kLogMu[] = {std::log(0.625), 0.0, std::log(1.3), std::log(1.6), std::log(2.0), std::log(2.5)};

Scenario build_table(std::string_view id) {
    using enum SamplingDesign;
    if (id == "table-s1")
        return table("table-s1",
                     "Table S1: lOR of outcome by number of derived alleles, varying prevalence of disease "
                     "(prospective sampling design)",
                     Prospective, RowSweep::Prevalence, 0.6, 0.01,
                     {{"0.2", 0.2, {"0.09", "0.09", "0.16", "0.17", "0.22", "0.23"}},
                      {"0.1", 0.1, {"0.14", "0.13", "0.26", "0.24", "0.35", "0.33"}},
                      {"0.05", 0.05, {"0.19", "0.15", "0.34", "0.28", "0.48", "0.40"}},
                      {"0.01", 0.01, {"0.29", "0.18", "0.54", "0.33", "0.74", "0.48"}}});
    if (id == "table-s2")
        return table("table-s2",
                     "Table S2: lOR of outcome by number of derived alleles, varying SD of SNP effects "
                     "(prospective sampling design)",
                     Prospective, RowSweep::Tau, 0.6, 0.01,
                     {{"0.25", 0.25, {"0.04", "0.03", "0.07", "0.05", "0.10", "0.07"}},
                      {"0.5", 0.5, {"0.13", "0.10", "0.25", "0.20", "0.35", "0.28"}},
                      {"0.75", 0.75, {"0.28", "0.23", "0.49", "0.42", "0.66", "0.57"}},
                      {"1", 1.0, {"0.45", "0.38", "0.74", "0.65", "0.95", "0.85"}},
                      {"1.25", 1.25, {"0.62", "0.55", "0.97", "0.89", "1.19", "1.11"}}});
    if (id == "table-s3")
        return table("table-s3",
                     "Table S3: lOR of outcome by number of derived alleles, varying mean of SNP effects "
                     "(prospective sampling design)",
                     Prospective, RowSweep::Mu, 0.7, 0.01,
                     {{"-0.47", kLogMu[0], {"-0.18", "-0.25", "-0.36", "-0.52", "-0.53", "-0.79"}},
                      {"0", kLogMu[1], {"0.25", "0.21", "0.44", "0.38", "0.60", "0.52"}},
                      {"0.26", kLogMu[2], {"0.49", "0.46", "0.89", "0.86", "1.22", "1.21"}},
                      {"0.47", kLogMu[3], {"0.68", "0.66", "1.24", "1.24", "1.72", "1.74"}},
                      {"0.69", kLogMu[4], {"0.88", "0.87", "1.62", "1.62", "2.26", "2.25"}},
                      {"0.92", kLogMu[5], {"1.09", "1.08", "2.00", "2.01", "2.79", "2.80"}}});
    if (id == "table-s4")
        return table("table-s4",
                     "Table S4: lOR of outcome by number of derived alleles, varying SNP MAF "
                     "(prospective sampling design)",
                     Prospective, RowSweep::Maf, 0.7, 0.01,
                     {{"0.005", 0.005, {"0.25", "0.20", "0.44", "0.37", "0.60", "0.51"}},
                      {"0.01", 0.01, {"0.25", "0.19", "0.44", "0.36", "0.60", "0.49"}},
                      {"0.02", 0.02, {"0.25", "0.21", "0.44", "0.38", "0.60", "0.52"}},
                      {"0.03", 0.03, {"0.25", "0.20", "0.44", "0.37", "0.60", "0.51"}},
                      {"0.05", 0.05, {"0.25", "0.20", "0.44", "0.37", "0.60", "0.51"}}});
    if (id == "table-s5")
        return table("table-s5",
                     "Table S5: lOR of outcome by SNP class for first allele, varying prevalence of disease "
                     "(case-control sampling design)",
                     CaseControl, RowSweep::Prevalence, 0.6, 0.005,
                     {{"0.2", 0.2, {"0.10", "0.10", "-0.01", "-0.00", "0.15", "0.16"}},
                      {"0.1", 0.1, {"0.13", "0.14", "-0.02", "-0.00", "0.21", "0.22"}},
                      {"0.05", 0.05, {"0.16", "0.16", "-0.02", "-0.00", "0.24", "0.25"}},
                      {"0.01", 0.01, {"0.17", "0.18", "-0.03", "-0.00", "0.27", "0.28"}},
                      {"0.001", 0.001, {"0.18", "0.19", "-0.03", "-0.00", "0.27", "0.29"}},
                      {"1e-04", 1e-4, {"0.18", "0.19", "-0.03", "-0.00", "0.27", "0.29"}}});
    if (id == "table-s6")
        return table("table-s6",
                     "Table S6: lOR of outcome by SNP class for first allele, varying SD of SNP effects "
                     "(case-control sampling design)",
                     CaseControl, RowSweep::Tau, 0.6, 0.01,
                     {{"0.25", 0.25, {"0.03", "0.02", "-0.03", "-0.02", "0.03", "0.03"}},
                      {"0.5", 0.5, {"0.11", "0.10", "-0.11", "-0.09", "0.14", "0.12"}},
                      {"0.75", 0.75, {"0.24", "0.21", "-0.23", "-0.18", "0.29", "0.26"}},
                      {"1", 1.0, {"0.40", "0.35", "-0.36", "-0.28", "0.48", "0.43"}},
                      {"1.25", 1.25, {"0.58", "0.52", "-0.49", "-0.37", "0.68", "0.61"}}});
    if (id == "table-s7")
        return table("table-s7",
                     "Table S7: lOR of outcome by SNP class for first allele, varying mean of SNP effects "
                     "(case-control sampling design)",
                     CaseControl, RowSweep::Mu, 0.7, 0.01,
                     {{"-0.47", kLogMu[0], {"-0.25", "-0.28", "-0.56", "-0.52", "-0.20", "-0.23"}},
                      {"0", kLogMu[1], {"0.21", "0.18", "-0.20", "-0.16", "0.26", "0.23"}},
                      {"0.26", kLogMu[2], {"0.46", "0.44", "-0.01", "0.04", "0.51", "0.48"}},
                      {"0.47", kLogMu[3], {"0.66", "0.64", "0.13", "0.20", "0.70", "0.67"}},
                      {"0.69", kLogMu[4], {"0.87", "0.85", "0.28", "0.39", "0.91", "0.88"}},
                      {"0.92", kLogMu[5], {"1.09", "1.07", "0.43", "0.58", "1.11", "1.09"}}});
    if (id == "table-s8")
        return table("table-s8",
                     "Table S8: lOR of outcome by SNP class for first allele, varying SNP MAF "
                     "(case-control sampling design)",
                     CaseControl, RowSweep::Maf, 0.7, 0.01,
                     {{"0.005", 0.005, {"0.21", "0.18", "-0.03", "-0.02", "0.32", "0.28"}},
                      {"0.01", 0.01, {"0.21", "0.18", "-0.20", "-0.16", "0.26", "0.23"}},
                      {"0.02", 0.02, {"0.21", "0.18", "-0.44", "-0.32", "0.22", "0.19"}},
                      {"0.03", 0.03, {"0.21", "0.18", "-0.62", "-0.49", "0.21", "0.18"}},
                      {"0.05", 0.05, {"0.21", "0.18", "-0.88", "-0.75", "0.20", "0.18"}}});
    if (id == "table-s9")
        return table("table-s9",
                     "Table S9: lOR of outcome by SNP class for first allele, varying MAF and number of SNPs "
                     "with constant expected count per person (case-control sampling design)",
                     CaseControl, RowSweep::MafSnps, 0.7, 0.01,
                     {{"0.005", 0.005, {"0.21", "0.19", "-0.03", "-0.02", "0.32", "0.29"}},
                      {"0.01", 0.01, {"0.21", "0.18", "-0.20", "-0.16", "0.26", "0.23"}},
                      {"0.02", 0.02, {"0.21", "0.16", "-0.44", "-0.31", "0.22", "0.17"}},
                      {"0.03", 0.03, {"0.21", "0.15", "-0.62", "-0.46", "0.21", "0.15"}},
                      {"0.05", 0.05, {"0.21", "0.12", "-0.88", "-0.65", "0.20", "0.12"}}});
    if (id == "table-s10")
        return table("table-s10",
                     "Table S10: lOR of outcome by SNP class for first allele, varying sample size "
                     "(case-control sampling design)",
                     CaseControl, RowSweep::SampleSize, 0.7, 0.01,
                     {{"50", 50, {"0.21", "0.20", "0.07", "0.08", "0.37", "0.32"}},
                      {"100", 100, {"0.21", "0.20", "-0.03", "-0.02", "0.32", "0.29"}},
                      {"200", 200, {"0.21", "0.20", "-0.20", "-0.17", "0.26", "0.25"}},
                      {"500", 500, {"0.21", "0.20", "-0.54", "-0.43", "0.21", "0.20"}},
                      {"1000", 1000, {"0.21", "0.20", "-0.87", "-0.74", "0.21", "0.20"}}});
    if (id == "table-s11")
        return table("table-s11",
                     "Table S11: lOR of outcome by SNP class for first allele, varying MAF and sample size "
                     "with constant expected count per SNP (case-control sampling design)",
                     CaseControl, RowSweep::MafN, 0.7, 0.01,
                     {{"0.005", 0.005, {"0.21", "0.18", "-0.03", "-0.02", "0.32", "0.28"}},
                      {"0.01", 0.01, {"0.21", "0.18", "-0.03", "-0.02", "0.32", "0.27"}},
                      {"0.02", 0.02, {"0.21", "0.18", "-0.03", "-0.02", "0.31", "0.27"}},
                      {"0.03", 0.03, {"0.21", "0.18", "-0.03", "-0.03", "0.31", "0.26"}},
                      {"0.05", 0.05, {"0.21", "0.18", "-0.03", "-0.02", "0.31", "0.25"}}});
    throw std::invalid_argument("unknown table target '" + std::string(id) + "'");
}

Scenario figure(const char* id, const char* citation) {
    Scenario s;
    s.id = id;
    s.citation = citation;
    s.kind = ScenarioKind::Figure;
    s.simulate = false;
    return s;
}

Scenario build_figure(std::string_view id) {
    if (id == "figure-1")
        return figure("figure-1", "Figure 1: expected lOR and beta in prospective and case-control studies versus "
                                  "baseline disease prevalence");
    if (id == "figure-2")
        return figure("figure-2", "Figure 2: expected lOR and beta in prospective and case-control studies versus "
                                  "mean lOR");
    if (id == "figure-3")
        return figure("figure-3", "Figure 3: expected lOR and beta in prospective and case-control studies versus "
                                  "SD of lORs");
    if (id == "figure-4") return figure("figure-4", "Figure 4: sampling probabilities by OR and MAF");
    if (id == "figure-5")
        return figure("figure-5", "Figure 5: mu_p and mu_r versus MAF by tail behavior of distribution of SNP lORs");
    if (id == "figure-s1")
        return figure("figure-s1", "Figure S1: burden lOR from the normal approximation and from numerical "
                                   "integration versus prevalence");
    if (id == "figure-s2")
        return figure("figure-s2", "Figure S2: tau_p and tau_r versus MAF by tail behavior of distribution of SNP "
                                   "lORs");
    if (id == "figure-s3") {
        Scenario s = figure("figure-s3", "Figure S3: per-replicate beta_p and beta_r versus beta_a");
        s.design = SamplingDesign::CaseControl;
        s.prevalence = 0.01;
        s.maf = MafSpec::fixed(0.005);
        s.dist = EffectDistribution::gaussian(0.0, 0.6);
        s.n_per_arm = 100;
        s.snp_count = 35;
        s.population_size = 10'000'000;
        s.cohort_size = 1'000'000;
        s.replicates = 2000;
        s.simulate = true;
        return s;
    }
    if (id == "figure-s4")
        return figure("figure-s4", "Figure S4: effect of increasing sample size on ascertainment bias");
    if (id == "figure-s5") {
        Scenario s = figure("figure-s5", "Figure S5: SD of log-odds ratios and simulated power of t-test of "
                                         "allele count in case-control design");
        s.kind = ScenarioKind::Power;
        s.design = SamplingDesign::CaseControl;
        s.prevalence = 0.05;
        s.maf = MafSpec::beta(0.12, 0.02);
        s.dist = EffectDistribution::gaussian(0.0, 0.0);
        s.n_per_arm = 500;
        s.snp_count = 40;
        s.population_size = 1'000'000;
        s.cohort_size = 1'000'000;
        s.replicates = 2000;
        s.sweep = RowSweep::Tau;
        for (const char* t : {"0", "0.2", "0.4", "0.6", "0.8", "1"}) s.rows.push_back({t, std::stod(t)});
        s.simulate = true;
        return s;
    }
    if (id == "figure-s6")
        return figure("figure-s6", "Figure S6: cumulative distribution plots for SNP log-odds ratios");
    throw std::invalid_argument("unknown figure target '" + std::string(id) + "'");
}

}  // namespace

const std::vector<TargetInfo>& list_targets() {
    static const std::vector<TargetInfo> targets = [] {
        std::vector<TargetInfo> out;
        for (int i = 1; i <= 11; ++i) {
            const Scenario s = build_table("table-s" + std::to_string(i));
            out.push_back({s.id, s.citation, s.kind});
        }
        for (const char* id : {"figure-1", "figure-2", "figure-3", "figure-4", "figure-5", "figure-s1", "figure-s2",
                               "figure-s3", "figure-s4", "figure-s5", "figure-s6"}) {
            const Scenario s = build_figure(id);
            out.push_back({s.id, s.citation, s.kind});
        }
        return out;
    }();
    return targets;
}

bool is_target(std::string_view id) {
    for (const auto& t : list_targets())
        if (t.id == id) return true;
    return false;
}

Scenario preset(std::string_view id) {
    if (!is_target(id)) throw std::invalid_argument("unknown target '" + std::string(id) + "'");
    return id.rfind("table-", 0) == 0 ? build_table(id) : build_figure(id);
}

}  // namespace burdenbias
