#pragma once

#include "burdenbias/analytic.hpp"
#include "burdenbias/effect_dist.hpp"
#include "burdenbias/simulation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace burdenbias {

/// Config text error with a 1-based position.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses `gaussian(mu=0, tau=0.6)`, `gaussian(0, 0.6)`, `point(0.5)`,
/// `t(df=3, scale=0.5, bound=4)` or `t(df=3, match=gaussian(0,0.6), bound=4)`.
/// Errors carry the column within `text` (line 1).
EffectDistribution parse_distribution(std::string_view text);

/// `0.01` or `beta(mean=0.12, sd=0.02)`.
MafSpec parse_maf(std::string_view text);

enum class ScenarioKind { Table, Power, Figure };

/// What the rows of a table scenario vary. MafSnps holds M * f at 0.5, MafN holds
/// N * f at 0.5 and SampleSize is the total 2N.
enum class RowSweep { None, Prevalence, Mu, Tau, Maf, NPerArm, SampleSize, MafSnps, MafN };

std::string_view to_string(ScenarioKind k);
std::string_view to_string(RowSweep s);
RowSweep parse_row_sweep(std::string_view name);

struct RowValue {
    std::string label;  // as printed
    double value = 0.0;
};

/// Printed (theory, simulation) pair of one table cell.
struct PaperCell {
    int row = 0;
    SnpClass snp_class = SnpClass::All;
    int g_level = 1;
    std::string theory;
    std::string sim;
};

struct Scenario {
    std::string id = "custom";
    std::string citation;
    ScenarioKind kind = ScenarioKind::Table;
    SamplingDesign design = SamplingDesign::CaseControl;
    double prevalence = 0.05;
    MafSpec maf = MafSpec::fixed(0.01);
    int n_per_arm = 100;
    int snp_count = 50;
    long long population_size = 1'000'000;
    long long cohort_size = 1'000'000;
    EffectDistribution dist = EffectDistribution::gaussian(0.0, 0.6);
    int replicates = 2000;
    std::uint64_t seed = 20130611;
    double scale = 1.0;
    /// When false the replicate count ignores `scale`.
    bool scale_replicates = true;
    RowSweep sweep = RowSweep::None;
    std::vector<RowValue> rows;
    std::vector<int> g_levels{1};
    std::vector<SnpClass> classes{SnpClass::All, SnpClass::Novel, SnpClass::PreviouslyPolymorphic};
    bool simulate = true;
    bool validation_mode = false;
    double alpha = 0.05;
    /// Which theory pathway the printed theory column follows.
    BurdenMethod paper_method = BurdenMethod::Quadrature;
    std::vector<PaperCell> paper;

    long long scaled_population() const;
    long long scaled_cohort() const;
    int scaled_replicates() const;

    /// Throws std::invalid_argument listing every violated invariant.
    void validate() const;

    /// Model and simulation settings of row r (or the base row when there are none).
    StudyDesign row_design(std::size_t r) const;
    EffectDistribution row_distribution(std::size_t r) const;
    SimulationSettings row_settings(std::size_t r) const;

    /// Config text that loads back into this scenario (printed values excluded).
    std::string to_config() const;
};

/// Parses the key = value grammar. `preset = <id>` starts from a built-in target;
/// changing any model key drops the preset's printed values.
Scenario load_scenario(std::string_view config_text);
Scenario load_scenario_file(const std::string& path);

struct TargetInfo {
    std::string id;
    std::string citation;
    ScenarioKind kind;
};

/// Every built-in target in listing order.
const std::vector<TargetInfo>& list_targets();
bool is_target(std::string_view id);
/// Built-in table, power or figure scenario. Throws std::invalid_argument for unknown ids.
Scenario preset(std::string_view id);

}  // namespace burdenbias
