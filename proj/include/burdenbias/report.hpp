#pragma once

#include "burdenbias/scenario.hpp"
#include "burdenbias/simulation.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace burdenbias {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TableRow {
    std::string target;
    std::string row_param;
    std::string row_value;
    SnpClass snp_class = SnpClass::All;
    int g_level = 1;
    double theory_eq5 = kNaN;
    double theory_quad = kNaN;
    double sim_mean = kNaN;
    double sim_se = kNaN;
    int n_effective = 0;
    int n_undefined = 0;
    int n_corrected = 0;
    double sim_ivw = kNaN;
    std::string paper_theory;  // as printed, empty when absent
    std::string paper_sim;
    bool theory_pass = true;
    bool sim_pass = true;
    bool pass = true;
};

struct CurveRow {
    std::string target;
    std::string panel;
    std::string series;
    std::string x_name;
    double x = 0.0;
    double y = 0.0;
};

/// A named property of a figure or run with its outcome.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproReport {
    std::string target;
    std::string citation;
    ScenarioKind kind = ScenarioKind::Table;
    bool simulated = false;
    std::vector<TableRow> rows;
    std::vector<CurveRow> curves;
    std::vector<Check> checks;
    /// Line style per series: solid, dashed, dotted or points.
    std::map<std::string, std::string> styles;
    bool log_x = false;
    std::vector<ReplicateTable> replicates;  // one per table row when simulated
    std::vector<PowerResult> power;

    bool is_curve_report() const { return kind != ScenarioKind::Table; }
    bool passed() const;
};

struct TolerancePolicy {
    double closed_form = 0.005;   // printed closed-form theory
    double quadrature = 0.01;     // printed quadrature theory
    double sim_floor = 0.05;      // simulation vs theory, or 3 MC SE if larger
    double sim_paper = 0.06;      // simulation vs printed simulation
};

/// Runs every row of a scenario: theory pathways, optional simulation and pass flags.
ReproReport run_scenario(const Scenario& scenario, int workers = 1, const TolerancePolicy& policy = {});

/// Built-in target at the given scale and seed.
ReproReport run_target(std::string_view target_id, double scale, std::uint64_t seed, int workers = 1);

void write_csv(const ReproReport& report, std::ostream& out);
void write_svg(const ReproReport& report, std::ostream& out);
/// `tau,replicates,rejections,undefined,alpha,power`, one line per grid point.
void write_power_csv(const std::vector<PowerResult>& power, std::ostream& out);

/// File variants; failures throw std::runtime_error naming the path.
void emit_csv(const ReproReport& report, const std::string& path);
void emit_svg(const ReproReport& report, const std::string& path);

}  // namespace burdenbias
