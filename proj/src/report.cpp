#include "burdenbias/report.hpp"

#include "burdenbias/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

namespace burdenbias {

bool ReproReport::passed() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string fmt(const char* spec, double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

double printed(const std::string& s) { return s.empty() ? kNaN : std::stod(s); }

const PaperCell* find_cell(const Scenario& s, int row, SnpClass cls, int g) {
    for (const auto& c : s.paper)
        if (c.row == row && c.snp_class == cls && c.g_level == g) return &c;
    return nullptr;
}

ReproReport run_table(const Scenario& s, int workers, const TolerancePolicy& policy) {
    ReproReport rep;
    rep.target = s.id;
    rep.citation = s.citation;
    rep.kind = s.kind;
    rep.simulated = s.simulate;
    const std::size_t n_rows = std::max<std::size_t>(s.rows.size(), 1);
    const std::string row_param(to_string(s.sweep));

    // theory cells, evaluated in parallel and assembled by index
    struct Cell {
        std::size_t row;
        SnpClass cls;
        int g;
        double eq5 = kNaN, quad = kNaN;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < n_rows; ++r)
        for (SnpClass c : s.classes)
            for (int g : s.g_levels) cells.push_back({r, c, g});
    parallel_for(cells.size(), workers, [&](std::size_t k) {
        Cell& cell = cells[k];
        const StudyDesign d = s.row_design(cell.row);
        const EffectDistribution dist = s.row_distribution(cell.row);
        cell.quad = phase_two_burden(dist, d, cell.cls, cell.g).value;
        cell.eq5 = phase_two_burden_closed_form(dist, d, cell.cls, cell.g).value;
    });

    if (s.simulate) {
        for (std::size_t r = 0; r < n_rows; ++r)
            rep.replicates.push_back(run_replicates(s.row_settings(r), s.seed, workers, r));
    }

    for (const auto& cell : cells) {
        TableRow row;
        row.target = s.id;
        row.row_param = row_param;
        row.row_value = s.rows.empty() ? "" : s.rows[cell.row].label;
        row.snp_class = cell.cls;
        row.g_level = cell.g;
        row.theory_eq5 = cell.eq5;
        row.theory_quad = cell.quad;
        if (const PaperCell* pc = find_cell(s, static_cast<int>(cell.row), cell.cls, cell.g)) {
            row.paper_theory = pc->theory;
            row.paper_sim = pc->sim;
        }
        if (!row.paper_theory.empty()) {
            const bool closed = s.paper_method == BurdenMethod::ClosedForm;
            const double ours = closed ? row.theory_eq5 : row.theory_quad;
            const double tol = closed ? policy.closed_form : policy.quadrature;
            // printed values are rounded to 2 decimals
            row.theory_pass = std::abs(ours - printed(row.paper_theory)) <= tol + 1e-12;
        }
        if (s.simulate) {
            const auto& sum = rep.replicates[cell.row].summary_for(cell.cls, cell.g);
            row.sim_mean = sum.mean;
            row.sim_se = sum.se;
            row.n_effective = sum.n_effective;
            row.n_undefined = sum.n_undefined;
            row.n_corrected = sum.n_corrected;
            row.sim_ivw = sum.ivw_mean;
            const double se = std::isfinite(sum.se) ? sum.se : 0.0;
            row.sim_pass = std::isfinite(sum.mean) &&
                           std::abs(sum.mean - row.theory_quad) <= std::max(policy.sim_floor, 3.0 * se);
            if (!row.paper_sim.empty())
                row.sim_pass = row.sim_pass && std::abs(sum.mean - printed(row.paper_sim)) <= policy.sim_paper + 1e-12;
        }
        row.pass = row.theory_pass && row.sim_pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// Adds one curve per series to the report.
void add_curve(ReproReport& rep, const std::string& panel, const std::string& series, const std::string& style,
               const std::string& x_name, const std::vector<CurvePoint>& pts, double x_factor = 1.0) {
    for (const auto& p : pts) rep.curves.push_back({rep.target, panel, series, x_name, p.x * x_factor, p.value});
    rep.styles[series] = style;
}

std::vector<double> ys(const ReproReport& rep, const std::string& panel, const std::string& series) {
    std::vector<double> out;
    for (const auto& c : rep.curves)
        if (c.panel == panel && c.series == series) out.push_back(c.y);
    return out;
}

void check(ReproReport& rep, const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, detail});
}

CurveSpec spec_for(CurveQuantity q, SweepParameter sweep, std::vector<double> grid, double K, double f, int N,
                   EffectDistribution dist) {
    CurveSpec c;
    c.quantity = q;
    c.sweep = sweep;
    c.grid = std::move(grid);
    c.design.prevalence = K;
    c.design.maf = f;
    c.design.n_per_arm = N;
    c.dist = std::move(dist);
    return c;
}

std::vector<std::pair<std::string, EffectDistribution>> tail_family() {
    const auto ref = EffectDistribution::gaussian(0.0, 0.6);
    return {{"gaussian", ref},
            {"t1", make_matched_t(1, ref, 4.0)},
            {"t2", make_matched_t(2, ref, 4.0)},
            {"t3", make_matched_t(3, ref, 4.0)}};
}

// The three-panel prevalence, mean and SD figures share one layout.
void class_figure(ReproReport& rep, SweepParameter sweep, const std::vector<double>& grid, double K, double f,
                  int workers) {
    const std::string x_name(to_string(sweep));
    const auto dist = EffectDistribution::gaussian(0.0, 0.6);
    auto run = [&](CurveQuantity q) { return curve(spec_for(q, sweep, grid, K, f, 100, dist), workers); };
    add_curve(rep, "mu", "mu_prev", "dashed", x_name, run(CurveQuantity::MuPrev));
    add_curve(rep, "mu", "mu_novel", "dotted", x_name, run(CurveQuantity::MuNovel));
    add_curve(rep, "beta", "beta_all", "solid", x_name, run(CurveQuantity::BetaAll));
    add_curve(rep, "beta", "beta_prev", "dashed", x_name, run(CurveQuantity::BetaPrev));
    add_curve(rep, "beta", "beta_novel", "dotted", x_name, run(CurveQuantity::BetaNovel));

    const auto mp = ys(rep, "mu", "mu_prev"), mr = ys(rep, "mu", "mu_novel");
    const auto ba = ys(rep, "beta", "beta_all"), bp = ys(rep, "beta", "beta_prev"), br = ys(rep, "beta", "beta_novel");
    bool mu_order = true, beta_order = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sweep == SweepParameter::Tau && grid[i] == 0.0) continue;
        mu_order = mu_order && mp[i] > mr[i];
        beta_order = beta_order && bp[i] > ba[i] && ba[i] > br[i];
    }
    check(rep, "mu_prev > mu_novel", mu_order, "every grid point");
    check(rep, "beta_prev > beta_all > beta_novel", beta_order, "every grid point");
}

void figure_prevalence(ReproReport& rep, int workers) {
    rep.log_x = true;
    const auto grid = logspace(1e-4, 0.3, 41);
    class_figure(rep, SweepParameter::Prevalence, grid, 0.05, 0.005, workers);
    const auto ba = ys(rep, "beta", "beta_all");
    bool monotone = true;
    for (std::size_t i = 1; i < ba.size(); ++i) monotone = monotone && ba[i] <= ba[i - 1] + 1e-9;
    check(rep, "beta_all nonincreasing in prevalence", monotone, "41-point log grid 1e-4..0.3");
}

void figure_mu(ReproReport& rep, int workers) {
    class_figure(rep, SweepParameter::Mu, linspace(-1.0, 1.0, 41), 0.05, 0.005, workers);
}

void figure_tau(ReproReport& rep, int workers) {
    const auto grid = linspace(0.0, 1.5, 31);
    class_figure(rep, SweepParameter::Tau, grid, 0.05, 0.005, workers);
    const double null_max = std::max({std::abs(ys(rep, "beta", "beta_all")[0]),
                                      std::abs(ys(rep, "beta", "beta_prev")[0]),
                                      std::abs(ys(rep, "beta", "beta_novel")[0])});
    check(rep, "all betas vanish at tau = 0", null_max < 1e-8, "max |beta| = " + fmt("%.3g", null_max));
    const auto bp = ys(rep, "beta", "beta_prev"), br = ys(rep, "beta", "beta_novel");
    bool widening = true;
    for (std::size_t i = 1; i < grid.size(); ++i) widening = widening && bp[i] - br[i] > bp[i - 1] - br[i - 1];
    check(rep, "beta_prev - beta_novel increases with tau", widening, "31-point grid 0..1.5");
}

void figure_sampling(ReproReport& rep, int workers) {
    rep.log_x = true;
    const auto grid = logspace(0.01, 10.0, 61);
    bool ratio_above_one = true, ratio_to_one = true, diff_peak = true;
    std::string peaks;
    for (double odds : {1.5, 2.0, 3.0, 5.0}) {
        const std::string label = "OR=" + fmt("%g", odds);
        auto spec = spec_for(CurveQuantity::AscertainmentRatio, SweepParameter::Nf, grid, 0.01, 0.01, 100,
                             EffectDistribution::gaussian(0.0, 0.6));
        spec.odds_ratio = odds;
        const auto ratio = curve(spec, workers);
        spec.quantity = CurveQuantity::AscertainmentDiff;
        const auto diff = curve(spec, workers);
        add_curve(rep, "ratio", label, "solid", "Nf", ratio);
        add_curve(rep, "difference", label, "solid", "Nf", diff);
        for (const auto& p : ratio) ratio_above_one = ratio_above_one && p.value >= 1.0;
        ratio_to_one = ratio_to_one && std::abs(ratio.back().value - 1.0) < 0.01;
        const auto best = std::max_element(diff.begin(), diff.end(),
                                           [](const CurvePoint& a, const CurvePoint& b) { return a.value < b.value; });
        diff_peak = diff_peak && best->x >= 0.25 && best->x <= 1.0;
        peaks += label + " peak Nf " + fmt("%.3f", best->x) + "; ";
    }
    check(rep, "sampling ratio >= 1 for OR > 1", ratio_above_one, "all ORs and Nf");
    check(rep, "sampling ratio -> 1 as Nf grows", ratio_to_one, "|ratio - 1| < 0.01 at Nf = 10");
    check(rep, "sampling difference peaks near Nf = 0.5", diff_peak, peaks);
}

void figure_tails(ReproReport& rep, CurveQuantity left, CurveQuantity right, int workers) {
    rep.log_x = true;
    const auto grid = logspace(0.01, 10.0, 41);
    const char* styles[] = {"solid", "dashed", "dotted", "dashdot"};
    int k = 0;
    for (const auto& [name, dist] : tail_family()) {
        const auto spec_l = spec_for(left, SweepParameter::Nf, grid, 0.01, 0.01, 100, dist);
        auto spec_r = spec_l;
        spec_r.quantity = right;
        add_curve(rep, std::string(to_string(left)), name, styles[k], "Nf", curve(spec_l, workers));
        add_curve(rep, std::string(to_string(right)), name, styles[k], "Nf", curve(spec_r, workers));
        ++k;
    }
    if (left == CurveQuantity::MuPrev) {
        bool sign = true;
        for (const auto& name : {"gaussian", "t1", "t2", "t3"}) {
            for (double v : ys(rep, "mu_prev", name)) sign = sign && v > 0.0;
            for (double v : ys(rep, "mu_novel", name)) sign = sign && v < 0.0;
        }
        check(rep, "mu_prev > 0 > mu_novel", sign, "all laws and Nf");
        const bool heavier = ys(rep, "mu_prev", "t1").front() > ys(rep, "mu_prev", "gaussian").front();
        check(rep, "heavier tails raise mu_prev at low MAF", heavier, "t1 vs gaussian at Nf = 0.01");
    }
}

void figure_closed_form(ReproReport& rep, int workers) {
    rep.log_x = true;
    const auto grid = logspace(0.001, 0.3, 41);
    const auto dist = EffectDistribution::gaussian(0.0, 0.6);
    const auto quad = curve(spec_for(CurveQuantity::BetaAll, SweepParameter::Prevalence, grid, 0.05, 0.005, 100, dist),
                            workers);
    const auto closed = curve(
        spec_for(CurveQuantity::ClosedFormBeta, SweepParameter::Prevalence, grid, 0.05, 0.005, 100, dist), workers);
    add_curve(rep, "beta", "closed_form", "solid", "prevalence", closed);
    add_curve(rep, "beta", "quadrature", "dotted", "prevalence", quad);
    double worst_high = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= 0.05 - 1e-12) worst_high = std::max(worst_high, std::abs(closed[i].value - quad[i].value));
    const double gap_low = closed.front().value - quad.front().value;
    check(rep, "pathways agree within 0.05 for K >= 0.05", worst_high <= 0.05, "max gap " + fmt("%.4f", worst_high));
    check(rep, "pathways diverge by > 0.08 at K = 0.001", gap_low > 0.08, "gap " + fmt("%.4f", gap_low));
}

void figure_shift(ReproReport& rep, int workers) {
    rep.log_x = true;
    const auto dist = EffectDistribution::gaussian(0.0, 0.6);
    for (int n : {100, 1000}) {
        const std::string label = "N=" + std::to_string(n);
        const auto f_grid = logspace(0.01 / n, 10.0 / n, 49);
        for (auto [panel, q] : {std::pair{"mu_prev", CurveQuantity::MuPrev}, std::pair{"mu_novel", CurveQuantity::MuNovel}}) {
            const auto pts = curve(spec_for(q, SweepParameter::Maf, f_grid, 0.01, 0.01, n, dist), workers);
            add_curve(rep, panel, label, n == 100 ? "solid" : "dashed", "100f", pts, 100.0);
        }
    }
    // half-plateau location of mu_prev in f
    auto half_point = [&](int n) {
        auto spec = spec_for(CurveQuantity::MuPrev, SweepParameter::Maf, {}, 0.01, 0.01, n, dist);
        const double plateau = curve_value(spec, 1e-6 * 100.0 / n);
        double lo = 1e-6 * 100.0 / n, hi = 10.0 / n;
        for (int it = 0; it < 60; ++it) {
            const double mid = std::sqrt(lo * hi);
            (curve_value(spec, mid) > plateau / 2 ? lo : hi) = mid;
        }
        return std::sqrt(lo * hi);
    };
    const double f100 = half_point(100), f1000 = half_point(1000);
    const double ratio = f100 / f1000;
    check(rep, "tenfold N shifts mu_prev by ~10x in f", ratio >= 5.0 && ratio <= 20.0,
          "half-plateau f: " + fmt("%.5f", f100) + " vs " + fmt("%.6f", f1000) + ", ratio " + fmt("%.2f", ratio));
    double overlay_prev = 0.0, overlay_novel = 0.0;
    for (double nf : logspace(0.01, 10.0, 41)) {
        auto a = spec_for(CurveQuantity::MuPrev, SweepParameter::Nf, {}, 0.01, 0.01, 100, dist);
        auto b = a;
        b.design.n_per_arm = 1000;
        overlay_prev = std::max(overlay_prev, std::abs(curve_value(a, nf) - curve_value(b, nf)));
        a.quantity = b.quantity = CurveQuantity::MuNovel;
        overlay_novel = std::max(overlay_novel, std::abs(curve_value(a, nf) - curve_value(b, nf)));
    }
    check(rep, "mu_prev against Nf overlays within 0.02", overlay_prev <= 0.02,
          "max gap " + fmt("%.4f", overlay_prev) + " (mu_novel max gap " + fmt("%.4f", overlay_novel) + ")");
}

void figure_cdf(ReproReport& rep) {
    const auto grid = linspace(-4.0, 4.0, 161);
    double worst = 0.0;
    for (const auto& [name, dist] : tail_family()) {
        std::vector<CurvePoint> pts;
        for (const auto& p : cdf_curve(dist, grid)) pts.push_back({p.gamma, p.probability});
        add_curve(rep, "cdf", name, name == "gaussian" ? "solid" : "dashed", "gamma", pts);
        const double q = 0.6 * 0.8416212335729143;
        worst = std::max({worst, std::abs(dist.cdf(q) - 0.8), std::abs(dist.cdf(-q) - 0.2)});
    }
    check(rep, "all laws share the 20% and 80% quantiles", worst < 1e-3, "max error " + fmt("%.2e", worst));
}

void figure_scatter(const Scenario& s, ReproReport& rep, int workers) {
    SimulationSettings settings;
    settings.population.population_size = s.scaled_population();
    settings.population.snp_count = s.snp_count;
    settings.population.maf = s.maf;
    settings.population.effect_dist = s.dist;
    settings.population.prevalence = s.prevalence;
    settings.design = SamplingDesign::CaseControl;
    settings.n_per_arm = s.n_per_arm;
    settings.cohort_size = s.scaled_cohort();
    settings.replicates = s.scaled_replicates();
    settings.validation_mode = s.validation_mode;
    rep.replicates.push_back(run_replicates(settings, s.seed, workers, 0));
    rep.simulated = true;
    const auto& t = rep.replicates.back();
    const auto a = t.estimates(SnpClass::All, 1);
    const auto p = t.estimates(SnpClass::PreviouslyPolymorphic, 1);
    const auto r = t.estimates(SnpClass::Novel, 1);
    int ordered = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isfinite(a[i]) && std::isfinite(p[i])) rep.curves.push_back({s.id, "scatter", "old", "beta_all", a[i], p[i]});
        if (std::isfinite(a[i]) && std::isfinite(r[i]))
            rep.curves.push_back({s.id, "scatter", "novel", "beta_all", a[i], r[i]});
        if (r[i] < a[i] && a[i] < p[i]) ++ordered;
    }
    rep.styles["old"] = "points";
    rep.styles["novel"] = "points";
    const double frac = a.empty() ? 0.0 : static_cast<double>(ordered) / a.size();
    check(rep, "beta_novel < beta_all < beta_old per replicate", frac >= 0.9,
          std::to_string(ordered) + " of " + std::to_string(a.size()) + " replicates (" + fmt("%.3f", frac) + ")");
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j);
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) mx += rx[i] / n, my += ry[i] / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : kNaN;
}

void figure_power(const Scenario& s, ReproReport& rep, int workers) {
    PowerSettings ps;
    ps.population.population_size = s.scaled_population();
    ps.population.snp_count = s.snp_count;
    ps.population.maf = s.maf;
    ps.population.effect_dist = s.dist;
    ps.population.prevalence = s.prevalence;
    ps.n_per_arm = s.n_per_arm;
    ps.alpha = s.alpha;
    ps.replicates = s.scaled_replicates();
    ps.validation_mode = s.validation_mode;
    std::vector<double> taus;
    for (const auto& r : s.rows) taus.push_back(r.value);
    rep.power = power_sweep(ps, taus, s.seed, workers);
    rep.simulated = true;
    for (const auto& p : rep.power) {
        rep.curves.push_back({s.id, "power", "t-test", "tau", p.tau, p.power});
    }
    rep.styles["t-test"] = "solid";
    std::vector<double> powers;
    for (const auto& p : rep.power) powers.push_back(p.power);
    const double rho = spearman(taus, powers);
    check(rep, "power increases with tau", rho > 0.9, "Spearman rho " + fmt("%.3f", rho));
    for (const auto& p : rep.power) {
        if (p.tau != 0.0) continue;
        const double half = 3.0 * std::sqrt(p.alpha * (1 - p.alpha) / p.replicates);
        check(rep, "null rejection rate near alpha", std::abs(p.power - p.alpha) <= half,
              fmt("%.4f", p.power) + " with " + std::to_string(p.replicates) + " replicates");
    }
}

ReproReport run_figure(const Scenario& s, int workers) {
    ReproReport rep;
    rep.target = s.id;
    rep.citation = s.citation;
    rep.kind = s.kind;
    const std::string& id = s.id;
    if (id == "figure-1")
        figure_prevalence(rep, workers);
    else if (id == "figure-2")
        figure_mu(rep, workers);
    else if (id == "figure-3")
        figure_tau(rep, workers);
    else if (id == "figure-4")
        figure_sampling(rep, workers);
    else if (id == "figure-5")
        figure_tails(rep, CurveQuantity::MuPrev, CurveQuantity::MuNovel, workers);
    else if (id == "figure-s1")
        figure_closed_form(rep, workers);
    else if (id == "figure-s2")
        figure_tails(rep, CurveQuantity::TauPrev, CurveQuantity::TauNovel, workers);
    else if (id == "figure-s3")
        figure_scatter(s, rep, workers);
    else if (id == "figure-s4")
        figure_shift(rep, workers);
    else if (id == "figure-s5" || s.kind == ScenarioKind::Power)
        figure_power(s, rep, workers);
    else if (id == "figure-s6")
        figure_cdf(rep);
    else
        throw std::invalid_argument("no figure definition for '" + id + "'");
    return rep;
}

}  // namespace

ReproReport run_scenario(const Scenario& scenario, int workers, const TolerancePolicy& policy) {
    scenario.validate();
    if (scenario.kind == ScenarioKind::Table) return run_table(scenario, workers, policy);
    return run_figure(scenario, workers);
}

ReproReport run_target(std::string_view target_id, double scale, std::uint64_t seed, int workers) {
    Scenario s = preset(target_id);
    s.scale = scale;
    s.seed = seed;
    return run_scenario(s, workers);
}

void write_csv(const ReproReport& report, std::ostream& out) {
    if (report.is_curve_report()) {
        out << "target,panel,series,x_name,x,y\n";
        for (const auto& c : report.curves)
            out << c.target << ',' << c.panel << ',' << c.series << ',' << c.x_name << ',' << fmt("%.10g", c.x) << ','
                << fmt("%.10g", c.y) << '\n';
        return;
    }
    out << "target,row_param,row_value,snp_class,g_level,theory_eq5,theory_quad,sim_mean,sim_se,paper_theory,"
           "paper_sim,pass\n";
    for (const auto& r : report.rows) {
        out << r.target << ',' << r.row_param << ',' << r.row_value << ',' << to_string(r.snp_class) << ','
            << r.g_level << ',' << fmt("%.6f", r.theory_eq5) << ',' << fmt("%.6f", r.theory_quad) << ','
            << fmt("%.6f", r.sim_mean) << ',' << fmt("%.6f", r.sim_se) << ','
            << (r.paper_theory.empty() ? "NA" : r.paper_theory) << ',' << (r.paper_sim.empty() ? "NA" : r.paper_sim)
            << ',' << (r.pass ? "true" : "false") << '\n';
    }
}

void write_power_csv(const std::vector<PowerResult>& power, std::ostream& out) {
    out << "tau,replicates,rejections,undefined,alpha,power\n";
    for (const auto& p : power)
        out << fmt("%.10g", p.tau) << ',' << p.replicates << ',' << p.rejections << ',' << p.undefined << ','
            << fmt("%.10g", p.alpha) << ',' << fmt("%.10g", p.power) << '\n';
}

namespace {

struct Series {
    std::string name;
    std::string style;
    std::vector<std::pair<double, double>> pts;
};

struct Panel {
    std::string name;
    std::string x_name;
    std::vector<Series> series;
};

std::vector<Panel> panels_of(const ReproReport& rep) {
    std::vector<Panel> panels;
    auto panel_for = [&](const std::string& name, const std::string& x_name) -> Panel& {
        for (auto& p : panels)
            if (p.name == name) return p;
        panels.push_back({name, x_name, {}});
        return panels.back();
    };
    auto series_for = [](Panel& p, const std::string& name, const std::string& style) -> Series& {
        for (auto& s : p.series)
            if (s.name == name) return s;
        p.series.push_back({name, style, {}});
        return p.series.back();
    };
    if (rep.is_curve_report()) {
        for (const auto& c : rep.curves) {
            auto it = rep.styles.find(c.series);
            series_for(panel_for(c.panel, c.x_name), c.series, it == rep.styles.end() ? "solid" : it->second)
                .pts.emplace_back(c.x, c.y);
        }
        return panels;
    }
    for (const auto& r : rep.rows) {
        const double x = r.row_value.empty() ? 0.0 : std::stod(r.row_value);
        const std::string name = std::string(to_string(r.snp_class)) + " g=" + std::to_string(r.g_level);
        Panel& p = panel_for(name, r.row_param);
        series_for(p, "quadrature", "solid").pts.emplace_back(x, r.theory_quad);
        series_for(p, "closed form", "dashed").pts.emplace_back(x, r.theory_eq5);
        if (std::isfinite(r.sim_mean)) series_for(p, "simulation", "points").pts.emplace_back(x, r.sim_mean);
        if (!r.paper_sim.empty()) series_for(p, "printed simulation", "crosses").pts.emplace_back(x, std::stod(r.paper_sim));
    }
    return panels;
}

const char* kPalette[] = {"#1b1b1b", "#c0392b", "#2471a3", "#229954", "#b9770e", "#7d3c98", "#5d6d7e"};

std::string dash_of(const std::string& style) {
    if (style == "dashed") return " stroke-dasharray=\"8,4\"";
    if (style == "dotted") return " stroke-dasharray=\"2,3\"";
    if (style == "dashdot") return " stroke-dasharray=\"8,3,2,3\"";
    return "";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg(const ReproReport& report, std::ostream& out) {
    const auto panels = panels_of(report);
    const double pw = 420, ph = 320, ml = 60, mr = 150, mt = 40, mb = 50;
    const double width = std::max<std::size_t>(panels.size(), 1) * (pw + ml + mr);
    const double height = ph + mt + mb + 30;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width) << "\" height=\""
        << fmt("%.0f", height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << xml_escape(report.target + ": " + report.citation)
        << "</text>\n";
    const bool log_x = report.log_x || (!report.is_curve_report() && !report.rows.empty() &&
                                        report.rows.front().row_param == "prevalence");
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const Panel& p = panels[k];
        const double ox = k * (pw + ml + mr) + ml, oy = mt + 10;
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const auto& s : p.series)
            for (auto [x, y] : s.pts) {
                if (!std::isfinite(x) || !std::isfinite(y) || (log_x && x <= 0)) continue;
                const double tx = log_x ? std::log10(x) : x;
                x0 = std::min(x0, tx);
                x1 = std::max(x1, tx);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
        if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
        auto sx = [&](double x) { return ox + ((log_x ? std::log10(x) : x) - x0) / (x1 - x0) * pw; };
        auto sy = [&](double y) { return oy + ph - (y - y0) / (y1 - y0) * ph; };
        out << "<g>\n<rect x=\"" << fmt("%.2f", ox) << "\" y=\"" << fmt("%.2f", oy) << "\" width=\"" << pw
            << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << fmt("%.2f", ox + pw / 2) << "\" y=\"" << fmt("%.2f", oy - 8)
            << "\" text-anchor=\"middle\">" << xml_escape(p.name) << "</text>\n";
        out << "<text x=\"" << fmt("%.2f", ox + pw / 2) << "\" y=\"" << fmt("%.2f", oy + ph + 36)
            << "\" text-anchor=\"middle\">" << xml_escape(p.x_name + (log_x ? " (log scale)" : "")) << "</text>\n";
        for (int t = 0; t <= 4; ++t) {
            const double fx = x0 + (x1 - x0) * t / 4, fy = y0 + (y1 - y0) * t / 4;
            const double px = ox + pw * t / 4, py = oy + ph - ph * t / 4;
            out << "<line x1=\"" << fmt("%.2f", px) << "\" y1=\"" << fmt("%.2f", oy + ph) << "\" x2=\""
                << fmt("%.2f", px) << "\" y2=\"" << fmt("%.2f", oy + ph + 5) << "\" stroke=\"#444\"/>\n";
            out << "<text x=\"" << fmt("%.2f", px) << "\" y=\"" << fmt("%.2f", oy + ph + 18)
                << "\" text-anchor=\"middle\">" << fmt("%.3g", log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
            out << "<line x1=\"" << fmt("%.2f", ox - 5) << "\" y1=\"" << fmt("%.2f", py) << "\" x2=\""
                << fmt("%.2f", ox) << "\" y2=\"" << fmt("%.2f", py) << "\" stroke=\"#444\"/>\n";
            out << "<text x=\"" << fmt("%.2f", ox - 8) << "\" y=\"" << fmt("%.2f", py + 4)
                << "\" text-anchor=\"end\">" << fmt("%.3g", fy) << "</text>\n";
        }
        if (y0 < 0 && y1 > 0)
            out << "<line x1=\"" << fmt("%.2f", ox) << "\" y1=\"" << fmt("%.2f", sy(0)) << "\" x2=\""
                << fmt("%.2f", ox + pw) << "\" y2=\"" << fmt("%.2f", sy(0)) << "\" stroke=\"#bbb\"/>\n";
        for (std::size_t i = 0; i < p.series.size(); ++i) {
            const Series& s = p.series[i];
            const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
            if (s.style == "points" || s.style == "crosses") {
                for (auto [x, y] : s.pts) {
                    if (!std::isfinite(x) || !std::isfinite(y) || (log_x && x <= 0)) continue;
                    if (s.style == "points")
                        out << "<circle cx=\"" << fmt("%.2f", sx(x)) << "\" cy=\"" << fmt("%.2f", sy(y))
                            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
                    else
                        out << "<path d=\"M" << fmt("%.2f", sx(x) - 4) << ',' << fmt("%.2f", sy(y) - 4) << "l8,8m0,-8l-8,8\" stroke=\""
                            << color << "\"/>\n";
                }
            } else {
                out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"" << dash_of(s.style)
                    << " points=\"";
                bool first = true;
                for (auto [x, y] : s.pts) {
                    if (!std::isfinite(x) || !std::isfinite(y) || (log_x && x <= 0)) continue;
                    out << (first ? "" : " ") << fmt("%.2f", sx(x)) << ',' << fmt("%.2f", sy(y));
                    first = false;
                }
                out << "\"/>\n";
            }
            const double ly = oy + 14 + 16 * i;
            out << "<line x1=\"" << fmt("%.2f", ox + pw + 10) << "\" y1=\"" << fmt("%.2f", ly) << "\" x2=\""
                << fmt("%.2f", ox + pw + 34) << "\" y2=\"" << fmt("%.2f", ly) << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"" << dash_of(s.style) << "/>\n";
            out << "<text x=\"" << fmt("%.2f", ox + pw + 40) << "\" y=\"" << fmt("%.2f", ly + 4) << "\">"
                << xml_escape(s.name) << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

namespace {

template <class Writer>
void write_file(const std::string& path, Writer&& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    w(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

void emit_csv(const ReproReport& report, const std::string& path) {
    write_file(path, [&](std::ostream& o) { write_csv(report, o); });
}

void emit_svg(const ReproReport& report, const std::string& path) {
    write_file(path, [&](std::ostream& o) { write_svg(report, o); });
}

}  // namespace burdenbias
