#include "burdenbias/analytic.hpp"
#include "burdenbias/report.hpp"
#include "burdenbias/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace burdenbias;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

// Thrown for bad user input discovered after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string scenario;
    std::string target;
    double scale = 0.1;
    bool scale_given = false;
    std::optional<std::uint64_t> seed;
    std::string threads = "1";
    std::optional<int> replicates;
    std::string out = ".";
    std::string format;

    // analytic
    std::string quantity = "beta_all";
    std::string dist = "gaussian(0, 0.6)";
    double prevalence = 0.05;
    int g = 1;
    double maf = 0.01;
    int n_per_arm = 100;
    double odds_ratio = 2.0;
    std::string sweep;
    std::string grid;
    int digits = 2;
    bool verbose = false;
};

int parse_threads(const std::string& s) {
    if (s == "auto") return 0;
    try {
        std::size_t used = 0;
        const int n = std::stoi(s, &used);
        if (used == s.size() && n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("--threads expects a positive integer or 'auto', got '" + s + "'");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--grid: '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw UsageError("--grid needs at least one value");
    return out;
}

// Resolves --scenario/--target into scenarios with the run flags applied.
std::vector<Scenario> resolve(const Options& o, bool allow_all) {
    if (o.scenario.empty() == o.target.empty()) throw UsageError("give exactly one of --scenario or --target");
    std::vector<Scenario> out;
    if (!o.scenario.empty()) {
        if (!fs::exists(o.scenario)) throw UsageError(o.scenario + ": no such file");
        try {
            out.push_back(load_scenario_file(o.scenario));
        } catch (const ConfigError& e) {
            throw UsageError(o.scenario + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw UsageError(o.scenario + ": " + e.what());
        }
    } else if (o.target == "all") {
        if (!allow_all) throw UsageError("--target all is only accepted by reproduce");
        for (const auto& t : list_targets()) out.push_back(preset(t.id));
    } else {
        if (!is_target(o.target)) throw UsageError("unknown target '" + o.target + "' (see list-targets)");
        out.push_back(preset(o.target));
    }
    for (auto& s : out) {
        // config files carry their own scale unless the flag overrides it
        if (o.scale_given || o.scenario.empty()) s.scale = o.scale;
        if (o.seed) s.seed = *o.seed;
        if (o.replicates) {
            s.replicates = *o.replicates;
            s.scale_replicates = false;
        }
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

std::string write_to(const fs::path& dir, const std::string& name, const std::function<void(std::ostream&)>& w) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    w(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
    return path.string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
}

void print_summary(const ReproReport& rep) {
    int fails = 0;
    for (const auto& r : rep.rows) fails += !r.pass;
    for (const auto& c : rep.checks) fails += !c.pass;
    std::printf("%s: %s (%zu rows, %zu checks, %d failing)\n", rep.target.c_str(), rep.passed() ? "PASS" : "FAIL",
                rep.rows.size(), rep.checks.size(), fails);
    for (const auto& c : rep.checks) std::printf("  [%s] %s: %s\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.detail.c_str());
    for (const auto& r : rep.rows) {
        if (r.pass) continue;
        std::printf("  [FAIL] %s=%s %s g=%d: eq5 %.4f quad %.4f sim %.4f (se %.4f) printed %s / %s\n",
                    r.row_param.c_str(), r.row_value.c_str(), std::string(to_string(r.snp_class)).c_str(), r.g_level,
                    r.theory_eq5, r.theory_quad, r.sim_mean, r.sim_se,
                    r.paper_theory.empty() ? "NA" : r.paper_theory.c_str(),
                    r.paper_sim.empty() ? "NA" : r.paper_sim.c_str());
    }
}

int cmd_analytic(const Options& o) {
    if (o.digits < 0 || o.digits > 17) throw UsageError("--digits must lie in 0..17");
    if (!o.scenario.empty() || !o.target.empty()) {
        const int workers = parse_threads(o.threads);
        auto scenarios = resolve(o, false);
        Scenario s = scenarios.front();
        s.simulate = false;
        const ReproReport rep = run_scenario(s, workers);
        if (o.out == "-") {
            write_csv(rep, std::cout);
        } else {
            ensure_dir(o.out);
            std::cerr << write_to(o.out, s.id + ".theory.csv", [&](std::ostream& os) { write_csv(rep, os); }) << "\n";
        }
        return kOk;
    }
    CurveSpec spec;
    try {
        spec.quantity = parse_curve_quantity(o.quantity);
        spec.dist = parse_distribution(o.dist);
    } catch (const ConfigError& e) {
        throw UsageError("--dist: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    spec.design.prevalence = o.prevalence;
    spec.design.maf = o.maf;
    spec.design.n_per_arm = o.n_per_arm;
    spec.odds_ratio = o.odds_ratio;
    spec.g = o.g;
    try {
        spec.design.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.g < 1 || o.g > 3) throw UsageError("--g must lie in 1..3");
    if (o.sweep.empty()) {
        if (!o.grid.empty()) throw UsageError("--grid needs --sweep");
        spec.sweep = SweepParameter::Prevalence;
        std::printf("%.*f\n", o.digits, curve_value(spec, o.prevalence));
        return kOk;
    }
    try {
        spec.sweep = parse_sweep_parameter(o.sweep);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.grid.empty()) throw UsageError("--sweep needs --grid");
    spec.grid = parse_grid(o.grid);
    const auto pts = curve(spec, parse_threads(o.threads));
    std::printf("%s,%s\n", std::string(to_string(spec.sweep)).c_str(), std::string(to_string(spec.quantity)).c_str());
    for (const auto& p : pts) std::printf("%.10g,%.*f\n", p.x, o.digits, p.value);
    return kOk;
}

int cmd_simulate(const Options& o) {
    const int workers = parse_threads(o.threads);
    Scenario s = resolve(o, false).front();
    if (s.kind == ScenarioKind::Figure && s.id != "figure-s3")
        throw UsageError("target '" + s.id + "' has no simulation");
    s.simulate = true;
    ensure_dir(o.out);
    const ReproReport rep = run_scenario(s, workers);
    std::vector<std::string> written;
    if (!rep.power.empty()) {
        written.push_back(write_to(o.out, s.id + ".power.csv", [&](std::ostream& os) { write_power_csv(rep.power, os); }));
    }
    for (std::size_t k = 0; k < rep.replicates.size(); ++k) {
        const std::string name = rep.replicates.size() == 1 ? s.id + ".replicates.csv"
                                                            : s.id + ".replicates.row" + std::to_string(k + 1) + ".csv";
        written.push_back(write_to(o.out, name, [&](std::ostream& os) { rep.replicates[k].write_csv(os); }));
    }
    written.push_back(write_to(o.out, s.id + ".csv", [&](std::ostream& os) { write_csv(rep, os); }));
    for (const auto& w : written) std::cerr << w << "\n";
    print_summary(rep);
    return kOk;
}

int cmd_reproduce(const Options& o, const std::string& default_format) {
    const std::string format = o.format.empty() ? default_format : o.format;
    const int workers = parse_threads(o.threads);
    const auto scenarios = resolve(o, true);
    ensure_dir(o.out);
    for (const auto& s : scenarios) {
        const ReproReport rep = run_scenario(s, workers);
        if (format == "csv" || format == "both")
            std::cerr << write_to(o.out, s.id + ".csv", [&](std::ostream& os) { write_csv(rep, os); }) << "\n";
        if (format == "svg" || format == "both")
            std::cerr << write_to(o.out, s.id + ".svg", [&](std::ostream& os) { write_svg(rep, os); }) << "\n";
        print_summary(rep);
        std::fflush(stdout);
    }
    return kOk;
}

int cmd_list_targets(const Options& o) {
    if (!o.target.empty()) {
        if (!is_target(o.target)) throw UsageError("unknown target '" + o.target + "'");
        const Scenario s = preset(o.target);
        std::printf("# %s\n%s", s.citation.c_str(), s.to_config().c_str());
        return kOk;
    }
    for (const auto& t : list_targets()) {
        std::printf("%-11s %-7s %s\n", t.id.c_str(), std::string(to_string(t.kind)).c_str(), t.citation.c_str());
        if (o.verbose) {
            std::istringstream cfg(preset(t.id).to_config());
            for (std::string line; std::getline(cfg, line);) std::printf("    %s\n", line.c_str());
        }
    }
    return kOk;
}

void add_run_flags(CLI::App* sub, Options& o, bool with_replicates) {
    sub->add_option("--scenario", o.scenario, "Scenario config file");
    sub->add_option("--target", o.target, "Built-in target id");
    sub->add_option_function<double>(
           "--scale",
           [&o](double v) {
               o.scale = v;
               o.scale_given = true;
           },
           "Multiplier on population, cohort and replicates (default 0.1)")
        ->check(CLI::PositiveNumber);
    sub->add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t v) { o.seed = v; }, "Root seed");
    sub->add_option("--threads", o.threads, "Worker threads, a count or 'auto'");
    if (with_replicates)
        sub->add_option_function<int>("--replicates", [&o](int v) { o.replicates = v; }, "Replicate count (unscaled)")
            ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Burden-test bias under ascertained rare-variant discovery"};
    app.require_subcommand(0, 1);
    bool list_flag = false;
    app.add_flag("--list-targets", list_flag, "Same as the list-targets subcommand");

    auto* analytic = app.add_subcommand("analytic", "Evaluate theory quantities");
    add_run_flags(analytic, o, false);
    analytic->add_option("--quantity", o.quantity, "beta_all, beta_prev, beta_novel, mu_prev, mu_novel, ...");
    analytic->add_option("--dist", o.dist, "Effect law, e.g. gaussian(0, 0.6)");
    analytic->add_option("--prevalence", o.prevalence, "Disease prevalence K");
    analytic->add_option("--g", o.g, "Allele-count contrast, 1..3");
    analytic->add_option("--maf", o.maf, "Minor allele frequency f");
    analytic->add_option("--n-per-arm", o.n_per_arm, "Cases (and controls) in the discovery sample");
    analytic->add_option("--odds-ratio", o.odds_ratio, "Odds ratio for the ascertainment quantities");
    analytic->add_option("--sweep", o.sweep, "prevalence, mu, tau, maf, n or nf");
    analytic->add_option("--grid", o.grid, "Comma-separated sweep values");
    analytic->add_option("--digits", o.digits, "Decimals printed");
    analytic->add_option("--out", o.out, "Output directory for --target/--scenario, or - for stdout");

    auto* simulate = app.add_subcommand("simulate", "Run the simulation of a scenario");
    add_run_flags(simulate, o, true);
    simulate->add_option("--out", o.out, "Output directory");

    auto* reproduce = app.add_subcommand("reproduce", "Reproduce a target (or 'all') with pass flags");
    add_run_flags(reproduce, o, true);
    reproduce->add_option("--out", o.out, "Output directory");
    reproduce->add_option("--format", o.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

    auto* plot = app.add_subcommand("plot", "Render a target as SVG");
    add_run_flags(plot, o, true);
    plot->add_option("--out", o.out, "Output directory");
    plot->add_option("--format", o.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

    auto* list = app.add_subcommand("list-targets", "List built-in targets with citations");
    list->add_option("--target", o.target, "Print one target's config");
    list->add_flag("--verbose", o.verbose, "Print every target's config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kValidation;
    }

    try {
        if (*analytic) return cmd_analytic(o);
        if (*simulate) return cmd_simulate(o);
        if (*reproduce) return cmd_reproduce(o, "csv");
        if (*plot) return cmd_reproduce(o, "svg");
        if (*list || list_flag) return cmd_list_targets(o);
        std::cerr << app.help();
        return kValidation;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kRuntime;
    }
}
