#include "burdenbias/report.hpp"
#include "burdenbias/scenario.hpp"

#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace burdenbias;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

std::string csv_of(const ReproReport& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

std::string svg_of(const ReproReport& r) {
    std::ostringstream os;
    write_svg(r, os);
    return os.str();
}

int count(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("distribution sub-grammar") {
    auto g = parse_distribution("gaussian(0, 0.6)");
    CHECK(g.is_gaussian());
    CHECK(g.moments().mean == 0.0);
    CHECK(g.moments().sd == doctest::Approx(0.6));
    CHECK(parse_distribution("normal(mu=0.2, sd=0.5)").moments().sd == doctest::Approx(0.5));
    CHECK(parse_distribution("point(0.4)").is_point_mass());

    const auto t = parse_distribution("t(df=3, scale=0.5, bound=4)");
    CHECK_FALSE(t.is_gaussian());
    CHECK(t.support().second == 4.0);
    const auto matched = parse_distribution("t(df=1, match=gaussian(0, 0.6), bound=4)");
    CHECK(matched.cdf(0.6 * 0.8416212335729143) == doctest::Approx(0.8).epsilon(1e-3));

    CHECK(parse_maf("0.01").mean == 0.01);
    const auto b = parse_maf("beta(mean=0.12, sd=0.02)");
    CHECK(b.kind == MafSpec::Kind::Beta);
    CHECK(b.sd == 0.02);

    try {
        parse_distribution("gaussian(0, 0.6");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 16);
    }
    try {
        parse_distribution("cauchy(1)");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(parse_distribution("t(df=3, scale=0.5, match=gaussian(0,1))"), ConfigError);
    CHECK_THROWS_AS(parse_distribution("gaussian(0, -1)"), std::exception);
}

TEST_CASE("config errors carry line and column") {
    try {
        load_scenario("prevalence = 0.05\n  bogus = 3\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    try {
        load_scenario("# comment\nprevalence = 0.05\nprevalence = 0.1\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    try {
        load_scenario("n_per_arm = ten\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 13);
    }
    try {
        load_scenario("dist = gaussian(0, 0.6, 7)\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 7);
    }
    CHECK_THROWS_AS(load_scenario("just some words\n"), ConfigError);
    CHECK_THROWS_AS(load_scenario("preset = table-s99\n"), ConfigError);
}

TEST_CASE("semantic validation lists every violation") {
    try {
        load_scenario("maf = 0.7\nprevalence = 1.5\ng = 4\n");
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("maf") != std::string::npos);
        CHECK(msg.find("prevalence") != std::string::npos);
        CHECK(msg.find("g levels") != std::string::npos);
    }
    CHECK_THROWS_AS(load_scenario("maf = 0.7\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("design = prospective\nclasses = novel\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("scale = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("population = 500\nscale = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("kind = power\nsweep = prevalence\nvalues = 0.1\n"), std::invalid_argument);
    CHECK_NOTHROW(load_scenario("population = 1000\nscale = 1\n"));
}

TEST_CASE("prevalence-sweep case-control preset") {
    const Scenario s = load_scenario("preset = table-s5\n");
    CHECK(s.id == "table-s5");
    CHECK(s.sweep == RowSweep::Prevalence);
    const std::vector<double> ks{0.2, 0.1, 0.05, 0.01, 0.001, 1e-4};
    REQUIRE(s.rows.size() == ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(s.rows[i].value == ks[i]);
    CHECK(s.dist.moments().mean == 0.0);
    CHECK(s.dist.moments().sd == doctest::Approx(0.6));
    CHECK(s.snp_count == 50);
    CHECK(s.n_per_arm == 100);
    CHECK(s.design == SamplingDesign::CaseControl);
    CHECK(s.paper.size() == 18);
    CHECK(s.citation.rfind("Table S5:", 0) == 0);
}

TEST_CASE("power preset") {
    const Scenario s = preset("figure-s5");
    CHECK(s.kind == ScenarioKind::Power);
    CHECK(s.snp_count == 40);
    CHECK(s.maf.kind == MafSpec::Kind::Beta);
    CHECK(s.maf.mean == 0.12);
    CHECK(s.maf.sd == 0.02);
    CHECK(s.n_per_arm == 500);
    CHECK(s.prevalence == 0.05);
    CHECK(s.replicates == 2000);
    CHECK(s.sweep == RowSweep::Tau);
}

TEST_CASE("every target is listed with a citation and loads") {
    CHECK(list_targets().size() == 22);
    for (const auto& t : list_targets()) {
        CAPTURE(t.id);
        CHECK_FALSE(t.citation.empty());
        const Scenario s = preset(t.id);
        CHECK_NOTHROW(s.validate());
        CHECK(s.citation == t.citation);
    }
    CHECK_FALSE(is_target("table-s12"));
    CHECK_THROWS_AS(preset("figure-9"), std::invalid_argument);
}

TEST_CASE("config round trip") {
    for (const auto& t : list_targets()) {
        CAPTURE(t.id);
        const Scenario a = preset(t.id);
        const Scenario b = load_scenario(a.to_config());
        CHECK(b.to_config() == a.to_config());
        CHECK(b.rows.size() == a.rows.size());
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            CHECK(b.row_design(r).prevalence == a.row_design(r).prevalence);
            CHECK(b.row_design(r).maf == a.row_design(r).maf);
            CHECK(b.row_design(r).n_per_arm == a.row_design(r).n_per_arm);
            CHECK(b.row_distribution(r).moments().sd == a.row_distribution(r).moments().sd);
        }
    }
}

TEST_CASE("run keys keep printed values and model keys drop them") {
    const Scenario run = load_scenario("preset = table-s6\nscale = 0.5\nseed = 7\nreplicates = 10\n");
    CHECK(run.paper.size() == 15);
    CHECK(run.scaled_replicates() == 5);
    CHECK(run.seed == 7);
    const Scenario model = load_scenario("preset = table-s6\nprevalence = 0.1\n");
    CHECK(model.paper.empty());
    CHECK(model.citation.empty());
    CHECK_THROWS_AS(load_scenario("preset = figure-1\nprevalence = 0.1\n"), ConfigError);
    const Scenario fixed = load_scenario("preset = table-s6\nscale = 0.5\nreplicates = 10\nscale_replicates = false\n");
    CHECK(fixed.scaled_replicates() == 10);
}

TEST_CASE("row mappings") {
    const Scenario s10 = preset("table-s10");
    for (std::size_t r = 0; r < s10.rows.size(); ++r)
        CHECK(2 * s10.row_design(r).n_per_arm == static_cast<int>(s10.rows[r].value));
    const Scenario s9 = preset("table-s9");
    for (std::size_t r = 0; r < s9.rows.size(); ++r)
        CHECK(s9.row_settings(r).population.snp_count == static_cast<int>(std::lround(0.5 / s9.rows[r].value)));
    const Scenario s11 = preset("table-s11");
    for (std::size_t r = 0; r < s11.rows.size(); ++r)
        CHECK(s11.row_design(r).n_per_arm == static_cast<int>(std::lround(0.5 / s11.rows[r].value)));
    const Scenario s3 = preset("table-s3");
    CHECK(s3.rows[0].label == "-0.47");
    CHECK(s3.row_distribution(0).moments().mean == doctest::Approx(std::log(0.625)));
}

TEST_CASE("empty report writes the header only") {
    ReproReport empty;
    CHECK(csv_of(empty) ==
          "target,row_param,row_value,snp_class,g_level,theory_eq5,theory_quad,sim_mean,sim_se,paper_theory,"
          "paper_sim,pass\n");
    std::ostringstream svg;
    CHECK_NOTHROW(write_svg(empty, svg));
    CHECK(svg.str().find("<svg") == 0);
}

TEST_CASE("theory-only table report carries printed values verbatim") {
    Scenario s = preset("table-s1");
    s.simulate = false;
    const ReproReport rep = run_scenario(s);
    const auto rows = csv_rows(csv_of(rep));
    REQUIRE(rows.size() == 13);
    CHECK(rows[0][0] == "target");
    // prevalence 0.01: closed-form theory 0.29, 0.54, 0.74
    CHECK(rows[10][2] == "0.01");
    CHECK(rows[10][9] == "0.29");
    CHECK(rows[11][9] == "0.54");
    CHECK(rows[12][9] == "0.74");
    CHECK(rows[12][10] == "0.48");
    CHECK(rows[12][7] == "NA");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][11] == "true");
    for (const auto& r : rep.rows) {
        const auto* cell = &r;
        bool found = false;
        for (const auto& pc : s.paper)
            if (s.rows[pc.row].label == cell->row_value && pc.g_level == cell->g_level) {
                CHECK(pc.theory == cell->paper_theory);
                CHECK(pc.sim == cell->paper_sim);
                found = true;
            }
        CHECK(found);
    }

    Scenario s5 = preset("table-s5");
    s5.simulate = false;
    const auto rows5 = csv_rows(csv_of(run_scenario(s5)));
    // prevalence 0.05 row: all 0.16, novel -0.02, old 0.24
    CHECK(rows5[7][3] == "all");
    CHECK(rows5[7][9] == "0.16");
    CHECK(rows5[8][9] == "-0.02");
    CHECK(rows5[8][10] == "-0.00");
    CHECK(rows5[9][9] == "0.24");
}

TEST_CASE("analytic targets ignore scale and workers") {
    for (const char* id : {"figure-4", "figure-s1", "figure-s6"}) {
        CAPTURE(id);
        const auto a = run_target(id, 0.1, 1, 1);
        const auto b = run_target(id, 1.0, 99, 3);
        CHECK(csv_of(a) == csv_of(b));
        CHECK(svg_of(a) == svg_of(b));
        CHECK(a.passed());
    }
}

TEST_CASE("figure-1 renders three beta curves with distinct line styles") {
    const auto rep = run_target("figure-1", 0.1, 1, 1);
    const auto svg = svg_of(rep);
    CHECK(count(svg, "<polyline") == 5);
    CHECK(rep.styles.at("beta_all") == "solid");
    CHECK(rep.styles.at("beta_prev") == "dashed");
    CHECK(rep.styles.at("beta_novel") == "dotted");
    CHECK(svg.find("log scale") != std::string::npos);
    const auto rows = csv_rows(csv_of(rep));
    CHECK(rows[0] == std::vector<std::string>{"target", "panel", "series", "x_name", "x", "y"});
}

TEST_CASE("simulated table rows are deterministic across workers") {
    const Scenario s = load_scenario(
        "preset = table-s6\npopulation = 20000\ncohort = 20000\nreplicates = 20\nscale = 1\n");
    const auto a = run_scenario(s, 1);
    const auto b = run_scenario(s, 3);
    CHECK(csv_of(a) == csv_of(b));
    REQUIRE(a.replicates.size() == s.rows.size());
    for (const auto& r : a.rows) {
        CHECK(std::isfinite(r.sim_mean));
        CHECK(r.n_effective + r.n_undefined == 20);
    }
}

TEST_CASE("file emission reports the path on failure") {
    ReproReport empty;
    try {
        emit_csv(empty, "/nonexistent-dir/x.csv");
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
    }
}
