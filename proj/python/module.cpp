#include "burdenbias/analytic.hpp"
#include "burdenbias/estimators.hpp"
#include "burdenbias/report.hpp"
#include "burdenbias/scenario.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace burdenbias;

namespace {

int workers_of(py::object threads) {
    if (threads.is_none()) return 1;
    if (py::isinstance<py::str>(threads)) {
        if (threads.cast<std::string>() == "auto") return 0;
        throw py::value_error("threads must be a positive int or 'auto'");
    }
    const int n = threads.cast<int>();
    if (n < 1) throw py::value_error("threads must be a positive int or 'auto'");
    return n;
}

StudyDesign make_design(double prevalence, double maf, int n_per_arm) {
    StudyDesign d;
    d.prevalence = prevalence;
    d.maf = maf;
    d.n_per_arm = n_per_arm;
    d.validate();
    return d;
}

BurdenMethod parse_method(const std::string& m) {
    if (m == "quadrature") return BurdenMethod::Quadrature;
    if (m == "closed_form") return BurdenMethod::ClosedForm;
    throw py::value_error("method must be 'quadrature' or 'closed_form'");
}

py::dict row_dict(const TableRow& r) {
    py::dict d;
    d["target"] = r.target;
    d["row_param"] = r.row_param;
    d["row_value"] = r.row_value;
    d["snp_class"] = std::string(to_string(r.snp_class));
    d["g_level"] = r.g_level;
    d["theory_eq5"] = r.theory_eq5;
    d["theory_quad"] = r.theory_quad;
    d["sim_mean"] = r.sim_mean;
    d["sim_se"] = r.sim_se;
    d["sim_ivw"] = r.sim_ivw;
    d["n_effective"] = r.n_effective;
    d["n_undefined"] = r.n_undefined;
    d["n_corrected"] = r.n_corrected;
    d["paper_theory"] = r.paper_theory.empty() ? py::object(py::none()) : py::object(py::str(r.paper_theory));
    d["paper_sim"] = r.paper_sim.empty() ? py::object(py::none()) : py::object(py::str(r.paper_sim));
    d["pass"] = r.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_burdenbias, m) {
    m.doc() = "Burden-test bias under ascertained rare-variant discovery";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<EffectDistribution>(m, "EffectDistribution")
        .def_static("gaussian", &EffectDistribution::gaussian, py::arg("mu"), py::arg("tau"))
        .def_static("point_mass", &EffectDistribution::point_mass, py::arg("at"))
        .def_static("truncated_t", &EffectDistribution::truncated_t, py::arg("df"), py::arg("scale"),
                    py::arg("bound") = 4.0, py::arg("location") = 0.0)
        .def_static(
            "matched_t",
            [](double df, const EffectDistribution& reference, double bound) {
                return make_matched_t(df, reference, bound);
            },
            py::arg("df"), py::arg("reference"), py::arg("bound") = 4.0)
        .def_static("parse", [](const std::string& text) { return parse_distribution(text); })
        .def("pdf", &EffectDistribution::pdf)
        .def("cdf", &EffectDistribution::cdf)
        .def("quantile", &EffectDistribution::quantile)
        .def_property_readonly("mean", [](const EffectDistribution& d) { return d.moments().mean; })
        .def_property_readonly("sd", [](const EffectDistribution& d) { return d.moments().sd; })
        .def("__repr__", &EffectDistribution::describe);

    m.def("burden_lor_closed_form", &burden_lor_closed_form, py::arg("mu"), py::arg("tau"), py::arg("prevalence"),
          py::arg("g") = 1);

    m.def(
        "ascertainment_prob",
        [](double maf, double prevalence, double gamma, int n_per_arm) {
            return ascertainment_prob(maf, prevalence, gamma, n_per_arm);
        },
        py::arg("maf"), py::arg("prevalence"), py::arg("gamma"), py::arg("n_per_arm"));

    m.def(
        "phase_two_burden",
        [](const EffectDistribution& dist, double prevalence, double maf, int n_per_arm, const std::string& snp_class,
           int g, const std::string& method) {
            const auto d = make_design(prevalence, maf, n_per_arm);
            const auto cls = parse_snp_class(snp_class);
            return parse_method(method) == BurdenMethod::Quadrature
                       ? phase_two_burden(dist, d, cls, g).value
                       : phase_two_burden_closed_form(dist, d, cls, g).value;
        },
        py::arg("dist"), py::arg("prevalence"), py::arg("maf") = 0.01, py::arg("n_per_arm") = 100,
        py::arg("snp_class") = "all", py::arg("g") = 1, py::arg("method") = "quadrature");

    m.def(
        "conditioned_moments",
        [](const EffectDistribution& dist, double prevalence, double maf, int n_per_arm, const std::string& snp_class) {
            const auto c = condition_distribution(dist, make_design(prevalence, maf, n_per_arm),
                                                  parse_snp_class(snp_class));
            py::dict out;
            out["probability"] = c.normalizer();
            out["mean"] = c.moments().mean;
            out["sd"] = c.moments().sd;
            return out;
        },
        py::arg("dist"), py::arg("prevalence"), py::arg("maf"), py::arg("n_per_arm"), py::arg("snp_class"));

    m.def(
        "curve",
        [](const std::string& quantity, const std::string& sweep, std::vector<double> grid,
           const EffectDistribution& dist, double prevalence, double maf, int n_per_arm, double odds_ratio, int g,
           py::object threads) {
            CurveSpec spec;
            spec.quantity = parse_curve_quantity(quantity);
            spec.sweep = parse_sweep_parameter(sweep);
            spec.grid = std::move(grid);
            spec.dist = dist;
            spec.design = make_design(prevalence, maf, n_per_arm);
            spec.odds_ratio = odds_ratio;
            spec.g = g;
            const int w = workers_of(threads);
            std::vector<CurvePoint> pts;
            {
                py::gil_scoped_release release;
                pts = curve(spec, w);
            }
            std::vector<double> ys;
            for (const auto& p : pts) ys.push_back(p.value);
            return ys;
        },
        py::arg("quantity"), py::arg("sweep"), py::arg("grid"), py::arg("dist"), py::arg("prevalence") = 0.05,
        py::arg("maf") = 0.01, py::arg("n_per_arm") = 100, py::arg("odds_ratio") = 2.0, py::arg("g") = 1,
        py::arg("threads") = py::none());

    m.def(
        "allele_count_t_test",
        [](std::vector<int> cases, std::vector<int> controls, double alpha) {
            const auto r = allele_count_t_test(cases, controls, alpha);
            py::dict out;
            out["statistic"] = r.statistic;
            out["df"] = r.df;
            out["p_value"] = r.p_value;
            out["reject"] = r.reject;
            out["defined"] = r.defined;
            return out;
        },
        py::arg("case_counts"), py::arg("control_counts"), py::arg("alpha") = 0.05);

    m.def(
        "fit_logistic",
        [](std::vector<int> counts, std::vector<std::uint8_t> outcomes) {
            const auto f = fit_logistic(counts, outcomes);
            py::dict out;
            out["beta"] = f.beta;
            out["intercept"] = f.intercept;
            out["se"] = f.se;
            out["iterations"] = f.iterations;
            out["status"] = std::string(to_string(f.status));
            return out;
        },
        py::arg("counts"), py::arg("outcomes"));

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("id", &Scenario::id)
        .def_readonly("citation", &Scenario::citation)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("scale", &Scenario::scale)
        .def_readwrite("replicates", &Scenario::replicates)
        .def_readwrite("simulate", &Scenario::simulate)
        .def_readwrite("population_size", &Scenario::population_size)
        .def_readwrite("cohort_size", &Scenario::cohort_size)
        .def_property_readonly("kind", [](const Scenario& s) { return std::string(to_string(s.kind)); })
        .def_property_readonly("rows", [](const Scenario& s) {
            std::vector<std::string> out;
            for (const auto& r : s.rows) out.push_back(r.label);
            return out;
        })
        .def("validate", &Scenario::validate)
        .def("to_config", &Scenario::to_config);

    m.def("load_scenario", [](const std::string& text) { return load_scenario(text); }, py::arg("config_text"));
    m.def("preset", [](const std::string& id) { return preset(id); }, py::arg("target_id"));
    m.def("list_targets", [] {
        std::vector<py::dict> out;
        for (const auto& t : list_targets()) {
            py::dict d;
            d["id"] = t.id;
            d["kind"] = std::string(to_string(t.kind));
            d["citation"] = t.citation;
            out.push_back(d);
        }
        return out;
    });

    py::class_<ReproReport>(m, "Report")
        .def_readonly("target", &ReproReport::target)
        .def_readonly("citation", &ReproReport::citation)
        .def_property_readonly("passed", &ReproReport::passed)
        .def_property_readonly("rows",
                               [](const ReproReport& r) {
                                   std::vector<py::dict> out;
                                   for (const auto& row : r.rows) out.push_back(row_dict(row));
                                   return out;
                               })
        .def_property_readonly("checks",
                               [](const ReproReport& r) {
                                   std::vector<py::tuple> out;
                                   for (const auto& c : r.checks) out.push_back(py::make_tuple(c.name, c.pass, c.detail));
                                   return out;
                               })
        .def_property_readonly("power",
                               [](const ReproReport& r) {
                                   std::vector<py::tuple> out;
                                   for (const auto& p : r.power) out.push_back(py::make_tuple(p.tau, p.power));
                                   return out;
                               })
        .def("csv",
             [](const ReproReport& r) {
                 std::ostringstream os;
                 write_csv(r, os);
                 return os.str();
             })
        .def("svg", [](const ReproReport& r) {
            std::ostringstream os;
            write_svg(r, os);
            return os.str();
        });

    m.def(
        "run_scenario",
        [](const Scenario& s, py::object threads) {
            const int w = workers_of(threads);
            py::gil_scoped_release release;
            return run_scenario(s, w);
        },
        py::arg("scenario"), py::arg("threads") = py::none());
    m.def(
        "run_target",
        [](const std::string& id, double scale, std::uint64_t seed, py::object threads) {
            const int w = workers_of(threads);
            py::gil_scoped_release release;
            return run_target(id, scale, seed, w);
        },
        py::arg("target_id"), py::arg("scale") = 0.1, py::arg("seed") = 20130611, py::arg("threads") = py::none());
}
