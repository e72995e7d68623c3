#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellpost/causal.hpp"
#include "bellpost/classical_bounds.hpp"
#include "bellpost/hvmodels.hpp"
#include "bellpost/quantum.hpp"
#include "bellpost/sharpening.hpp"
#include "bellpost/yurke_stoler.hpp"

namespace py = pybind11;
using namespace bellpost;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bell-inequality toolkit: postselection-sharpened bounds, thresholds, "
              "detector models, and causal-structure checks";

    py::class_<BellScenario>(m, "BellScenario")
        .def_static("dichotomic", &BellScenario::dichotomic, py::arg("parties"),
                    py::arg("settings_each"))
        .def_readonly("num_parties", &BellScenario::num_parties)
        .def_readonly("settings_per_party", &BellScenario::settings_per_party)
        .def("num_joint_settings", &BellScenario::num_joint_settings)
        .def("num_joint_outcomes", &BellScenario::num_joint_outcomes);

    py::class_<Behavior>(m, "Behavior")
        .def_readonly("table", &Behavior::table)
        .def_readonly("scenario", &Behavior::scenario)
        .def_static("uniform", &Behavior::uniform);

    py::enum_<ModelClass>(m, "ModelClass")
        .value("LHV", ModelClass::Lhv)
        .value("HLNHV", ModelClass::Hlnhv);

    py::class_<BellFunctional>(m, "BellFunctional")
        .def_readonly("name", &BellFunctional::name)
        .def_readonly("scenario", &BellFunctional::scenario)
        .def_readonly("coefficients", &BellFunctional::coefficients)
        .def_readonly("classical_bound", &BellFunctional::classical_bound)
        .def_readonly("model_class", &BellFunctional::model_class)
        .def_readonly("quantum_value", &BellFunctional::quantum_value);

    m.def("catalog", &catalog, py::arg("name"), py::arg("num_parties"));
    m.def("catalog_names", &catalog_names);
    m.def("evaluate", &evaluate);
    m.def("constant_c", &constant_C);
    m.def("constant_c_opt", [](const BellFunctional& f) { return constant_C_opt(f).value; });

    m.def("lhv_bound", [](const BellFunctional& f) { return lhv_bound(f).bound; });
    m.def("hlnhv_bound", [](const BellFunctional& f) { return hlnhv_bound(f).bound; });
    m.def("ns_vertex_count", [] { return enumerate_ns_vertices().size(); });

    m.def("ghz_state", &ghz_state);
    m.def(
        "optimize_quantum_value",
        [](const BellFunctional& f, int restarts, std::uint64_t seed) {
            return optimize_settings(f, ghz_state(f.scenario.num_parties), restarts, seed).value;
        },
        py::arg("functional"), py::arg("restarts") = 32, py::arg("seed") = 0);

    m.def(
        "sharpened_bound",
        [](const BellFunctional& f, double eta_c, ModelClass mc, bool use_c_opt) {
            return (mc == ModelClass::Lhv ? sharpened_bound_lhv(f, eta_c)
                                          : sharpened_bound_hlnhv(f, eta_c, use_c_opt))
                .bound;
        },
        py::arg("functional"), py::arg("eta_c"), py::arg("model_class") = ModelClass::Lhv,
        py::arg("use_c_opt") = true);
    m.def(
        "threshold_eta_c",
        [](const BellFunctional& f, ModelClass mc, bool use_c_opt) {
            return threshold_eta_c(f, f.quantum_value.value(), mc, use_c_opt).eta_c_star;
        },
        py::arg("functional"), py::arg("model_class") = ModelClass::Lhv,
        py::arg("use_c_opt") = true);
    m.def("mermin_family_threshold", &mermin_family_threshold);

    py::class_<DetectorModel>(m, "DetectorModel")
        .def_static("independent", &DetectorModel::independent, py::arg("eta_det"),
                    py::arg("eta_tra") = 1.0)
        .def_static("on_off", &DetectorModel::on_off, py::arg("eta_det"), py::arg("eta_tra") = 1.0,
                    py::arg("eta_1of2") = 1.0)
        .def_readwrite("eta_det", &DetectorModel::eta_det)
        .def_readwrite("eta_tra", &DetectorModel::eta_tra)
        .def_readwrite("eta_1of2", &DetectorModel::eta_1of2)
        .def_readwrite("number_resolving", &DetectorModel::number_resolving);

    m.def(
        "ys_eta_c",
        [](int parties, const DetectorModel& dm) {
            YSConfig cfg;
            cfg.num_parties = parties;
            cfg.detector = dm;
            return ys_eta_c_analytic(cfg);
        },
        py::arg("parties"), py::arg("detector"));
    m.def(
        "ys_eta_c_monte_carlo",
        [](int parties, const DetectorModel& dm, std::uint64_t samples, std::uint64_t seed) {
            YSConfig cfg;
            cfg.num_parties = parties;
            cfg.detector = dm;
            const auto est = ys_eta_c_monte_carlo(cfg, samples, seed);
            return py::make_tuple(est.estimate, est.std_error);
        },
        py::arg("parties"), py::arg("detector"), py::arg("samples") = 1000000,
        py::arg("seed") = 0);
    m.def(
        "ys_threshold_eta_det",
        [](int parties, double eta_c_star, double eta_tra, bool on_off) {
            YSConfig cfg;
            cfg.num_parties = parties;
            cfg.detector =
                on_off ? DetectorModel::on_off(1.0, eta_tra) : DetectorModel::independent(1.0, eta_tra);
            return ys_threshold_eta_det(cfg, eta_c_star);
        },
        py::arg("parties"), py::arg("eta_c_star"), py::arg("eta_tra") = 1.0,
        py::arg("on_off") = false);

    py::class_<SuiteResult>(m, "SuiteResult")
        .def_readonly("trials", &SuiteResult::trials)
        .def_readonly("passed", &SuiteResult::pass)
        .def_readonly("worst_margin", &SuiteResult::worst_margin)
        .def_readonly("detail", &SuiteResult::detail);

    m.def("run_lhv_chain_suite", &run_lhv_chain_suite, py::arg("functional"), py::arg("trials"),
          py::arg("seed") = 0);
    m.def("run_hlnhv_chain_suite", &run_hlnhv_chain_suite, py::arg("functional"), py::arg("trials"),
          py::arg("seed") = 0);
    m.def("run_fair_sampling_suite", &run_fair_sampling_suite, py::arg("functional"),
          py::arg("trials"), py::arg("seed") = 0);
    m.def("run_conservation_suite", &run_conservation_suite, py::arg("scenario"),
          py::arg("total_count"), py::arg("trials"), py::arg("seed") = 0,
          py::arg("negative_control") = false);
    m.def(
        "loophole_search",
        [](const BellFunctional& f, double target, std::uint64_t seed, int iterations) {
            const auto r = loophole_search(f, target, seed, iterations);
            py::dict out;
            out["found"] = r.found;
            out["postselected_value"] = r.postselected_value;
            out["eta_c"] = r.eta_c;
            out["sharpened_bound"] = r.sharpened_bound;
            out["iterations_used"] = r.iterations_used;
            return out;
        },
        py::arg("functional"), py::arg("target"), py::arg("seed") = 0,
        py::arg("iterations") = 100000);

    py::enum_<DiagramKind>(m, "DiagramKind")
        .value("LHV", DiagramKind::Lhv)
        .value("HLNHV", DiagramKind::Hlnhv);

    py::class_<CausalDag>(m, "CausalDag")
        .def(py::init<>())
        .def("add_node", &CausalDag::add_node)
        .def("add_edge", &CausalDag::add_edge)
        .def("add_bidirected", &CausalDag::add_bidirected)
        .def_readonly("nodes", &CausalDag::nodes)
        .def_readonly("edges", &CausalDag::edges)
        .def_readonly("bidirected", &CausalDag::bidirected);

    m.def("bell_diagram", &bell_diagram, py::arg("num_parties"), py::arg("kind"),
          py::arg("nonlocal_group") = std::vector<int>{});
    m.def(
        "d_separated",
        [](const CausalDag& g, const std::vector<std::string>& sources,
           const std::vector<std::string>& targets, const std::vector<std::string>& given) {
            const auto res = d_separated(g, DsepQuery{sources, targets, given});
            std::vector<std::pair<std::string, bool>> witness;
            for (const auto& s : res.witness) witness.emplace_back(s.node, s.collider);
            return py::make_tuple(res.separated, witness);
        },
        py::arg("graph"), py::arg("sources"), py::arg("targets"),
        py::arg("given") = std::vector<std::string>{});
    m.def("ci_oracle", &ci_oracle, py::arg("graph"), py::arg("seed"), py::arg("query"));
    py::class_<DsepQuery>(m, "DsepQuery")
        .def(py::init([](std::vector<std::string> s, std::vector<std::string> t,
                         std::vector<std::string> g) {
                 return DsepQuery{std::move(s), std::move(t), std::move(g)};
             }),
             py::arg("sources"), py::arg("targets"), py::arg("given") = std::vector<std::string>{})
        .def_readwrite("sources", &DsepQuery::sources)
        .def_readwrite("targets", &DsepQuery::targets)
        .def_readwrite("given", &DsepQuery::given);

    m.def(
        "verify_causal_claims",
        [](std::uint64_t seed, bool negative_control) {
            const auto rep = verify_causal_claims(seed, negative_control);
            py::list claims;
            for (const auto& c : rep.claims) {
                py::dict d;
                d["name"] = c.name;
                d["pass"] = c.pass;
                d["detail"] = c.detail;
                claims.append(d);
            }
            return py::make_tuple(rep.all_pass, claims);
        },
        py::arg("seed") = 0, py::arg("negative_control") = false);
}
