#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "htpl/cli.hpp"
#include "htpl/errors.hpp"
#include "htpl/io.hpp"
#include "htpl/satsim.hpp"
#include "htpl/signature.hpp"
#include "htpl/typecheck.hpp"

namespace py = pybind11;
using namespace htpl;

namespace {

std::vector<LeafStem> to_stems(const std::vector<std::vector<int>>& paths) {
    std::vector<LeafStem> out;
    for (const auto& p : paths) {
        out.emplace_back(p);
    }
    return out;
}

PositiveTypeSpec to_spec(const std::vector<std::vector<std::vector<int>>>& params,
                         const std::optional<std::vector<int>>& x_stem) {
    PositiveTypeSpec spec;
    for (const auto& tup : params) {
        spec.params.push_back(to_stems(tup));
    }
    if (x_stem) {
        spec.x_stem = LeafStem(*x_stem);
    }
    return spec;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hypergraph templates, their limit theories and the signature machinery";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    py::class_<Hypergraph>(m, "Hypergraph")
        .def(py::init<int, int, const std::vector<Tuple>&>(), py::arg("arity"), py::arg("size"),
             py::arg("edges") = std::vector<Tuple>{})
        .def_static("complete", &Hypergraph::complete)
        .def_property_readonly("arity", &Hypergraph::arity)
        .def_property_readonly("size", &Hypergraph::size)
        .def("is_edge", [](const Hypergraph& h, const Tuple& t) { return h.is_edge(t); })
        .def("uniform_edges", &Hypergraph::uniform_edges)
        .def("is_complete", &Hypergraph::is_complete)
        .def("has_extension_property", [](const Hypergraph& h, int t) { return has_extension_property(h, t); })
        .def("extension_witness", [](const Hypergraph& h, const std::vector<Tuple>& tuples) {
            return extension_witness(h, tuples);
        });

    py::class_<Template>(m, "Template")
        .def(py::init([](int arity, const std::vector<std::pair<Hypergraph, int>>& levels) {
                 std::vector<Level> lv;
                 for (const auto& [g, f] : levels) {
                     lv.push_back({g, f});
                 }
                 return Template(arity, lv);
             }),
             py::arg("arity"), py::arg("levels"))
        .def_property_readonly("arity", &Template::arity)
        .def_property_readonly("prefix_depth", &Template::prefix_depth)
        .def("level_size", &Template::level_size)
        .def("f", &Template::f)
        .def("graph", [](const Template& t, int n) { return t.level(n).graph; })
        .def("to_text", [](const Template& t) { return write_template(t); })
        .def_static("from_text", [](const std::string& s) { return read_template(s); })
        .def("__eq__", [](const Template& a, const Template& b) { return a == b; });

    m.def("complete_template", &complete_template, py::arg("arity"), py::arg("prefix_depth") = 1,
          py::arg("first_size") = 1, py::arg("growth") = 1);
    m.def(
        "random_template",
        [](int arity, const std::vector<int>& sizes, double p, const std::vector<int>& target,
           std::uint64_t seed) { return random_template(arity, sizes, p, target, seed); },
        py::arg("arity"), py::arg("sizes"), py::arg("edge_prob"), py::arg("target_f"), py::arg("seed"));
    m.def("is_valid", [](const Template& t, int depth) { return validate(t, depth).valid; });
    m.def("m_star", &m_star);

    m.def(
        "decide_positive_type",
        [](const Template& t, const std::vector<std::vector<std::vector<int>>>& params,
           const std::optional<std::vector<int>>& x_stem) {
            const auto d = decide_positive_type(t, to_spec(params, x_stem));
            return py::make_tuple(d.consistent, d.witness.path(), d.failing_level);
        },
        py::arg("template"), py::arg("params"), py::arg("x_stem") = py::none(),
        "Returns (consistent, witness stem, failing level or -1).");

    m.def(
        "transfer_counterexamples",
        [](const Template& t, int mm, std::uint64_t trials, std::uint64_t seed, int workers) {
            return transfer_check(t, mm, trials, seed, workers).counterexamples.size();
        },
        py::arg("template"), py::arg("m"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);

    m.def(
        "f_signature",
        [](const Template& t, const std::vector<int>& classes,
           const std::vector<std::vector<int>>& stems, int depth) {
            return f_signature(t, ParamType{classes, to_stems(stems)}, depth).values;
        },
        py::arg("template"), py::arg("classes"), py::arg("stems"), py::arg("depth"));
    m.def("analytic_F_bound", &analytic_F_bound);
    m.def(
        "F_estimate",
        [](const Template& t, int s) {
            const auto f = F_estimate(t, s);
            return py::make_tuple(f.value, f.analytic, f.certificates.size());
        },
        "Returns (value, analytic, certificate count).");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Runs one htpl verb in-process; returns (exit code, stdout, stderr).");
}
