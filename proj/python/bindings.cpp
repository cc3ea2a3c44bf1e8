#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msdiff/equilibria.hpp"
#include "msdiff/scenario.hpp"
#include "msdiff/stability.hpp"
#include "msdiff/verify.hpp"

namespace py = pybind11;
using namespace msdiff;

namespace {

py::dict result_to_dict(const SimResult& result) {
    py::dict out;
    py::list times, psi, sum_dev;
    for (const Diagnostics& d : result.trace) {
        times.append(d.time);
        psi.append(d.free_energy);
        sum_dev.append(d.sum_deviation);
    }
    out["t"] = times;
    out["free_energy"] = psi;
    out["sum_deviation"] = sum_dev;
    out["final_values"] = result.final_field.values;
    out["final_time"] = result.final_field.time;
    out["steps"] = result.steps;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Maxwell-Stefan reaction-diffusion core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NoEquilibrium>(m, "NoEquilibrium", PyExc_RuntimeError);
    py::register_exception<StepRejected>(m, "StepRejected", PyExc_RuntimeError);

    py::class_<MixtureSpec>(m, "MixtureSpec")
        .def(py::init([](const Vec& masses, const Mat& frictions, double rho) {
                 MixtureSpec spec{masses, frictions, rho};
                 spec.validate();
                 return spec;
             }),
             py::arg("molar_masses"), py::arg("frictions"), py::arg("rho") = 1.0)
        .def_readonly("molar_masses", &MixtureSpec::molar_masses)
        .def_readonly("frictions", &MixtureSpec::frictions)
        .def_readonly("rho", &MixtureSpec::rho)
        .def_property_readonly("n_species", &MixtureSpec::n_species);

    py::class_<ReactionNetwork>(m, "ReactionNetwork")
        .def(py::init([](const IMat& nu_plus, const IMat& nu_minus, const Vec& k_plus,
                         const Vec& k_minus) {
                 ReactionNetwork net{nu_plus, nu_minus, k_plus, k_minus};
                 net.validate_shape();
                 return net;
             }),
             py::arg("nu_plus"), py::arg("nu_minus"), py::arg("k_plus"),
             py::arg("k_minus"))
        .def_property_readonly("n_reactions", &ReactionNetwork::n_reactions)
        .def("nu", &ReactionNetwork::nu);

    m.def(
        "friction_matrix",
        [](const MixtureSpec& spec, const Vec& y) {
            return assemble_B(spec, Composition(y));
        },
        py::arg("spec"), py::arg("y"));
    m.def(
        "flux_matrix",
        [](const MixtureSpec& spec, const Vec& y) {
            return flux_matrix_A0(spec, Composition(y)).full;
        },
        py::arg("spec"), py::arg("y"));
    m.def(
        "flux_spectrum",
        [](const MixtureSpec& spec, const Vec& y) {
            return spectrum_on_E(flux_matrix_A0(spec, Composition(y)));
        },
        py::arg("spec"), py::arg("y"));

    m.def(
        "find_equilibrium",
        [](const ReactionNetwork& net, const MixtureSpec& spec) {
            const EquilibriumResult eq = find_equilibrium(net, spec);
            py::dict out;
            out["c_star"] = eq.c_star;
            out["y_star"] = eq.y_star.y;
            out["residual"] = eq.residual;
            out["newton_iters"] = eq.newton_iters;
            out["manifold_dim"] = eq.manifold_dim;
            return out;
        },
        py::arg("network"), py::arg("spec"));

    m.def(
        "spectrum_report",
        [](const MixtureSpec& spec, const ReactionNetwork& net, const Vec& y_star,
           const std::vector<double>& lengths, int k_max) {
            const SpectrumReport rep =
                spectrum_report(spec, net, Composition(y_star), lengths, k_max);
            py::dict out;
            out["kernel_dim_mode0"] = rep.kernel_dim_mode0;
            out["semisimple"] = rep.semisimple;
            out["spectral_gap"] = rep.spectral_gap;
            py::list modes;
            for (const ModeSpectrum& mode : rep.modes) {
                py::dict d;
                d["lambda_laplace"] = mode.lambda_laplace;
                d["eigenvalues"] = mode.eigenvalues;
                modes.append(d);
            }
            out["modes"] = modes;
            return out;
        },
        py::arg("spec"), py::arg("network"), py::arg("y_star"), py::arg("lengths"),
        py::arg("k_max") = 8);

    m.def(
        "run_scenario_file",
        [](const std::string& path) { return result_to_dict(simulate(load_scenario(path).sim_config())); },
        py::arg("path"));
    m.def(
        "run_scenario_text",
        [](const std::string& text) { return result_to_dict(simulate(parse_scenario(text).sim_config())); },
        py::arg("json_text"));

    m.def(
        "verify",
        [](int trials, unsigned long long seed) {
            VerifyOptions opts;
            opts.trials = trials;
            opts.seed = seed;
            py::list out;
            for (const PropertyResult& r : run_property_suite(opts)) {
                py::dict d;
                d["name"] = r.name;
                d["checks"] = r.checks;
                d["failures"] = r.failures;
                d["worst_residual"] = r.worst_residual;
                out.append(d);
            }
            return out;
        },
        py::arg("trials") = 100, py::arg("seed") = 42ULL);
}
