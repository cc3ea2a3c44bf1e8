// Acceptance battery: runs every criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <complex>
#include <iostream>
#include <random>

#include "msdiff/equilibria.hpp"
#include "msdiff/scenario.hpp"
#include "msdiff/stability.hpp"
#include "msdiff/verify.hpp"

using namespace msdiff;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << number << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

ReactionNetwork isomerization() {
    ReactionNetwork net{IMat::Zero(2, 1), IMat::Zero(2, 1), Vec(1), Vec(1)};
    net.nu_plus(0, 0) = 1;
    net.nu_minus(1, 0) = 1;
    net.k_plus(0) = 2.0;
    net.k_minus(0) = 1.0;
    return net;
}

ReactionNetwork association() {
    ReactionNetwork net{IMat::Zero(3, 1), IMat::Zero(3, 1), Vec(1), Vec(1)};
    net.nu_plus(0, 0) = 1;
    net.nu_plus(1, 0) = 1;
    net.nu_minus(2, 0) = 1;
    net.k_plus(0) = 1.0;
    net.k_minus(0) = 1.0;
    return net;
}

MixtureSpec spec2() {
    MixtureSpec s;
    s.molar_masses = Vec::Ones(2);
    s.frictions = Mat::Zero(2, 2);
    s.frictions(0, 1) = s.frictions(1, 0) = 1.0;
    s.rho = 1.0;
    return s;
}

MixtureSpec spec3() {
    MixtureSpec s;
    s.molar_masses = Vec(3);
    s.molar_masses << 1.0, 1.0, 2.0;
    s.frictions = Mat::Zero(3, 3);
    s.frictions(0, 1) = s.frictions(1, 0) = 1.0;
    s.frictions(0, 2) = s.frictions(2, 0) = 2.0;
    s.frictions(1, 2) = s.frictions(2, 1) = 3.0;
    s.rho = 1.0;
    return s;
}

// Criteria 1-3: kernel identities, inversion round-trip, spectral positivity.
void criteria_1_to_3() {
    RandomModels models(42);
    std::mt19937_64 aux(1234);

    bool kernel_ok = true, sym_ok = true;
    bool roundtrip_ok = true, rowstruct_ok = true;
    bool spectral_ok = true, definite_ok = true;
    double worst_kernel = 0, worst_rt = 0;

    for (int n = 2; n <= 8; ++n) {
        for (int trial = 0; trial < 500; ++trial) {
            const MixtureSpec spec = models.random_mixture(n);
            std::uniform_int_distribution<int> zero_count(0, n - 2);
            const int zeros = (trial % 3 == 0) ? zero_count(aux) : 0;
            const Composition y =
                zeros > 0 ? models.random_with_zeros(n, zeros) : models.random_interior(n);

            const Mat b = assemble_B(spec, y);
            worst_kernel = std::max(worst_kernel, (b * y.y).cwiseAbs().maxCoeff());
            worst_kernel =
                std::max(worst_kernel, b.colwise().sum().cwiseAbs().maxCoeff());
            if (worst_kernel > 1e-12) kernel_ok = false;

            if (zeros == 0) {
                const Mat bs = symmetrize_B(spec, y);
                if ((bs - bs.transpose()).cwiseAbs().maxCoeff() > 1e-14) sym_ok = false;
                Eigen::SelfAdjointEigenSolver<Mat> es(bs, Eigen::EigenvaluesOnly);
                if (es.eigenvalues().maxCoeff() > 1e-12) sym_ok = false;
                if ((bs * y.y.cwiseSqrt()).cwiseAbs().maxCoeff() > 1e-11) sym_ok = false;
            }

            const Vec h = models.random_in_E(n);
            try {
                const Vec x = apply_inverse_on_E(spec, y, h);
                const double rel = (b * x - h).norm() / std::max(1.0, h.norm());
                worst_rt = std::max(worst_rt, rel);
                if (rel > 1e-10) roundtrip_ok = false;
                for (int i = 0; i < n; ++i) {
                    if (y.y(i) == 0.0 &&
                        std::abs(x(i) - h(i) / b(i, i)) >
                            1e-10 * std::max(1.0, std::abs(h(i))))
                        rowstruct_ok = false;
                }
            } catch (const SingularSystem&) {
                roundtrip_ok = false;
            }

            const EMatrix a0 = flux_matrix_A0(spec, y);
            for (const auto& z : spectrum_on_E(a0))
                if (!(z.real() > 1e-10 * a0.basis_rep.norm())) spectral_ok = false;

            if (zeros == 0 && trial % 5 == 0) {
                const Mat g = neg_APY(spec, y);
                if ((g - g.transpose()).norm() > 1e-10 * g.norm()) definite_ok = false;
                const Mat v = e_subspace_basis(n);
                Eigen::SelfAdjointEigenSolver<Mat> es(
                    (v.transpose() * (0.5 * (g + g.transpose())) * v).eval(),
                    Eigen::EigenvaluesOnly);
                if (!(es.eigenvalues().minCoeff() > 0.0)) definite_ok = false;
                Eigen::SelfAdjointEigenSolver<Mat> ef((0.5 * (g + g.transpose())).eval(),
                                                      Eigen::EigenvaluesOnly);
                if (ef.eigenvalues().minCoeff() < -1e-12) definite_ok = false;
            }
        }
    }
    report(1, "kernel identities of B and B_S", kernel_ok && sym_ok,
           "worst B residual " + std::to_string(worst_kernel));
    report(2, "inversion round-trip incl. boundary row structure",
           roundtrip_ok && rowstruct_ok, "worst relative residual " + std::to_string(worst_rt));
    report(3, "spectral positivity of A0 and definiteness of -A P Y",
           spectral_ok && definite_ok);
}

void criterion_4() {
    RandomModels models(43);
    bool ok = true;
    for (int k = 0; k < 20; ++k) {
        std::mt19937_64 aux(100 + k);
        std::uniform_int_distribution<int> species(2, 6);
        auto [spec, net] = models.random_reactive_system(species(aux));
        EquilibriumResult eq;
        try {
            eq = find_equilibrium(net, spec);
        } catch (const std::exception&) {
            ok = false;
            continue;
        }
        const ReferenceEquilibrium ref = make_reference(spec, eq.y_star);
        if (std::abs(reaction_entropy_production(spec, net, ref, eq.y_star)) > 1e-10)
            ok = false;
        for (int t = 0; t < 50; ++t) {
            const Composition y = models.random_interior(spec.n_species());
            if (reaction_entropy_production(spec, net, ref, y) > 1e-12) ok = false;
        }
    }
    report(4, "entropy production nonpositive, zero at equilibria", ok);
}

void criterion_5() {
    bool ok = true;
    const auto eq2 = find_equilibrium(isomerization(), spec2());
    ok &= std::abs(eq2.c_star(0) - 1.0 / 3.0) <= 1e-10;
    ok &= std::abs(eq2.c_star(1) - 2.0 / 3.0) <= 1e-10;
    ok &= eq2.manifold_dim == 0;

    const auto eq3 = find_equilibrium(association(), spec3());
    const double a = (std::sqrt(3.0) - 1.0) / 2.0;
    ok &= std::abs(eq3.c_star(0) - a) <= 1e-10;
    ok &= std::abs(eq3.c_star(1) - a) <= 1e-10;
    ok &= std::abs(eq3.c_star(2) - a * a) <= 1e-10;
    ok &= eq3.manifold_dim == 1;

    // tangent space vs mode-0 kernel, principal angle
    const Mat tangent = tangent_space(association(), eq3.y_star);
    const Mat a_mode0 = mode_matrix(spec3(), association(), eq3.y_star, 0.0).basis_rep;
    Eigen::JacobiSVD<Mat> svd(a_mode0, Eigen::ComputeFullV);
    const Vec kernel = e_subspace_basis(3) * svd.matrixV().col(a_mode0.cols() - 1);
    const double cosangle =
        std::abs(tangent.col(0).normalized().dot(kernel.normalized()));
    ok &= std::acos(std::min(1.0, cosangle)) <= 1e-8;

    report(5, "equilibrium correctness and tangent space", ok);
}

struct ScenarioRun {
    Scenario scenario;
    SimResult result;
};

ScenarioRun run_scenario(const std::string& dir, const std::string& name,
                         bool record_fields = false) {
    ScenarioRun run{load_scenario(dir + "/" + name), {}};
    SimConfig cfg = run.scenario.sim_config();
    cfg.record_fields = record_fields;
    run.result = simulate(cfg);
    return run;
}

void criteria_6_and_7(const std::string& dir) {
    bool lyapunov_ok = true, conserve_ok = true;
    std::string worst;
    for (const std::string name :
         {"two_species_relax.json", "two_species_diffusion.json",
          "three_species_reactive.json"}) {
        const ScenarioRun run = run_scenario(dir, name);
        const auto& trace = run.result.trace;
        for (size_t i = 0; i + 1 < trace.size(); ++i) {
            if (trace[i + 1].free_energy > trace[i].free_energy + 1e-9) {
                lyapunov_ok = false;
                worst = name;
            }
        }
        for (const Diagnostics& d : trace)
            if (d.sum_deviation > 1e-10) conserve_ok = false;
        const Vec q0 = trace.front().conserved_values;
        for (const Diagnostics& d : trace)
            for (int q = 0; q < q0.size(); ++q)
                if (std::abs(d.conserved_values(q) - q0(q)) >
                    1e-8 * std::max(1.0, std::abs(q0(q))))
                    conserve_ok = false;
    }
    report(6, "free-energy decay on shipped scenarios", lyapunov_ok, worst);
    report(7, "simplex and S^perp conservation over runs", conserve_ok);
}

void criterion_8(const std::string& dir) {
    bool ok = true;
    std::string detail;

    // pure diffusion reaches the volume-weighted mean
    const ScenarioRun diff = run_scenario(dir, "two_species_diffusion.json", true);
    const Vec mean = diff.scenario.initial_values.rowwise().mean();
    const double mean_err =
        (diff.result.final_field.values.colwise() - mean).cwiseAbs().maxCoeff();
    if (mean_err > 1e-6) {
        ok = false;
        detail += "mean err " + std::to_string(mean_err) + "; ";
    }

    // measured diffusion decay rate vs pi^2
    try {
        const DecayFit fit =
            decay_rate_estimate(diff.result.recorded_fields, diff.result.final_field.values);
        if (std::abs(fit.rate - M_PI * M_PI) > 0.15 * M_PI * M_PI) {
            ok = false;
            detail += "diffusion rate " + std::to_string(fit.rate) + "; ";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail += std::string("diffusion fit: ") + e.what() + "; ";
    }

    // uniform reactive run vs an independent ODE oracle (fine-step RK4 on
    // y' = M r(y), evaluated directly from the kinetics)
    const ScenarioRun reac = run_scenario(dir, "two_species_uniform_reactive.json", true);
    {
        const MixtureSpec& spec = reac.scenario.spec;
        const ReactionNetwork& net = *reac.scenario.network;
        Vec y(2);
        y << 0.5, 0.5;
        const double t_end = reac.scenario.t_end;
        const int steps = 200000;
        const double dt = t_end / steps;
        auto f = [&](const Vec& state) {
            return (source_term(net, spec, Composition(state)) / spec.rho).eval();
        };
        for (int s = 0; s < steps; ++s) {
            const Vec k1 = f(y);
            const Vec k2 = f(y + 0.5 * dt * k1);
            const Vec k3 = f(y + 0.5 * dt * k2);
            const Vec k4 = f(y + dt * k3);
            y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        const double ode_err =
            (reac.result.final_field.values.colwise() - y).cwiseAbs().maxCoeff();
        if (ode_err > 1e-8) {
            ok = false;
            detail += "ODE oracle err " + std::to_string(ode_err) + "; ";
        }
    }

    // measured reactive decay rate vs the mode-0 eigenvalue 3
    try {
        const DecayFit fit =
            decay_rate_estimate(reac.result.recorded_fields, reac.result.final_field.values);
        if (std::abs(fit.rate - 3.0) > 0.15 * 3.0) {
            ok = false;
            detail += "reactive rate " + std::to_string(fit.rate) + "; ";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail += std::string("reactive fit: ") + e.what() + "; ";
    }

    report(8, "convergence targets (mean, ODE oracle, decay rates)", ok, detail);
}

void criterion_9(const std::string& dir) {
    bool ok = true;
    std::string detail;
    try {
        const ScenarioRun run = run_scenario(dir, "positivity_halfzero.json");
        // snapshot at t = 0.01
        const Mat* snap = nullptr;
        for (const auto& [t, values] : run.result.snapshots)
            if (std::abs(t - 0.01) < 1e-9) snap = &values;
        if (!snap) {
            ok = false;
            detail = "snapshot at t=0.01 missing";
        } else {
            const double mn = snap->row(0).minCoeff();
            ok = mn > 0.0;
            detail = "min y_1 at t=0.01 is " + std::to_string(mn);
        }
    } catch (const StepRejected& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "instantaneous positivity from half-zero data", ok, detail);
}

void criterion_10() {
    bool ok = true;

    // quadratic-form identity for every computed eigenpair of the shipped
    // networks, plus kernel dimension and semisimplicity
    struct Case {
        MixtureSpec spec;
        ReactionNetwork net;
        int expected_kernel;
    };
    const std::vector<Case> cases = {{spec2(), isomerization(), 0},
                                     {spec3(), association(), 1}};
    for (const Case& cs : cases) {
        const auto eq = find_equilibrium(cs.net, cs.spec);
        const auto rep = spectrum_report(cs.spec, cs.net, eq.y_star, {1.0}, 8);
        if (rep.kernel_dim_mode0 != cs.expected_kernel) ok = false;
        if (!rep.semisimple) ok = false;
        if (!(rep.spectral_gap > 0.0)) ok = false;

        const int n = cs.spec.n_species();
        const Vec c_star = cs.spec.rho * eq.y_star.y.cwiseQuotient(cs.spec.molar_masses);
        Vec kdiag(cs.net.n_reactions());
        for (int l = 0; l < cs.net.n_reactions(); ++l) {
            double p = 1.0;
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < cs.net.nu_minus(j, l); ++r) p *= c_star(j);
            kdiag(l) = cs.net.k_minus(l) * p;
        }
        const Mat w = (eq.y_star.y.cwiseProduct(cs.spec.molar_masses))
                          .cwiseInverse()
                          .asDiagonal();
        const Mat a0_full = flux_matrix_A0(cs.spec, eq.y_star).full;
        const Mat nu = cs.net.nu();
        const Mat v = e_subspace_basis(n);

        for (const ModeSpectrum& mode : rep.modes) {
            const EMatrix m = mode_matrix(cs.spec, cs.net, eq.y_star, mode.lambda_laplace);
            Eigen::EigenSolver<Mat> es(m.basis_rep);
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                const std::complex<double> lambda = es.eigenvalues()(i);
                Eigen::VectorXcd u =
                    v.cast<std::complex<double>>() * es.eigenvectors().col(i);
                const std::complex<double> lhs = lambda * (u.adjoint() * (w * u))(0);
                const std::complex<double> diff_part =
                    mode.lambda_laplace * (u.adjoint() * (w * (a0_full * u).eval()))(0);
                const Eigen::VectorXcd g =
                    nu.transpose().cast<std::complex<double>>() *
                    eq.y_star.y.cwiseInverse().cast<std::complex<double>>().asDiagonal() *
                    u;
                std::complex<double> react_part = 0.0;
                for (int l = 0; l < kdiag.size(); ++l)
                    react_part += kdiag(l) * std::norm(g(l));
                if (std::abs(lhs - (diff_part + react_part)) >
                    1e-8 * std::max(1.0, std::abs(lhs)))
                    ok = false;
            }
        }
    }
    report(10, "quadratic-form spectral cross-check and mode-0 structure", ok);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scenario_dir = argc > 1 ? argv[1] : "../scenarios";
    criteria_1_to_3();
    criterion_4();
    criterion_5();
    criteria_6_and_7(scenario_dir);
    criterion_8(scenario_dir);
    criterion_9(scenario_dir);
    criterion_10();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT")
              << std::endl;
    return g_failures;
}
