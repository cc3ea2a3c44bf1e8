#include "msdiff/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "msdiff/equilibria.hpp"

namespace msdiff {

struct RandomModels::Impl {
    std::mt19937_64 rng;
};

RandomModels::RandomModels(unsigned long long seed)
    : impl(std::make_shared<Impl>(Impl{std::mt19937_64(seed)})) {}

MixtureSpec RandomModels::random_mixture(int n) {
    std::uniform_real_distribution<double> mass(0.5, 2.0);
    std::uniform_real_distribution<double> fric(0.5, 3.0);
    std::uniform_real_distribution<double> dens(0.5, 2.0);
    MixtureSpec spec;
    spec.molar_masses = Vec::NullaryExpr(n, [&](Eigen::Index) { return mass(impl->rng); });
    spec.frictions = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            spec.frictions(i, j) = spec.frictions(j, i) = fric(impl->rng);
    spec.rho = dens(impl->rng);
    return spec;
}

Composition RandomModels::random_interior(int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Vec y = Vec::NullaryExpr(n, [&](Eigen::Index) { return u(impl->rng); });
    y /= y.sum();
    return Composition(y);
}

Composition RandomModels::random_with_zeros(int n, int zeros) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Vec y = Vec::NullaryExpr(n, [&](Eigen::Index) { return u(impl->rng); });
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), impl->rng);
    for (int z = 0; z < zeros; ++z) y(idx[z]) = 0.0;
    y /= y.sum();
    return Composition(y);
}

Vec RandomModels::random_in_E(int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v = Vec::NullaryExpr(n, [&](Eigen::Index) { return g(impl->rng); });
    v.array() -= v.mean();
    return v;
}

std::pair<MixtureSpec, ReactionNetwork> RandomModels::random_reactive_system(
    int n, int max_reactions) {
    std::uniform_int_distribution<int> mass_pick(1, 4);
    std::uniform_int_distribution<int> coeff(0, 2);
    std::uniform_real_distribution<double> logc(-0.8, 0.8);
    std::uniform_real_distribution<double> fric(0.5, 3.0);

    MixtureSpec spec;
    Eigen::VectorXi masses(n);
    masses(0) = 1;  // a unit-mass species keeps the mass-balancing walk solvable
    for (int k = 1; k < n; ++k) masses(k) = mass_pick(impl->rng);
    spec.molar_masses = masses.cast<double>();
    spec.frictions = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            spec.frictions(i, j) = spec.frictions(j, i) = fric(impl->rng);
    spec.rho = 1.0;

    std::uniform_int_distribution<int> react_count(1, max_reactions);
    const int m = react_count(impl->rng);
    ReactionNetwork net{IMat::Zero(n, m), IMat::Zero(n, m), Vec(m), Vec(m)};
    const Vec log_c_star =
        Vec::NullaryExpr(n, [&](Eigen::Index) { return logc(impl->rng); });

    for (int l = 0; l < m; ++l) {
        while (true) {
            Eigen::VectorXi np = Eigen::VectorXi::Zero(n);
            for (int k = 0; k < n; ++k) np(k) = coeff(impl->rng);
            if (np.sum() == 0) continue;
            int remaining = np.dot(masses);
            Eigen::VectorXi nm = Eigen::VectorXi::Zero(n);
            while (remaining > 0) {
                std::uniform_int_distribution<int> pick(0, n - 1);
                const int k = pick(impl->rng);
                if (masses(k) <= remaining) {
                    nm(k) += 1;
                    remaining -= masses(k);
                }
            }
            if ((np - nm).isZero()) continue;
            net.nu_plus.col(l) = np;
            net.nu_minus.col(l) = nm;
            break;
        }
        // Plant the equilibrium: K_l = c_*^{nu_l}, so log K matches exactly.
        const double log_K =
            (net.nu_plus.col(l) - net.nu_minus.col(l)).cast<double>().dot(log_c_star);
        const double kp = std::exp(logc(impl->rng));
        net.k_plus(l) = kp;
        net.k_minus(l) = kp * std::exp(log_K);
    }
    return {spec, net};
}

namespace {

struct Prop {
    PropertyResult result;
    void check(double residual, double tol) {
        ++result.checks;
        result.worst_residual = std::max(result.worst_residual, residual);
        if (!(residual <= tol)) ++result.failures;
    }
};

double sym_eig_max(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts) {
    if (opts.trials <= 0) throw ConfigError("trials must be positive");
    if (opts.n_min < 2 || opts.n_max < opts.n_min)
        throw ConfigError("invalid species range");

    auto assemble = opts.b_assembler
                        ? opts.b_assembler
                        : [](const MixtureSpec& s, const Composition& y) {
                              return assemble_B(s, y);
                          };

    Prop kernel{{"B-kernel: B y = 0 and e^T B = 0"}};
    Prop sym{{"B_S: symmetric, neg. semidefinite, kernel y^{1/2}"}};
    Prop roundtrip{{"inversion round-trip B A h = h (incl. boundary)"}};
    Prop rowstruct{{"boundary row structure (A h)_i = h_i / b_ii"}};
    Prop spectral{{"spectral positivity of A0 on E"}};
    Prop definite{{"-A P Y symmetric PSD, definite on E"}};
    Prop entropy{{"entropy production (mu | M r) <= 0"}};

    RandomModels models(opts.seed);
    std::mt19937_64 aux(opts.seed ^ 0x9e3779b97f4a7c15ULL);

    for (int n = opts.n_min; n <= opts.n_max; ++n) {
        for (int trial = 0; trial < opts.trials; ++trial) {
            const MixtureSpec spec = models.random_mixture(n);
            std::uniform_int_distribution<int> zero_count(0, n - 2);
            const int zeros = (trial % 3 == 0) ? zero_count(aux) : 0;
            const Composition y =
                zeros > 0 ? models.random_with_zeros(n, zeros) : models.random_interior(n);

            const Mat b = assemble(spec, y);
            kernel.check((b * y.y).cwiseAbs().maxCoeff(), 1e-12);
            kernel.check(b.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);

            if (zeros == 0) {
                const Mat bs = symmetrize_B(spec, y);
                sym.check((bs - bs.transpose()).cwiseAbs().maxCoeff(), 1e-14);
                sym.check(std::max(0.0, sym_eig_max(bs)), 1e-12);
                sym.check((bs * y.y.cwiseSqrt()).cwiseAbs().maxCoeff(), 1e-11);
            }

            const Vec h = models.random_in_E(n);
            try {
                const Vec x = apply_inverse_on_E(spec, y, h);
                roundtrip.check((b * x - h).norm() / std::max(1.0, h.norm()), 1e-10);
                for (int i = 0; i < n; ++i) {
                    if (y.y(i) == 0.0) {
                        const double bii = b(i, i);
                        rowstruct.check(std::abs(x(i) - h(i) / bii) /
                                            std::max(1.0, std::abs(h(i))),
                                        1e-10);
                    }
                }
            } catch (const SingularSystem&) {
                roundtrip.check(1.0, 0.0);  // count as failure
            }

            const EMatrix a0 = flux_matrix_A0(spec, y);
            double min_re = std::numeric_limits<double>::infinity();
            for (const auto& z : spectrum_on_E(a0)) min_re = std::min(min_re, z.real());
            spectral.check(min_re > 1e-10 * a0.basis_rep.norm() ? 0.0 : 1.0, 0.5);

            if (zeros == 0) {
                const Mat g = neg_APY(spec, y);
                definite.check((g - g.transpose()).norm() / std::max(1.0, g.norm()), 1e-10);
                const Mat v = e_subspace_basis(n);
                const Mat g_e = v.transpose() * 0.5 * (g + g.transpose()) * v;
                Eigen::SelfAdjointEigenSolver<Mat> es(g_e, Eigen::EigenvaluesOnly);
                definite.check(es.eigenvalues().minCoeff() > 0.0 ? 0.0 : 1.0, 0.5);
            }
        }
    }

    for (int k = 0; k < opts.n_networks; ++k) {
        std::uniform_int_distribution<int> species(std::max(2, opts.n_min),
                                                   std::max(3, std::min(opts.n_max, 6)));
        const int n = species(aux);
        auto [spec, net] = models.random_reactive_system(n);
        EquilibriumResult eq;
        try {
            eq = find_equilibrium(net, spec);
        } catch (const NewtonDiverged&) {
            entropy.check(1.0, 0.0);
            continue;
        }
        const ReferenceEquilibrium ref = make_reference(spec, eq.y_star);
        entropy.check(reaction_entropy_production(spec, net, ref, eq.y_star), 1e-10);
        for (int t = 0; t < opts.network_trials; ++t) {
            const Composition y = models.random_interior(n);
            entropy.check(reaction_entropy_production(spec, net, ref, y), 1e-12);
        }
    }

    return {kernel.result,   sym.result,      roundtrip.result, rowstruct.result,
            spectral.result, definite.result, entropy.result};
}

void print_property_results(std::ostream& os, const std::vector<PropertyResult>& results) {
    for (const PropertyResult& r : results) {
        os << (r.passed() ? "PASS" : "FAIL") << "  " << r.name << "  checks=" << r.checks
           << " failures=" << r.failures << " worst_residual=" << r.worst_residual << "\n";
    }
}

}  // namespace msdiff
