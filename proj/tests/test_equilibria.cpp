#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msdiff/equilibria.hpp"
#include "msdiff/verify.hpp"

using namespace msdiff;

namespace {

MixtureSpec make_spec(std::initializer_list<double> masses) {
    MixtureSpec spec;
    spec.molar_masses = Vec(masses.size());
    int i = 0;
    for (double m : masses) spec.molar_masses(i++) = m;
    const int n = static_cast<int>(masses.size());
    spec.frictions = Mat::Ones(n, n) - Mat::Identity(n, n);
    spec.rho = 1.0;
    return spec;
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

ReactionNetwork empty_network(int n) {
    return ReactionNetwork{IMat::Zero(n, 0), IMat::Zero(n, 0), Vec(0), Vec(0)};
}

}  // namespace

TEST_CASE("two-species equilibrium") {
    const auto eq = find_equilibrium(isomerization(), make_spec({1.0, 1.0}));
    CHECK(eq.c_star(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(eq.c_star(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(eq.manifold_dim == 0);
    CHECK(eq.residual <= 1e-10);
}

TEST_CASE("three-species association equilibrium from uniform init") {
    const auto eq = find_equilibrium(association(), make_spec({1.0, 1.0, 2.0}));
    const double a = (std::sqrt(3.0) - 1.0) / 2.0;
    CHECK(eq.c_star(0) == doctest::Approx(a).epsilon(1e-10));
    CHECK(eq.c_star(1) == doctest::Approx(a).epsilon(1e-10));
    CHECK(eq.c_star(2) == doctest::Approx(a * a).epsilon(1e-10));
    CHECK(eq.manifold_dim == 1);
    CHECK(eq.newton_iters <= 50);
}

TEST_CASE("no reactions: every interior point is an equilibrium") {
    const auto spec = make_spec({1.0, 2.0, 3.0});
    Vec y(3);
    y << 0.2, 0.3, 0.5;
    const auto eq = find_equilibrium(empty_network(3), spec, Composition(y));
    CHECK((eq.y_star.y - y).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(eq.manifold_dim == 2);
}

TEST_CASE("equilibrium satisfies the mass constraint and all rates vanish") {
    RandomModels models(31);
    for (int k = 0; k < 10; ++k) {
        auto [spec, net] = models.random_reactive_system(5);
        const auto eq = find_equilibrium(net, spec);
        CHECK(std::abs(spec.molar_masses.dot(eq.c_star) - spec.rho) <=
              1e-11 * spec.rho);
        CHECK(elementary_rates(net, eq.c_star).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(eq.newton_iters <= 50);
    }
}

TEST_CASE("find_equilibrium refuses Wegscheider-inconsistent networks") {
    ReactionNetwork net{IMat::Zero(2, 2), IMat::Zero(2, 2), Vec(2), Vec(2)};
    net.nu_plus(0, 0) = 1;
    net.nu_minus(1, 0) = 1;
    net.nu_plus(1, 1) = 1;
    net.nu_minus(0, 1) = 1;
    net.k_plus << 2.0, 1.0;
    net.k_minus << 1.0, 1.0;
    CHECK_THROWS_AS(find_equilibrium(net, make_spec({1.0, 1.0})), NoEquilibrium);
}

TEST_CASE("find_equilibrium refuses mass-violating networks") {
    CHECK_THROWS_AS(find_equilibrium(isomerization(), make_spec({1.0, 2.0})),
                    MassNotConserved);
}

TEST_CASE("tangent_space dimensions") {
    const auto eq2 = find_equilibrium(isomerization(), make_spec({1.0, 1.0}));
    CHECK(tangent_space(isomerization(), eq2.y_star).cols() == 0);

    const auto spec3 = make_spec({1.0, 1.0, 2.0});
    const auto eq3 = find_equilibrium(association(), spec3);
    const Mat basis = tangent_space(association(), eq3.y_star);
    REQUIRE(basis.cols() == 1);
    CHECK(std::abs(basis.col(0).sum()) <= 1e-12);
    // orthogonal to the Y_*^{-1}-weighted stoichiometric column
    const Vec w = association().nu().col(0).cwiseQuotient(eq3.y_star.y);
    CHECK(std::abs(w.dot(basis.col(0))) <= 1e-10);

    CHECK(tangent_space(empty_network(3), uniform_composition(3)).cols() == 2);
}

TEST_CASE("conserved_functionals") {
    const auto spec2 = make_spec({1.0, 1.0});
    const Mat q2 = conserved_functionals(isomerization(), spec2);
    REQUIRE(q2.cols() == 1);
    CHECK(std::abs(std::abs(q2(0, 0)) - std::abs(q2(1, 0))) <= 1e-12);

    const Mat q0 = conserved_functionals(empty_network(3), make_spec({1.0, 2.0, 3.0}));
    CHECK(q0.cols() == 3);

    const auto spec3 = make_spec({1.0, 1.0, 2.0});
    const Mat q3 = conserved_functionals(association(), spec3);
    REQUIRE(q3.cols() == 2);
    // M e / |M e| is the first column
    const Vec me = spec3.molar_masses / spec3.molar_masses.norm();
    CHECK((q3.col(0) - me).norm() <= 1e-10);
    // every column annihilates nu
    CHECK((q3.transpose() * association().nu()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("min-norm Newton is deterministic over inits on the manifold") {
    const auto spec3 = make_spec({1.0, 1.0, 2.0});
    Vec init(3);
    init << 0.5, 0.2, 0.3;
    const auto eq_a = find_equilibrium(association(), spec3, Composition(init));
    const auto eq_b = find_equilibrium(association(), spec3, Composition(init));
    CHECK((eq_a.c_star - eq_b.c_star).norm() == 0.0);
    CHECK(elementary_rates(association(), eq_a.c_star).cwiseAbs().maxCoeff() <= 1e-9);
}
