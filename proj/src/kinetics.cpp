#include "msdiff/kinetics.hpp"

#include <Eigen/QR>
#include <cmath>

namespace msdiff {

Vec ReactionNetwork::log_K() const {
    return k_minus.array().log() - k_plus.array().log();
}

void ReactionNetwork::validate_shape() const {
    const int n = n_species();
    const int m = n_reactions();
    if (nu_minus.rows() != n || nu_minus.cols() != m)
        throw DimensionMismatch("nu_plus and nu_minus shapes differ");
    if (k_plus.size() != m || k_minus.size() != m)
        throw DimensionMismatch("rate constant count does not match reaction count");
    if ((nu_plus.array() < 0).any() || (nu_minus.array() < 0).any())
        throw ConfigError("stoichiometric coefficients must be nonnegative");
    if ((k_plus.array() <= 0.0).any() || (k_minus.array() <= 0.0).any())
        throw ConfigError("rate constants must be strictly positive");
    const IMat nu = nu_plus - nu_minus;
    for (int l = 0; l < m; ++l)
        if ((nu.col(l).array() == 0).all())
            throw ConfigError("stoichiometric matrix has a zero column");
}

ReferenceEquilibrium make_reference(const MixtureSpec& spec, const Composition& y_star) {
    if ((y_star.y.array() <= 0.0).any())
        throw NonInteriorComposition("reference equilibrium must be strictly interior");
    if (std::abs(y_star.y.sum() - 1.0) > kSumTol)
        throw OutOfDomain("reference equilibrium does not sum to 1");
    return ReferenceEquilibrium{
        y_star, spec.rho * y_star.y.cwiseQuotient(spec.molar_masses)};
}

static double monomial(const Vec& c, const IMat& nu, int l) {
    double p = 1.0;
    for (int j = 0; j < c.size(); ++j) {
        for (int k = 0; k < nu(j, l); ++k) p *= c(j);
    }
    return p;
}

Vec elementary_rates(const ReactionNetwork& net, const Vec& c) {
    if (c.size() != net.n_species())
        throw DimensionMismatch("concentration dimension does not match network");
    if ((c.array() < 0.0).any())
        throw NegativeConcentration("concentrations must be nonnegative");
    Vec r(net.n_reactions());
    for (int l = 0; l < net.n_reactions(); ++l)
        r(l) = -net.k_plus(l) * monomial(c, net.nu_plus, l) +
               net.k_minus(l) * monomial(c, net.nu_minus, l);
    return r;
}

Vec source_term(const ReactionNetwork& net, const MixtureSpec& spec, const Composition& y) {
    if (y.size() != spec.n_species() || net.n_species() != spec.n_species())
        throw DimensionMismatch("species counts disagree");
    Vec c = spec.rho * y.y.cwiseQuotient(spec.molar_masses);
    // Clip admissible undershoots so boundary states remain evaluable.
    c = c.cwiseMax(0.0);
    const Vec r = elementary_rates(net, c);
    return spec.molar_masses.asDiagonal() * (net.nu() * r);
}

Vec chemical_potential(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                       const Composition& y) {
    if ((y.y.array() <= 0.0).any())
        throw NonInteriorComposition("chemical potential requires strictly positive fractions");
    return (y.y.array() / ref.y_star.y.array()).log() / spec.molar_masses.array();
}

double free_energy_density(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                           const Composition& y) {
    double psi = 0.0;
    for (int k = 0; k < y.size(); ++k) {
        const double yk = y.y(k);
        if (yk <= 0.0) continue;  // 0 log 0 := 0
        psi += yk / spec.molar_masses(k) * (std::log(yk / ref.y_star.y(k)) - 1.0);
    }
    return psi;
}

double reaction_entropy_production(const MixtureSpec& spec, const ReactionNetwork& net,
                                   const ReferenceEquilibrium& ref, const Composition& y) {
    return chemical_potential(spec, ref, y).dot(source_term(net, spec, y));
}

ValidationReport validate_network(const ReactionNetwork& net, const MixtureSpec& spec) {
    net.validate_shape();
    ValidationReport rep;
    const int m = net.n_reactions();
    const Mat nu = net.nu();
    const Vec me = spec.molar_masses;  // M e

    rep.mass_conserved.resize(m);
    for (int l = 0; l < m; ++l) {
        rep.mass_conserved[l] = std::abs(nu.col(l).dot(me)) <= kRankTol * me.norm();
        if (!rep.mass_conserved[l]) rep.all_mass_conserved = false;
    }

    if (m == 0) return rep;

    Eigen::ColPivHouseholderQR<Mat> qr(nu);
    qr.setThreshold(kRankTol);
    rep.rank = static_cast<int>(qr.rank());
    const auto perm = qr.colsPermutation().indices();
    for (int i = 0; i < rep.rank; ++i)
        rep.independent_columns.push_back(perm(i));
    for (int i = rep.rank; i < m; ++i)
        rep.dependent_columns.push_back(perm(i));

    Mat nu_hat(nu.rows(), rep.rank);
    for (int i = 0; i < rep.rank; ++i)
        nu_hat.col(i) = nu.col(rep.independent_columns[i]);

    const Vec log_k = net.log_K();
    rep.alpha.resize(rep.rank, m - rep.rank);
    rep.wegscheider_ok.resize(rep.dependent_columns.size());
    for (size_t d = 0; d < rep.dependent_columns.size(); ++d) {
        const int l = rep.dependent_columns[d];
        const Vec a = nu_hat.colPivHouseholderQr().solve(nu.col(l));
        rep.alpha.col(static_cast<int>(d)) = a;
        double combo = 0.0;
        for (int i = 0; i < rep.rank; ++i)
            combo += a(i) * log_k(rep.independent_columns[i]);
        rep.wegscheider_ok[d] = std::abs(combo - log_k(l)) <= 1e-10;
        if (!rep.wegscheider_ok[d]) rep.wegscheider_consistent = false;
    }
    return rep;
}

}  // namespace msdiff
