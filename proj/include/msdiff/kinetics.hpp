#pragma once

#include <vector>

#include "msdiff/common.hpp"

namespace msdiff {

/// Reversible mass-action network: m reactions with integer stoichiometric
/// coefficients nu^+/nu^- (N x m) and positive rate constants.
struct ReactionNetwork {
    IMat nu_plus;
    IMat nu_minus;
    Vec k_plus;
    Vec k_minus;

    int n_species() const { return static_cast<int>(nu_plus.rows()); }
    int n_reactions() const { return static_cast<int>(nu_plus.cols()); }

    /// Stoichiometric matrix nu = nu^+ - nu^-.
    Mat nu() const { return (nu_plus - nu_minus).cast<double>(); }

    /// log K_l = log k_l^- - log k_l^+, kept in log form to tolerate
    /// extreme rate ratios.
    Vec log_K() const;

    void validate_shape() const;
};

/// A strictly positive chemical equilibrium used as reference point for
/// potentials and free energy.
struct ReferenceEquilibrium {
    Composition y_star;
    Vec c_star;  // rho M^{-1} y_star
};

ReferenceEquilibrium make_reference(const MixtureSpec& spec, const Composition& y_star);

/// Elementary rates r_l(c) = -k_l^+ c^{nu_l^+} + k_l^- c^{nu_l^-}
/// (multiindex powers, 0^0 = 1).
Vec elementary_rates(const ReactionNetwork& net, const Vec& c);

/// M r(y) = M nu r(rho M^{-1} y); lies in E for mass-conserving networks.
Vec source_term(const ReactionNetwork& net, const MixtureSpec& spec, const Composition& y);

/// mu_k = (1/M_k) log(y_k / y*_k), strictly interior y only.
Vec chemical_potential(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                       const Composition& y);

/// psi(y) = sum_k (y_k/M_k)(log(y_k/y*_k) - 1), with 0 log 0 := 0.
double free_energy_density(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                           const Composition& y);

/// (mu(y) | M r(y)); nonpositive on the interior, zero exactly at
/// chemical equilibria.
double reaction_entropy_production(const MixtureSpec& spec, const ReactionNetwork& net,
                                   const ReferenceEquilibrium& ref, const Composition& y);

struct ValidationReport {
    std::vector<bool> mass_conserved;      // per reaction: (nu_l | M e) = 0
    int rank = 0;                          // s = rank(nu)
    std::vector<int> independent_columns;  // maximal independent column set
    Mat alpha;                             // s x (m - s): dependent columns in terms of the set
    std::vector<int> dependent_columns;
    std::vector<bool> wegscheider_ok;      // per dependent column
    bool all_mass_conserved = true;
    bool wegscheider_consistent = true;

    bool ok() const { return all_mass_conserved && wegscheider_consistent; }
};

/// Checks condition (R): mass conservation per reaction, rank structure of
/// nu, and the Wegscheider compatibility of equilibrium constants.
ValidationReport validate_network(const ReactionNetwork& net, const MixtureSpec& spec);

}  // namespace msdiff
