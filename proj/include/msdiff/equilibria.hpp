#pragma once

#include <optional>

#include "msdiff/kinetics.hpp"

namespace msdiff {

struct EquilibriumResult {
    Vec c_star;
    Composition y_star;
    double residual = 0.0;   // max |(nu_l | log c_*) - log K_l| over independent l
    int newton_iters = 0;
    int manifold_dim = 0;    // N - s - 1
};

/// Solves (nu_l | log c) = log K_l for the independent reactions together
/// with (M c | e) = rho, by damped Newton in xi = log c. Underdetermined
/// systems (manifold_dim > 0) use the minimum-norm step, so the returned
/// point depends deterministically on init (default: uniform mass fractions).
EquilibriumResult find_equilibrium(const ReactionNetwork& net, const MixtureSpec& spec,
                                   std::optional<Composition> init = std::nullopt);

/// Orthonormal basis of the tangent space N(nu^T Y_*^{-1}) cap E of the
/// equilibrium manifold; N x (N-s-1).
Mat tangent_space(const ReactionNetwork& net, const Composition& y_star);

/// Orthonormal basis of S^perp = N(nu^T), with M e / |M e| as first column
/// when the network conserves mass. Each column q induces the conserved
/// functional I_q(field) = sum_cells vol (q | rho M^{-1} y_cell).
Mat conserved_functionals(const ReactionNetwork& net, const MixtureSpec& spec);

/// I_q values for a batch of cell compositions (columns of values).
Vec evaluate_conserved(const Mat& q_basis, const MixtureSpec& spec, const Mat& values,
                       double cell_volume);

}  // namespace msdiff
