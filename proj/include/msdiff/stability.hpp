#pragma once

#include <complex>
#include <vector>

#include "msdiff/solver.hpp"

namespace msdiff {

/// Jacobian of the source term at an equilibrium:
/// M r'(y_*) = -M nu K nu^T Y_*^{-1} with K = diag(k_l^- c_*^{nu_l^-}).
Mat reaction_jacobian(const ReactionNetwork& net, const MixtureSpec& spec,
                      const Composition& y_star);

/// Linearized operator on a Neumann Laplacian eigenmode with eigenvalue
/// -lambda: lambda A0(y_*) - M r'(y_*), restricted to E.
EMatrix mode_matrix(const MixtureSpec& spec, const ReactionNetwork& net,
                    const Composition& y_star, double lambda_laplace);

struct ModeSpectrum {
    double lambda_laplace = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

struct SpectrumReport {
    std::vector<ModeSpectrum> modes;
    int kernel_dim_mode0 = 0;
    bool semisimple = false;
    double spectral_gap = 0.0;
    int modes_used = 0;
};

/// Enumerates Neumann Laplacian eigenvalues of the box up to multi-index
/// k_max per axis and collects the mode-matrix spectra. The mode-0 kernel
/// dimension, its semisimplicity, and the gap over the remaining spectrum
/// come from SVD nullspace dimensions.
SpectrumReport spectrum_report(const MixtureSpec& spec, const ReactionNetwork& net,
                               const Composition& y_star,
                               const std::vector<double>& domain_lengths, int k_max);

struct DecayFit {
    double rate = 0.0;
    double r_squared = 0.0;
};

/// Least-squares slope of log ||y(t) - y_inf||_inf over recorded fields,
/// with y_inf the final field. Requires the usable deviations to span at
/// least two decades.
DecayFit decay_rate_estimate(const std::vector<std::pair<double, Mat>>& recorded_fields,
                             const Mat& y_infinity);

}  // namespace msdiff
