#pragma once

#include <complex>
#include <vector>

#include "msdiff/common.hpp"

namespace msdiff {

/// Linear map on the hyperplane E = {e}^perp, stored both as a full N x N
/// matrix (whose restriction to E is the represented map) and as its
/// (N-1) x (N-1) representation in a fixed orthonormal basis of E.
struct EMatrix {
    Mat full;
    Mat basis_rep;

    int ambient_dim() const { return static_cast<int>(full.rows()); }
};

/// Fixed orthonormal basis of E as the trailing N-1 columns of the
/// Householder reflector mapping e/sqrt(N) to the first coordinate axis.
/// Deterministic, so basis_rep spectra are reproducible.
Mat e_subspace_basis(int n);

EMatrix make_ematrix(const Mat& full);

/// Friction matrix B(y): off-diagonal f_ij y_i, diagonal -sum_l f_il y_l.
/// Satisfies B y = 0 and e^T B = 0.
Mat assemble_B(const MixtureSpec& spec, const Composition& y);

/// Projection P(y) v = v - (v|e) y onto E along span{y}.
Vec project_P(const Composition& y, const Vec& v);

/// Symmetrization Y^{-1/2} B(y) Y^{1/2}; requires strictly interior y.
/// Negative semidefinite with kernel span{y^{1/2}}.
Mat symmetrize_B(const MixtureSpec& spec, const Composition& y);

/// Solves B(y) x = h with x in E through the bordered system
/// [[B, y], [e^T, 0]] (x, alpha)^T = (h, 0)^T.
Vec apply_inverse_on_E(const MixtureSpec& spec, const Composition& y, const Vec& h);

/// Negative flux matrix A0(y) = -(B(y)|_E)^{-1} P(y) M^{-1} on E.
/// Its basis_rep spectrum lies in the open right half-plane.
EMatrix flux_matrix_A0(const MixtureSpec& spec, const Composition& y);

/// A0(y) applied to a single vector; avoids assembling the full matrix.
Vec apply_A0(const MixtureSpec& spec, const Composition& y, const Vec& v);

/// Eigenvalues of basis_rep, sorted by real part ascending.
std::vector<std::complex<double>> spectrum_on_E(const EMatrix& m);

/// Spectral radius of basis_rep.
double spectral_radius_on_E(const EMatrix& m);

/// -A(y) P(y) Y assembled columnwise; symmetric PSD for interior y,
/// positive definite on E.
Mat neg_APY(const MixtureSpec& spec, const Composition& y);

}  // namespace msdiff
