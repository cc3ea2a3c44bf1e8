#include "msdiff/mixture.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace msdiff {

void MixtureSpec::validate() const {
    const int n = n_species();
    if (n < 2) throw ConfigError("mixture needs at least 2 species");
    if ((molar_masses.array() <= 0.0).any())
        throw ConfigError("molar masses must be strictly positive");
    if (rho <= 0.0) throw ConfigError("total density must be strictly positive");
    if (frictions.rows() != n || frictions.cols() != n)
        throw DimensionMismatch("friction matrix size does not match species count");
    for (int i = 0; i < n; ++i) {
        if (frictions(i, i) != 0.0)
            throw ConfigError("friction diagonal must be exactly zero");
        for (int j = i + 1; j < n; ++j) {
            if (frictions(i, j) != frictions(j, i))
                throw ConfigError("friction matrix must be exactly symmetric");
            if (frictions(i, j) <= 0.0)
                throw ConfigError("off-diagonal frictions must be strictly positive");
        }
    }
}

Composition::Region Composition::classify() const {
    if (std::abs(y.sum() - 1.0) > kSumTol) return Region::OutOfDomain;
    const double mn = y.minCoeff();
    if (mn >= kInteriorEps) return Region::Interior;
    if (mn >= -kBoundaryTol) return Region::Boundary;
    return Region::OutOfDomain;
}

void Composition::require_admissible() const {
    if (classify() == Region::OutOfDomain)
        throw OutOfDomain("composition outside the admissible neighborhood of the simplex");
}

Composition uniform_composition(int n) {
    return Composition(Vec::Constant(n, 1.0 / n));
}

Mat e_subspace_basis(int n) {
    // Householder reflector H = I - 2 w w^T with H e1 = e/sqrt(n).
    Vec u = Vec::Constant(n, 1.0 / std::sqrt(double(n)));
    Vec w = u - Vec::Unit(n, 0);
    const double nrm = w.norm();
    Mat h = Mat::Identity(n, n);
    if (nrm > 0) {
        w /= nrm;
        h -= 2.0 * w * w.transpose();
    }
    return h.rightCols(n - 1);
}

EMatrix make_ematrix(const Mat& full) {
    if (full.rows() != full.cols())
        throw DimensionMismatch("EMatrix requires a square matrix");
    const Mat v = e_subspace_basis(static_cast<int>(full.rows()));
    return EMatrix{full, v.transpose() * full * v};
}

static void check_dims(const MixtureSpec& spec, const Composition& y) {
    if (y.size() != spec.n_species())
        throw DimensionMismatch("composition dimension does not match mixture");
}

Mat assemble_B(const MixtureSpec& spec, const Composition& y) {
    check_dims(spec, y);
    const int n = spec.n_species();
    Mat b(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) b(i, j) = spec.frictions(i, j) * y.y(i);
            diag -= spec.frictions(i, j) * y.y(j);
        }
        b(i, i) = diag;
    }
    return b;
}

Vec project_P(const Composition& y, const Vec& v) {
    if (v.size() != y.size())
        throw DimensionMismatch("vector dimension does not match composition");
    return v - v.sum() * y.y;
}

Mat symmetrize_B(const MixtureSpec& spec, const Composition& y) {
    check_dims(spec, y);
    if ((y.y.array() <= 0.0).any())
        throw NonInteriorComposition("symmetrization requires strictly positive mass fractions");
    const int n = spec.n_species();
    Mat bs(n, n);
    for (int i = 0; i < n; ++i) {
        bs(i, i) = -spec.frictions.row(i).dot(y.y);
        for (int j = i + 1; j < n; ++j) {
            const double d = spec.frictions(i, j) * std::sqrt(y.y(i) * y.y(j));
            bs(i, j) = d;
            bs(j, i) = d;
        }
    }
    return bs;
}

Vec apply_inverse_on_E(const MixtureSpec& spec, const Composition& y, const Vec& h) {
    check_dims(spec, y);
    if (h.size() != y.size())
        throw DimensionMismatch("right-hand side dimension does not match mixture");
    y.require_admissible();
    const double hn = h.norm();
    if (std::abs(h.sum()) > 1e-10 * std::max(1.0, hn))
        throw NotInE("right-hand side is not in the hyperplane E");

    const int n = spec.n_species();
    Mat d = Mat::Zero(n + 1, n + 1);
    d.topLeftCorner(n, n) = assemble_B(spec, y);
    d.col(n).head(n) = y.y;
    d.row(n).head(n).setOnes();

    Eigen::PartialPivLU<Mat> lu(d);
    Vec rhs = Vec::Zero(n + 1);
    rhs.head(n) = h;
    const Vec sol = lu.solve(rhs);
    const Vec x = sol.head(n);

    // Verify the bordered solve actually inverted B on E.
    const double res = (d.topLeftCorner(n, n) * x - h).norm();
    if (!x.allFinite() || res > kInverseTol * std::max(1.0, hn))
        throw SingularSystem("bordered Maxwell-Stefan system is numerically singular");
    return x;
}

Vec apply_A0(const MixtureSpec& spec, const Composition& y, const Vec& v) {
    const Vec h = project_P(y, spec.molar_masses.cwiseInverse().cwiseProduct(v));
    return -apply_inverse_on_E(spec, y, h);
}

EMatrix flux_matrix_A0(const MixtureSpec& spec, const Composition& y) {
    const int n = spec.n_species();
    Mat full(n, n);
    for (int j = 0; j < n; ++j)
        full.col(j) = apply_A0(spec, y, Vec::Unit(n, j));
    return make_ematrix(full);
}

std::vector<std::complex<double>> spectrum_on_E(const EMatrix& m) {
    Eigen::EigenSolver<Mat> es(m.basis_rep, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigensolverFailure("eigensolver did not converge on basis_rep");
    std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                         es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

double spectral_radius_on_E(const EMatrix& m) {
    double r = 0.0;
    for (const auto& z : spectrum_on_E(m)) r = std::max(r, std::abs(z));
    return r;
}

Mat neg_APY(const MixtureSpec& spec, const Composition& y) {
    const int n = spec.n_species();
    Mat g(n, n);
    for (int j = 0; j < n; ++j) {
        const Vec h = project_P(y, y.y(j) * Vec::Unit(n, j));
        g.col(j) = -apply_inverse_on_E(spec, y, h);
    }
    return g;
}

}  // namespace msdiff
