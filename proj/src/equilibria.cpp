#include "msdiff/equilibria.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace msdiff {

namespace {

// Orthonormal nullspace basis of a (possibly empty) matrix via SVD.
Mat nullspace(const Mat& a, int cols) {
    if (a.rows() == 0) return Mat::Identity(cols, cols);
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const double tol = kRankTol * std::max(1.0, svd.singularValues().size() > 0
                                                    ? svd.singularValues()(0)
                                                    : 0.0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

}  // namespace

EquilibriumResult find_equilibrium(const ReactionNetwork& net, const MixtureSpec& spec,
                                   std::optional<Composition> init) {
    spec.validate();
    const int n = spec.n_species();
    const ValidationReport rep = validate_network(net, spec);
    if (!rep.all_mass_conserved)
        throw MassNotConserved("network does not conserve total mass");
    if (!rep.wegscheider_consistent)
        throw NoEquilibrium("Wegscheider conditions fail: no positive equilibrium exists");

    const int s = rep.rank;
    Mat nu_hat(n, s);
    Vec log_k_hat(s);
    {
        const Mat nu = net.nu();
        const Vec log_k = net.log_K();
        for (int i = 0; i < s; ++i) {
            nu_hat.col(i) = nu.col(rep.independent_columns[i]);
            log_k_hat(i) = log_k(rep.independent_columns[i]);
        }
    }

    const Composition y0 = init.value_or(uniform_composition(n));
    if ((y0.y.array() <= 0.0).any())
        throw NonInteriorComposition("equilibrium search needs a strictly interior init");
    Vec xi = (spec.rho * y0.y.cwiseQuotient(spec.molar_masses)).array().log();

    auto residual = [&](const Vec& x) {
        Vec f(s + 1);
        f.head(s) = nu_hat.transpose() * x - log_k_hat;
        f(s) = spec.molar_masses.dot(x.array().exp().matrix()) - spec.rho;
        return f;
    };

    Vec f = residual(xi);
    int iters = 0;
    const double tol = 1e-12 * std::max(1.0, spec.rho);
    while (f.norm() > tol) {
        if (++iters > 100)
            throw NewtonDiverged("equilibrium Newton iteration exceeded 100 steps");
        Mat jac(s + 1, n);
        jac.topRows(s) = nu_hat.transpose();
        jac.row(s) = (spec.molar_masses.array() * xi.array().exp()).transpose();
        // Minimum-norm step for underdetermined systems.
        const Vec step = -jac.completeOrthogonalDecomposition().solve(f);

        double t = 1.0;
        const double f0 = f.squaredNorm();
        while (true) {
            const Vec cand = xi + t * step;
            const Vec fc = residual(cand);
            if (fc.squaredNorm() <= (1.0 - 0.5 * t) * f0 || t < std::ldexp(1.0, -30)) {
                xi = cand;
                f = fc;
                break;
            }
            t *= 0.5;
        }
    }

    EquilibriumResult result;
    result.c_star = xi.array().exp();
    result.y_star = Composition(spec.molar_masses.cwiseProduct(result.c_star) / spec.rho);
    // Renormalize roundoff so the composition invariant holds exactly.
    result.y_star.y /= result.y_star.y.sum();
    result.residual =
        s > 0 ? (nu_hat.transpose() * xi - log_k_hat).cwiseAbs().maxCoeff() : 0.0;
    result.newton_iters = iters;
    result.manifold_dim = n - s - 1;
    return result;
}

Mat tangent_space(const ReactionNetwork& net, const Composition& y_star) {
    if ((y_star.y.array() <= 0.0).any())
        throw NonInteriorComposition("tangent space requires a strictly interior point");
    const int n = y_star.size();
    const Mat nu = net.nu();
    const int s = nu.cols() == 0
                      ? 0
                      : static_cast<int>(
                            Eigen::ColPivHouseholderQR<Mat>(nu).setThreshold(kRankTol).rank());

    Mat stacked(nu.cols() + 1, n);
    stacked.topRows(nu.cols()) = nu.transpose() * y_star.y.cwiseInverse().asDiagonal();
    stacked.row(nu.cols()).setOnes();
    const Mat basis = nullspace(stacked, n);
    if (static_cast<int>(basis.cols()) != n - s - 1)
        throw DimensionMismatch("tangent space dimension mismatch; rank tolerance failed");
    return basis;
}

Mat conserved_functionals(const ReactionNetwork& net, const MixtureSpec& spec) {
    const int n = spec.n_species();
    Mat ker = nullspace(net.nu().transpose(), n);

    // Rotate the basis so that M e / |M e| leads, when it lies in S^perp.
    const Vec me = spec.molar_masses / spec.molar_masses.norm();
    const Vec coeffs = ker.transpose() * me;
    if (ker.cols() > 0 && (ker * coeffs - me).norm() <= 1e-10) {
        Mat aug(n, ker.cols());
        aug.col(0) = me;
        int out = 1;
        for (int j = 0; j < ker.cols() && out < ker.cols(); ++j) {
            Vec v = ker.col(j) - me * me.dot(ker.col(j));
            for (int i = 1; i < out; ++i) v -= aug.col(i) * aug.col(i).dot(v);
            const double nrm = v.norm();
            if (nrm > 1e-8) aug.col(out++) = v / nrm;
        }
        if (out == ker.cols()) ker = aug;
    }
    return ker;
}

Vec evaluate_conserved(const Mat& q_basis, const MixtureSpec& spec, const Mat& values,
                       double cell_volume) {
    const Mat c = spec.rho * spec.molar_masses.cwiseInverse().asDiagonal() * values;
    return cell_volume * (q_basis.transpose() * c).rowwise().sum();
}

}  // namespace msdiff
