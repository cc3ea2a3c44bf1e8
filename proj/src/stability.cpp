#include "msdiff/stability.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace msdiff {

namespace {

int nullity(const Mat& a, double tol) {
    Eigen::JacobiSVD<Mat> svd(a);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    return static_cast<int>(a.cols()) - rank;
}

double monomial(const Vec& c, const IMat& nu, int l) {
    double p = 1.0;
    for (int j = 0; j < c.size(); ++j)
        for (int k = 0; k < nu(j, l); ++k) p *= c(j);
    return p;
}

}  // namespace

Mat reaction_jacobian(const ReactionNetwork& net, const MixtureSpec& spec,
                      const Composition& y_star) {
    if ((y_star.y.array() <= 0.0).any())
        throw NonInteriorComposition("linearization requires a strictly interior point");
    const Vec c_star = spec.rho * y_star.y.cwiseQuotient(spec.molar_masses);
    const Vec rates = net.n_reactions() > 0 ? elementary_rates(net, c_star) : Vec(0);
    if (rates.size() > 0) {
        const double scale = net.k_plus.cwiseAbs().maxCoeff();
        if (rates.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale))
            throw NotAnEquilibrium("point is not a chemical equilibrium of the network");
    }

    const int n = spec.n_species();
    if (net.n_reactions() == 0) return Mat::Zero(n, n);

    Vec kdiag(net.n_reactions());
    for (int l = 0; l < net.n_reactions(); ++l)
        kdiag(l) = net.k_minus(l) * monomial(c_star, net.nu_minus, l);

    const Mat nu = net.nu();
    return -(spec.molar_masses.asDiagonal() * nu) * kdiag.asDiagonal() *
           (nu.transpose() * y_star.y.cwiseInverse().asDiagonal());
}

EMatrix mode_matrix(const MixtureSpec& spec, const ReactionNetwork& net,
                    const Composition& y_star, double lambda_laplace) {
    if (lambda_laplace < 0.0)
        throw ConfigError("Laplace eigenvalue must be nonnegative");
    const Mat a0 = flux_matrix_A0(spec, y_star).full;
    const Mat jac = reaction_jacobian(net, spec, y_star);
    return make_ematrix(lambda_laplace * a0 - jac);
}

SpectrumReport spectrum_report(const MixtureSpec& spec, const ReactionNetwork& net,
                               const Composition& y_star,
                               const std::vector<double>& domain_lengths, int k_max) {
    if (k_max < 8) throw ConfigError("k_max must be at least 8");
    if (domain_lengths.empty() || domain_lengths.size() > 2)
        throw ConfigError("box domains are 1D or 2D");

    SpectrumReport rep;
    rep.modes_used = k_max;

    // Mode-0 kernel and semisimplicity.
    const Mat a_mode0 = mode_matrix(spec, net, y_star, 0.0).basis_rep;
    const double tol0 = 1e-9 * std::max(1.0, a_mode0.norm());
    rep.kernel_dim_mode0 = nullity(a_mode0, tol0);
    {
        const Mat a_sq = a_mode0 * a_mode0;
        const int null_sq = nullity(a_sq, 1e-9 * std::max(1.0, a_sq.norm()));
        // Guard against the SVD gap straddling the tolerance.
        Eigen::JacobiSVD<Mat> svd(a_mode0);
        for (int i = 0; i < svd.singularValues().size(); ++i) {
            const double s = svd.singularValues()(i);
            if (s > 0.1 * tol0 && s < 10.0 * tol0)
                throw SemisimplicityUndecided("singular value straddles the nullspace tolerance");
        }
        rep.semisimple = (null_sq == rep.kernel_dim_mode0);
    }

    // Enumerate Laplace eigenvalues of the box with Neumann conditions.
    std::vector<double> lambdas;
    if (domain_lengths.size() == 1) {
        for (int k = 0; k <= k_max; ++k) {
            const double w = k * M_PI / domain_lengths[0];
            lambdas.push_back(w * w);
        }
    } else {
        for (int kx = 0; kx <= k_max; ++kx)
            for (int ky = 0; ky <= k_max; ++ky) {
                const double wx = kx * M_PI / domain_lengths[0];
                const double wy = ky * M_PI / domain_lengths[1];
                lambdas.push_back(wx * wx + wy * wy);
            }
    }
    std::sort(lambdas.begin(), lambdas.end());

    double gap = std::numeric_limits<double>::infinity();
    for (double lam : lambdas) {
        ModeSpectrum ms;
        ms.lambda_laplace = lam;
        ms.eigenvalues = spectrum_on_E(mode_matrix(spec, net, y_star, lam));
        if (lam == 0.0) {
            // Exclude the kernel: drop the kernel_dim_mode0 smallest-modulus
            // eigenvalues from the gap.
            auto ev = ms.eigenvalues;
            std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
                return std::abs(a) < std::abs(b);
            });
            for (size_t i = rep.kernel_dim_mode0; i < ev.size(); ++i)
                gap = std::min(gap, ev[i].real());
        } else {
            for (const auto& z : ms.eigenvalues) gap = std::min(gap, z.real());
        }
        rep.modes.push_back(std::move(ms));
    }
    rep.spectral_gap = gap;
    return rep;
}

DecayFit decay_rate_estimate(const std::vector<std::pair<double, Mat>>& recorded_fields,
                             const Mat& y_infinity) {
    std::vector<double> ts, devs;
    for (size_t i = 0; i + 1 < recorded_fields.size(); ++i) {
        const double d = (recorded_fields[i].second - y_infinity).cwiseAbs().maxCoeff();
        if (d > 0.0) {
            ts.push_back(recorded_fields[i].first);
            devs.push_back(d);
        }
    }
    if (devs.empty()) throw InsufficientDecay("trajectory does not deviate from the limit");

    // Drop the tail where the finite-horizon reference contaminates the fit.
    const double floor = 10.0 * devs.back();
    std::vector<double> t_fit, log_fit;
    for (size_t i = 0; i < devs.size(); ++i) {
        if (devs[i] >= floor) {
            t_fit.push_back(ts[i]);
            log_fit.push_back(std::log(devs[i]));
        }
    }
    if (t_fit.size() < 3)
        throw InsufficientDecay("too few usable records for a decay fit");
    const double span = *std::max_element(log_fit.begin(), log_fit.end()) -
                        *std::min_element(log_fit.begin(), log_fit.end());
    if (span < 2.0 * std::log(10.0))
        throw InsufficientDecay("deviation spans fewer than two decades");

    const size_t n = t_fit.size();
    double st = 0, sl = 0, stt = 0, stl = 0, sll = 0;
    for (size_t i = 0; i < n; ++i) {
        st += t_fit[i];
        sl += log_fit[i];
        stt += t_fit[i] * t_fit[i];
        stl += t_fit[i] * log_fit[i];
        sll += log_fit[i] * log_fit[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    const double corr_num = n * stl - st * sl;
    const double corr_den =
        std::sqrt((n * stt - st * st) * (n * sll - sl * sl));
    const double r = corr_den > 0 ? corr_num / corr_den : 0.0;
    return DecayFit{-slope, r * r};
}

}  // namespace msdiff
