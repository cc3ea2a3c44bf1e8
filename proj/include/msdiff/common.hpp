#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace msdiff {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IMat = Eigen::MatrixXi;

// Shared tolerances.
inline constexpr double kSumTol = 1e-12;        // |(y|e) - 1| bound
inline constexpr double kBoundaryTol = 1e-8;    // admissible undershoot of y_k
inline constexpr double kInteriorEps = 1e-12;   // interior classification
inline constexpr double kInverseTol = 1e-10;    // bordered-solve residual
inline constexpr double kRankTol = 1e-10;       // rank decisions, scaled by norm

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NonInteriorComposition : std::domain_error {
    using std::domain_error::domain_error;
};
struct OutOfDomain : std::domain_error {
    using std::domain_error::domain_error;
};
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotInE : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NegativeConcentration : std::domain_error {
    using std::domain_error::domain_error;
};
struct MassNotConserved : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoEquilibrium : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NewtonDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAnEquilibrium : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InsufficientDecay : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SemisimplicityUndecided : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EigensolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Species count, molar masses, pairwise friction coefficients and total
/// mass density of an isothermal, isobaric mixture.
struct MixtureSpec {
    Vec molar_masses;   // M_k > 0
    Mat frictions;      // symmetric, zero diagonal, positive off-diagonal
    double rho = 1.0;

    int n_species() const { return static_cast<int>(molar_masses.size()); }
    void validate() const;
};

/// A mass-fraction vector on the simplex hyperplane (y|e) = 1.
struct Composition {
    Vec y;

    Composition() = default;
    explicit Composition(Vec values) : y(std::move(values)) {}

    int size() const { return static_cast<int>(y.size()); }

    enum class Region { Interior, Boundary, OutOfDomain };

    /// Interior: all y_k >= interior_eps. Boundary: all y_k >= -boundary_tol
    /// with some component below interior_eps. Anything else is out of domain,
    /// as is a sum deviating from 1 by more than kSumTol.
    Region classify() const;

    bool is_interior() const { return classify() == Region::Interior; }

    /// Throws OutOfDomain unless the point is interior or boundary.
    void require_admissible() const;
};

/// Uniform composition (1/N, ..., 1/N).
Composition uniform_composition(int n);

}  // namespace msdiff
