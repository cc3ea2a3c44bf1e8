#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "msdiff/kinetics.hpp"
#include "msdiff/mixture.hpp"

namespace msdiff {

struct PropertyResult {
    std::string name;
    long long checks = 0;
    long long failures = 0;
    double worst_residual = 0.0;

    bool passed() const { return failures == 0; }
};

struct VerifyOptions {
    int n_min = 2;
    int n_max = 8;
    int trials = 500;
    unsigned long long seed = 42;
    int n_networks = 20;
    int network_trials = 50;
    /// Test hook replacing the friction-matrix assembly, used to check that
    /// the suite detects broken kernels.
    std::function<Mat(const MixtureSpec&, const Composition&)> b_assembler;
};

/// Randomized property battery over seeded mixtures and compositions,
/// including boundary points: kernel identities of B and B_S, round-trip
/// inversion with the boundary row structure, spectral positivity of A0,
/// definiteness of -A P Y, and nonpositive reaction entropy production.
std::vector<PropertyResult> run_property_suite(const VerifyOptions& opts);

void print_property_results(std::ostream& os, const std::vector<PropertyResult>& results);

/// Random generators shared with tests.
struct RandomModels {
    explicit RandomModels(unsigned long long seed);

    MixtureSpec random_mixture(int n);
    /// Random interior composition.
    Composition random_interior(int n);
    /// Random admissible composition with the given number of zero components.
    Composition random_with_zeros(int n, int zeros);
    /// Random vector in E.
    Vec random_in_E(int n);
    /// Random mixture with small integer molar masses together with a
    /// mass-conserving, Wegscheider-consistent network, built by planting a
    /// positive equilibrium and balancing reaction masses exactly.
    std::pair<MixtureSpec, ReactionNetwork> random_reactive_system(int n, int max_reactions = 3);

    struct Impl;
    std::shared_ptr<Impl> impl;
};

}  // namespace msdiff
