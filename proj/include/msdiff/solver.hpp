#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "msdiff/equilibria.hpp"
#include "msdiff/mixture.hpp"

namespace msdiff {

/// Tensor-product box grid, 1D or 2D, with zero-flux boundaries.
struct Grid {
    int dim = 1;
    std::vector<double> lengths;  // per axis
    std::vector<int> cells;       // per axis, >= 2

    void validate() const;
    int n_cells() const;
    double spacing(int axis) const { return lengths[axis] / cells[axis]; }
    double cell_volume() const;
    double min_spacing() const;
    /// Cell-center coordinate along an axis.
    double center(int axis, int index) const { return (index + 0.5) * spacing(axis); }
    /// Flat index for (i) or (i, j).
    int flat(int i, int j = 0) const { return i + cells[0] * j; }
};

/// Per-cell compositions stored as columns of an N x n_cells matrix.
struct Field {
    Grid grid;
    Mat values;
    double time = 0.0;

    Composition cell(int idx) const { return Composition(values.col(idx)); }
    double max_sum_deviation() const {
        return (values.colwise().sum().array() - 1.0).abs().maxCoeff();
    }
};

struct Diagnostics {
    double time = 0.0;
    double free_energy = 0.0;
    double min_component = 0.0;
    double max_component = 0.0;
    double sum_deviation = 0.0;
    double step_size = 0.0;
    Vec conserved_values;
};

/// Pluggable source hook: maps a cell composition to a rate vector in E.
using SourceFn = std::function<Vec(const Composition&)>;

struct SimConfig {
    MixtureSpec spec;
    std::optional<ReactionNetwork> network;   // absent: r == 0
    std::optional<ReferenceEquilibrium> reference;  // computed if absent
    Grid grid;
    Mat initial_values;                        // N x n_cells
    double t_end = 1.0;
    double cfl_safety = 0.4;
    double output_interval = 0.1;
    std::vector<double> snapshot_times;
    unsigned long long seed = 0;
    bool record_fields = false;                // keep a field per record (decay fits)
};

struct SimResult {
    std::vector<Diagnostics> trace;
    Field final_field;
    std::vector<std::pair<double, Mat>> snapshots;
    std::vector<std::pair<double, Mat>> recorded_fields;  // when record_fields
    long long steps = 0;
};

/// Flux A0(y_face) (y_right - y_left) / spacing with the face state the
/// renormalized arithmetic mean.
Vec face_flux(const MixtureSpec& spec, const Composition& y_left,
              const Composition& y_right, double spacing);

/// Per-cell time derivative (1/rho)[flux divergence + M r(y)], columnwise in E.
Mat semidiscrete_rhs(const SimConfig& config, const Field& field);

/// CFL bound cfl_safety * rho * h_min^2 / (2 dim Lambda) with Lambda the
/// largest A0 spectral radius over cells.
double stable_dt(const SimConfig& config, const Field& field);

/// Classical RK4 step; clips undershoots up to 1e-10 and renormalizes,
/// rejects anything worse.
Field step_rk4(const SimConfig& config, const Field& field, double dt);

SimResult simulate(const SimConfig& config);

/// Total free energy: midpoint quadrature of psi over the field.
double total_free_energy(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                         const Field& field);

}  // namespace msdiff
