#include "msdiff/solver.hpp"

#include <algorithm>
#include <cmath>

namespace msdiff {

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    if (static_cast<int>(lengths.size()) != dim || static_cast<int>(cells.size()) != dim)
        throw ConfigError("grid lengths/cells must have one entry per axis");
    for (int a = 0; a < dim; ++a) {
        if (lengths[a] <= 0.0) throw ConfigError("grid extents must be positive");
        if (cells[a] < 2) throw ConfigError("grid needs at least 2 cells per axis");
    }
}

int Grid::n_cells() const {
    int n = 1;
    for (int c : cells) n *= c;
    return n;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
}

double Grid::min_spacing() const {
    double h = spacing(0);
    for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
    return h;
}

Vec face_flux(const MixtureSpec& spec, const Composition& y_left,
              const Composition& y_right, double spacing) {
    Vec ybar = 0.5 * (y_left.y + y_right.y);
    ybar /= ybar.sum();
    return apply_A0(spec, Composition(std::move(ybar)), (y_right.y - y_left.y) / spacing);
}

Mat semidiscrete_rhs(const SimConfig& config, const Field& field) {
    const Grid& g = field.grid;
    const int n = config.spec.n_species();
    Mat rhs = Mat::Zero(n, g.n_cells());

    const int nx = g.cells[0];
    const int ny = g.dim == 2 ? g.cells[1] : 1;

    // x-direction faces
    const double hx = g.spacing(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int l = g.flat(i, j);
            const int r = g.flat(i + 1, j);
            const Vec f = face_flux(config.spec, field.cell(l), field.cell(r), hx);
            rhs.col(l) += f / hx;
            rhs.col(r) -= f / hx;
        }
    }
    if (g.dim == 2) {
        const double hy = g.spacing(1);
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int l = g.flat(i, j);
                const int r = g.flat(i, j + 1);
                const Vec f = face_flux(config.spec, field.cell(l), field.cell(r), hy);
                rhs.col(l) += f / hy;
                rhs.col(r) -= f / hy;
            }
        }
    }

    if (config.network) {
        for (int c = 0; c < g.n_cells(); ++c)
            rhs.col(c) += source_term(*config.network, config.spec, field.cell(c));
    }
    return rhs / config.spec.rho;
}

double stable_dt(const SimConfig& config, const Field& field) {
    double lambda = 0.0;
    for (int c = 0; c < field.grid.n_cells(); ++c) {
        Composition y = field.cell(c);
        y.y /= y.y.sum();
        lambda = std::max(lambda,
                          spectral_radius_on_E(flux_matrix_A0(config.spec, y)));
    }
    const double h = field.grid.min_spacing();
    return config.cfl_safety * config.spec.rho * h * h / (2.0 * field.grid.dim * lambda);
}

Field step_rk4(const SimConfig& config, const Field& field, double dt) {
    auto rhs_at = [&](const Mat& values) {
        Field tmp{field.grid, values, field.time};
        try {
            return semidiscrete_rhs(config, tmp);
        } catch (const OutOfDomain& e) {
            // a stage state left the admissible neighborhood: the step is too
            // large, not the data invalid
            throw StepRejected(std::string("stage state rejected: ") + e.what());
        }
    };
    const Mat k1 = rhs_at(field.values);
    const Mat k2 = rhs_at(field.values + 0.5 * dt * k1);
    const Mat k3 = rhs_at(field.values + 0.5 * dt * k2);
    const Mat k4 = rhs_at(field.values + dt * k3);

    Field next{field.grid, field.values + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
               field.time + dt};

    const double mn = next.values.minCoeff();
    if (mn < -1e-10)
        throw StepRejected("component undershoot " + std::to_string(mn) + " at t=" +
                           std::to_string(next.time) + "; dt too large or blow-up");
    if (mn < 0.0) {
        next.values = next.values.cwiseMax(0.0);
        for (int c = 0; c < next.values.cols(); ++c)
            next.values.col(c) /= next.values.col(c).sum();
    }
    return next;
}

double total_free_energy(const MixtureSpec& spec, const ReferenceEquilibrium& ref,
                         const Field& field) {
    double psi = 0.0;
    for (int c = 0; c < field.grid.n_cells(); ++c)
        psi += free_energy_density(spec, ref, field.cell(c));
    return psi * field.grid.cell_volume();
}

namespace {

Diagnostics record(const SimConfig& config, const Field& field,
                   const ReferenceEquilibrium& ref, const Mat& q_basis, double dt) {
    Diagnostics d;
    d.time = field.time;
    d.free_energy = total_free_energy(config.spec, ref, field);
    d.min_component = field.values.minCoeff();
    d.max_component = field.values.maxCoeff();
    d.sum_deviation = field.max_sum_deviation();
    d.step_size = dt;
    d.conserved_values =
        evaluate_conserved(q_basis, config.spec, field.values, field.grid.cell_volume());
    return d;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
    config.spec.validate();
    config.grid.validate();
    if (config.t_end <= 0.0) throw ConfigError("t_end must be positive");
    if (config.cfl_safety <= 0.0 || config.cfl_safety > 0.9)
        throw ConfigError("cfl_safety must lie in (0, 0.9]");
    if (config.initial_values.rows() != config.spec.n_species() ||
        config.initial_values.cols() != config.grid.n_cells())
        throw ConfigError("initial field shape does not match spec and grid");

    ReactionNetwork empty_net{IMat::Zero(config.spec.n_species(), 0),
                              IMat::Zero(config.spec.n_species(), 0), Vec(0), Vec(0)};
    const ReactionNetwork& net = config.network ? *config.network : empty_net;
    if (config.network) {
        const ValidationReport rep = validate_network(net, config.spec);
        if (!rep.all_mass_conserved)
            throw MassNotConserved("reaction network violates total mass conservation");
        if (!rep.wegscheider_consistent)
            throw NoEquilibrium("reaction network has no positive equilibrium");
    }

    ReferenceEquilibrium ref =
        config.reference
            ? *config.reference
            : make_reference(config.spec,
                             find_equilibrium(net, config.spec).y_star);

    const Mat q_basis = conserved_functionals(net, config.spec);

    Field field{config.grid, config.initial_values, 0.0};
    for (int c = 0; c < field.values.cols(); ++c)
        field.cell(c).require_admissible();

    // Event times: output records plus requested snapshots, hit exactly.
    std::vector<double> snap_times = config.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());

    SimResult result;
    auto record_now = [&](double dt_used) {
        result.trace.push_back(record(config, field, ref, q_basis, dt_used));
        if (config.record_fields)
            result.recorded_fields.emplace_back(field.time, field.values);
    };
    auto snap_now = [&]() { result.snapshots.emplace_back(field.time, field.values); };

    record_now(0.0);
    size_t next_snap = 0;
    while (next_snap < snap_times.size() && snap_times[next_snap] <= 0.0) {
        snap_now();
        ++next_snap;
    }

    double next_record = config.output_interval;
    const double eps = 1e-12 * config.t_end;
    while (field.time < config.t_end - eps) {
        double dt = std::min(stable_dt(config, field), config.t_end - field.time);
        if (next_record < config.t_end)
            dt = std::min(dt, next_record - field.time);
        if (next_snap < snap_times.size())
            dt = std::min(dt, snap_times[next_snap] - field.time);

        field = step_rk4(config, field, dt);
        ++result.steps;

        if (next_snap < snap_times.size() && field.time >= snap_times[next_snap] - eps) {
            snap_now();
            ++next_snap;
        }
        if (field.time >= next_record - eps || field.time >= config.t_end - eps) {
            record_now(dt);
            while (next_record <= field.time + eps) next_record += config.output_interval;
        }
    }

    result.final_field = field;
    return result;
}

}  // namespace msdiff
