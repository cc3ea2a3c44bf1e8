#pragma once

#include <string>

#include "msdiff/solver.hpp"

namespace msdiff {

/// Parsed scenario document. Loading performs strict schema validation:
/// unknown keys and out-of-range physical parameters are rejected with
/// ConfigError before any computation runs.
struct Scenario {
    MixtureSpec spec;
    std::optional<ReactionNetwork> network;
    Grid grid;
    Mat initial_values;
    double t_end = 1.0;
    double cfl_safety = 0.4;
    double output_interval = 0.1;
    unsigned long long seed = 0;
    std::string output_directory = "out";
    std::vector<double> snapshot_times;

    SimConfig sim_config() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

/// Writes one row per cell: x[,y], y_1..y_N with a header, 17 significant
/// digits.
void write_snapshot_csv(const std::string& path, const Grid& grid, const Mat& values);

/// Columns t, Psi, min_y, max_y, sum_dev, dt, q_1..q_d.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<Diagnostics>& trace);

}  // namespace msdiff
