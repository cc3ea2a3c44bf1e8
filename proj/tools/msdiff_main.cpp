#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "msdiff/scenario.hpp"
#include "msdiff/stability.hpp"
#include "msdiff/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace msdiff;

namespace {

// Exit-code contract: 0 ok, 1 config, 2 numerical, 3 no-equilibrium,
// 4 property failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitNoEquilibrium = 3;
constexpr int kExitPropertyFailure = 4;

void emit_error(const std::string& kind, const std::string& message) {
    json err{{"error", kind}, {"message", message}};
    std::cerr << "ERROR " << err.dump() << std::endl;
}

void apply_thread_cap() {
    if (const char* env = std::getenv("MSDIFF_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) Eigen::setNbThreads(cap);
    }
}

std::string snapshot_name(double t) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "snap_%.6f.csv", t);
    return buf;
}

int run_simulate(const std::string& scenario_path, const std::string& output_override) {
    const Scenario sc = load_scenario(scenario_path);
    SimConfig cfg = sc.sim_config();

    const fs::path out_dir =
        output_override.empty() ? fs::path(sc.output_directory) : fs::path(output_override);
    fs::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const SimResult result = simulate(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_diagnostics_csv((out_dir / "diagnostics.csv").string(), result.trace);
    for (const auto& [t, values] : result.snapshots)
        write_snapshot_csv((out_dir / snapshot_name(t)).string(), cfg.grid, values);
    write_snapshot_csv((out_dir / "final.csv").string(), cfg.grid,
                       result.final_field.values);

    double max_drift = 0.0;
    if (!result.trace.empty() && result.trace.front().conserved_values.size() > 0) {
        const Vec q0 = result.trace.front().conserved_values;
        for (const Diagnostics& d : result.trace) {
            const Vec drift = (d.conserved_values - q0).cwiseAbs().cwiseQuotient(
                q0.cwiseAbs().cwiseMax(1e-300));
            max_drift = std::max(max_drift, drift.maxCoeff());
        }
    }

    json summary{{"final_time", result.final_field.time},
                 {"final_free_energy", result.trace.back().free_energy},
                 {"min_component", result.final_field.values.minCoeff()},
                 {"max_conserved_drift", max_drift},
                 {"steps", result.steps},
                 {"wall_time_s", wall}};
    std::ofstream((out_dir / "summary.json").string()) << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << std::endl;
    return kExitOk;
}

int run_equilibrium(const std::string& scenario_path) {
    const Scenario sc = load_scenario(scenario_path);
    ReactionNetwork net =
        sc.network.value_or(ReactionNetwork{IMat::Zero(sc.spec.n_species(), 0),
                                            IMat::Zero(sc.spec.n_species(), 0), Vec(0), Vec(0)});
    const EquilibriumResult eq = find_equilibrium(net, sc.spec);
    json out{{"c_star", std::vector<double>(eq.c_star.data(), eq.c_star.data() + eq.c_star.size())},
             {"y_star", std::vector<double>(eq.y_star.y.data(),
                                            eq.y_star.y.data() + eq.y_star.y.size())},
             {"residual", eq.residual},
             {"newton_iters", eq.newton_iters},
             {"manifold_dim", eq.manifold_dim}};
    std::cout << out.dump(2) << std::endl;
    return kExitOk;
}

int run_spectrum(const std::string& scenario_path, int k_max) {
    const Scenario sc = load_scenario(scenario_path);
    ReactionNetwork net =
        sc.network.value_or(ReactionNetwork{IMat::Zero(sc.spec.n_species(), 0),
                                            IMat::Zero(sc.spec.n_species(), 0), Vec(0), Vec(0)});
    const EquilibriumResult eq = find_equilibrium(net, sc.spec);
    const SpectrumReport rep =
        spectrum_report(sc.spec, net, eq.y_star, sc.grid.lengths, k_max);

    json modes = json::array();
    for (const ModeSpectrum& m : rep.modes) {
        json evs = json::array();
        for (const auto& z : m.eigenvalues) evs.push_back({{"re", z.real()}, {"im", z.imag()}});
        modes.push_back({{"lambda", m.lambda_laplace}, {"eigenvalues", evs}});
    }
    json out{{"modes", modes},
             {"kernel_dim", rep.kernel_dim_mode0},
             {"semisimple", rep.semisimple},
             {"gap", rep.spectral_gap},
             {"modes_used", rep.modes_used}};
    std::cout << out.dump(2) << std::endl;
    return kExitOk;
}

int run_verify(const std::string& range, int trials, unsigned long long seed, bool mutate) {
    VerifyOptions opts;
    opts.trials = trials;
    opts.seed = seed;
    const auto sep = range.find("..");
    if (sep == std::string::npos) {
        opts.n_min = opts.n_max = std::stoi(range);
    } else {
        opts.n_min = std::stoi(range.substr(0, sep));
        opts.n_max = std::stoi(range.substr(sep + 2));
    }
    if (mutate) {
        // Self-test fixture: a sign flip in the off-diagonal assembly must be
        // caught by the kernel property.
        opts.b_assembler = [](const MixtureSpec& spec, const Composition& y) {
            Mat b = assemble_B(spec, y);
            if (b.rows() > 1) b(0, 1) = -b(0, 1);
            return b;
        };
    }
    const auto results = run_property_suite(opts);
    print_property_results(std::cout, results);
    for (const PropertyResult& r : results)
        if (!r.passed()) return kExitPropertyFailure;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"Mass-based Maxwell-Stefan reaction-diffusion toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, output_dir;
    int k_max = 8;
    std::string n_species_range = "2..8";
    int trials = 500;
    unsigned long long seed = 42;
    bool mutate = false;

    auto* sim = app.add_subcommand("simulate", "Integrate a scenario and emit CSV/JSON");
    sim->add_option("scenario", scenario_path, "Scenario file")->required();
    sim->add_option("--output", output_dir, "Output directory (overrides scenario)");

    auto* eq = app.add_subcommand("equilibrium", "Compute the chemical equilibrium");
    eq->add_option("scenario", scenario_path, "Scenario file")->required();

    auto* spec_cmd = app.add_subcommand("spectrum", "Linearized spectrum report");
    spec_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    spec_cmd->add_option("--k-max", k_max, "Laplace modes per axis");

    auto* ver = app.add_subcommand("verify", "Run the randomized property battery");
    ver->add_option("--n-species", n_species_range, "Species range, e.g. 2..8");
    ver->add_option("--trials", trials, "Trials per species count");
    ver->add_option("--seed", seed, "RNG seed");
    ver->add_flag("--mutate-b-sign", mutate,
                  "Self-test: run against a deliberately broken friction assembly");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return run_simulate(scenario_path, output_dir);
        if (eq->parsed()) return run_equilibrium(scenario_path);
        if (spec_cmd->parsed()) return run_spectrum(scenario_path, k_max);
        if (ver->parsed()) return run_verify(n_species_range, trials, seed, mutate);
    } catch (const NoEquilibrium& e) {
        emit_error("no_equilibrium", e.what());
        return kExitNoEquilibrium;
    } catch (const StepRejected& e) {
        emit_error("step_rejected", e.what());
        return kExitNumerical;
    } catch (const SingularSystem& e) {
        emit_error("singular_system", e.what());
        return kExitNumerical;
    } catch (const NewtonDiverged& e) {
        emit_error("newton_diverged", e.what());
        return kExitNumerical;
    } catch (const ConfigError& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitNumerical;
    }
    return kExitConfig;
}
