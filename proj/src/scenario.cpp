#include "msdiff/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace msdiff {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

Vec get_vector(const json& obj, const std::string& where, const std::string& key,
               int expected = -1) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
    const json& arr = obj[key];
    if (!arr.is_array()) throw ConfigError(where + "." + key + " must be an array");
    Vec v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ConfigError(where + "." + key + " must contain numbers");
        v(i) = arr[i].get<double>();
    }
    if (expected >= 0 && v.size() != expected)
        throw ConfigError(where + "." + key + " must have length " + std::to_string(expected));
    return v;
}

MixtureSpec parse_mixture(const json& j) {
    check_keys(j, "mixture", {"n_species", "molar_masses", "frictions", "rho"});
    const int n = static_cast<int>(get_number(j, "mixture", "n_species"));
    if (n < 2) throw ConfigError("mixture.n_species must be at least 2");
    MixtureSpec spec;
    spec.molar_masses = get_vector(j, "mixture", "molar_masses", n);
    spec.rho = get_number(j, "mixture", "rho");
    const Vec upper = get_vector(j, "mixture", "frictions", n * (n - 1) / 2);
    spec.frictions = Mat::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            spec.frictions(i, k) = upper(idx);
            spec.frictions(k, i) = upper(idx);
            ++idx;
        }
    spec.validate();
    return spec;
}

std::optional<ReactionNetwork> parse_reactions(const json& j, int n) {
    if (!j.is_array()) throw ConfigError("reactions must be an array");
    if (j.empty()) return std::nullopt;
    const int m = static_cast<int>(j.size());
    ReactionNetwork net{IMat::Zero(n, m), IMat::Zero(n, m), Vec(m), Vec(m)};
    for (int l = 0; l < m; ++l) {
        const json& r = j[l];
        const std::string where = "reactions[" + std::to_string(l) + "]";
        check_keys(r, where, {"nu_plus", "nu_minus", "k_plus", "k_minus"});
        const Vec np = get_vector(r, where, "nu_plus", n);
        const Vec nm = get_vector(r, where, "nu_minus", n);
        for (int k = 0; k < n; ++k) {
            if (np(k) < 0 || nm(k) < 0 || np(k) != std::floor(np(k)) ||
                nm(k) != std::floor(nm(k)))
                throw ConfigError(where + ": stoichiometric coefficients must be "
                                          "nonnegative integers");
            net.nu_plus(k, l) = static_cast<int>(np(k));
            net.nu_minus(k, l) = static_cast<int>(nm(k));
        }
        net.k_plus(l) = get_number(r, where, "k_plus");
        net.k_minus(l) = get_number(r, where, "k_minus");
        if (net.k_plus(l) <= 0 || net.k_minus(l) <= 0)
            throw ConfigError(where + ": rate constants must be strictly positive");
    }
    net.validate_shape();
    return net;
}

Grid parse_grid(const json& j) {
    check_keys(j, "grid", {"dim", "lengths", "cells"});
    Grid g;
    g.dim = static_cast<int>(get_number(j, "grid", "dim"));
    const Vec lengths = get_vector(j, "grid", "lengths");
    const Vec cells = get_vector(j, "grid", "cells");
    for (int i = 0; i < lengths.size(); ++i) g.lengths.push_back(lengths(i));
    for (int i = 0; i < cells.size(); ++i) {
        if (cells(i) != std::floor(cells(i)))
            throw ConfigError("grid.cells must be integers");
        g.cells.push_back(static_cast<int>(cells(i)));
    }
    g.validate();
    return g;
}

Mat parse_initial(const json& j, const MixtureSpec& spec, const Grid& grid) {
    check_keys(j, "initial",
               {"profile", "value", "left", "right", "split", "base", "component",
                "amplitude", "center", "width", "components", "centers", "zero_masks"});
    if (!j.contains("profile") || !j["profile"].is_string())
        throw ConfigError("initial.profile must be a string");
    const std::string profile = j["profile"].get<std::string>();
    const int n = spec.n_species();
    Mat values(n, grid.n_cells());

    auto cell_coords = [&](int c) {
        const int i = c % grid.cells[0];
        const int jj = c / grid.cells[0];
        std::pair<double, double> p{grid.center(0, i),
                                    grid.dim == 2 ? grid.center(1, jj) : 0.0};
        return p;
    };

    if (profile == "uniform") {
        const Vec v = get_vector(j, "initial", "value", n);
        values.colwise() = v;
    } else if (profile == "step") {
        const Vec left = get_vector(j, "initial", "left", n);
        const Vec right = get_vector(j, "initial", "right", n);
        const double split = get_number(j, "initial", "split");
        for (int c = 0; c < grid.n_cells(); ++c)
            values.col(c) = cell_coords(c).first < split ? left : right;
    } else if (profile == "gaussian-bump") {
        const Vec base = get_vector(j, "initial", "base", n);
        const int comp = static_cast<int>(get_number(j, "initial", "component")) - 1;
        if (comp < 0 || comp >= n)
            throw ConfigError("initial.component out of range (species are 1-based)");
        const double amp = get_number(j, "initial", "amplitude");
        const double width = get_number(j, "initial", "width");
        const Vec center = get_vector(j, "initial", "center", grid.dim);
        for (int c = 0; c < grid.n_cells(); ++c) {
            auto [x, y] = cell_coords(c);
            double d2 = (x - center(0)) * (x - center(0));
            if (grid.dim == 2) d2 += (y - center(1)) * (y - center(1));
            Vec v = base;
            v(comp) += amp * std::exp(-d2 / (2.0 * width * width));
            values.col(c) = v;
        }
    } else if (profile == "two-blob") {
        if (grid.dim != 2) throw ConfigError("two-blob profile needs a 2D grid");
        const Vec base = get_vector(j, "initial", "base", n);
        const Vec comps = get_vector(j, "initial", "components", 2);
        const double amp = get_number(j, "initial", "amplitude");
        const double width = get_number(j, "initial", "width");
        if (!j.contains("centers") || !j["centers"].is_array() || j["centers"].size() != 2)
            throw ConfigError("initial.centers must list two points");
        double cx[2], cy[2];
        for (int b = 0; b < 2; ++b) {
            const json& pt = j["centers"][b];
            if (!pt.is_array() || pt.size() != 2)
                throw ConfigError("initial.centers entries must be [x, y]");
            cx[b] = pt[0].get<double>();
            cy[b] = pt[1].get<double>();
        }
        for (int c = 0; c < grid.n_cells(); ++c) {
            auto [x, y] = cell_coords(c);
            Vec v = base;
            for (int b = 0; b < 2; ++b) {
                const int comp = static_cast<int>(comps(b)) - 1;
                if (comp < 0 || comp >= n)
                    throw ConfigError("initial.components out of range");
                const double d2 = (x - cx[b]) * (x - cx[b]) + (y - cy[b]) * (y - cy[b]);
                v(comp) += amp * std::exp(-d2 / (2.0 * width * width));
            }
            values.col(c) = v;
        }
    } else {
        throw ConfigError("unknown initial profile '" + profile + "'");
    }

    if (j.contains("zero_masks")) {
        const json& masks = j["zero_masks"];
        if (!masks.is_array()) throw ConfigError("initial.zero_masks must be an array");
        for (const json& mask : masks) {
            check_keys(mask, "zero_masks entry", {"component", "from", "to"});
            const int comp = static_cast<int>(get_number(mask, "zero_masks entry", "component")) - 1;
            if (comp < 0 || comp >= n)
                throw ConfigError("zero_masks component out of range");
            const double from = get_number(mask, "zero_masks entry", "from");
            const double to = get_number(mask, "zero_masks entry", "to");
            for (int c = 0; c < grid.n_cells(); ++c) {
                const double x = cell_coords(c).first;
                if (x >= from && x <= to) values(comp, c) = 0.0;
            }
        }
    }

    for (int c = 0; c < grid.n_cells(); ++c) {
        if ((values.col(c).array() < 0.0).any())
            throw ConfigError("initial composition has negative components");
        const double sum = values.col(c).sum();
        if (sum <= 0.0) throw ConfigError("initial composition sums to zero in a cell");
        values.col(c) /= sum;
    }
    return values;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    check_keys(doc, "scenario", {"mixture", "reactions", "grid", "initial", "run", "outputs"});
    if (!doc.contains("mixture")) throw ConfigError("scenario is missing 'mixture'");
    if (!doc.contains("grid")) throw ConfigError("scenario is missing 'grid'");
    if (!doc.contains("initial")) throw ConfigError("scenario is missing 'initial'");
    if (!doc.contains("run")) throw ConfigError("scenario is missing 'run'");

    Scenario sc;
    sc.spec = parse_mixture(doc["mixture"]);
    if (doc.contains("reactions"))
        sc.network = parse_reactions(doc["reactions"], sc.spec.n_species());
    sc.grid = parse_grid(doc["grid"]);
    sc.initial_values = parse_initial(doc["initial"], sc.spec, sc.grid);

    const json& run = doc["run"];
    check_keys(run, "run", {"t_end", "cfl_safety", "output_interval", "seed"});
    sc.t_end = get_number(run, "run", "t_end");
    if (sc.t_end <= 0.0) throw ConfigError("run.t_end must be positive");
    sc.cfl_safety = get_number(run, "run", "cfl_safety");
    if (sc.cfl_safety <= 0.0 || sc.cfl_safety > 0.9)
        throw ConfigError("run.cfl_safety must lie in (0, 0.9]");
    sc.output_interval = get_number(run, "run", "output_interval");
    if (sc.output_interval <= 0.0) throw ConfigError("run.output_interval must be positive");
    if (run.contains("seed")) {
        const double s = get_number(run, "run", "seed");
        if (s < 0 || s != std::floor(s)) throw ConfigError("run.seed must be a nonnegative integer");
        sc.seed = static_cast<unsigned long long>(s);
    }

    if (doc.contains("outputs")) {
        const json& out = doc["outputs"];
        check_keys(out, "outputs", {"directory", "snapshot_times"});
        if (out.contains("directory")) {
            if (!out["directory"].is_string())
                throw ConfigError("outputs.directory must be a string");
            sc.output_directory = out["directory"].get<std::string>();
        }
        if (out.contains("snapshot_times")) {
            const Vec st = get_vector(out, "outputs", "snapshot_times");
            for (int i = 0; i < st.size(); ++i) sc.snapshot_times.push_back(st(i));
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

SimConfig Scenario::sim_config() const {
    SimConfig cfg;
    cfg.spec = spec;
    cfg.network = network;
    cfg.grid = grid;
    cfg.initial_values = initial_values;
    cfg.t_end = t_end;
    cfg.cfl_safety = cfl_safety;
    cfg.output_interval = output_interval;
    cfg.snapshot_times = snapshot_times;
    cfg.seed = seed;
    return cfg;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const Grid& grid, const Mat& values) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write snapshot file '" + path + "'");
    out << "x";
    if (grid.dim == 2) out << ",y";
    for (int k = 0; k < values.rows(); ++k) out << ",y_" << (k + 1);
    out << "\n";
    for (int c = 0; c < values.cols(); ++c) {
        const int i = c % grid.cells[0];
        const int j = c / grid.cells[0];
        out << fmt17(grid.center(0, i));
        if (grid.dim == 2) out << "," << fmt17(grid.center(1, j));
        for (int k = 0; k < values.rows(); ++k) out << "," << fmt17(values(k, c));
        out << "\n";
    }
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<Diagnostics>& trace) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write diagnostics file '" + path + "'");
    const int d = trace.empty() ? 0 : static_cast<int>(trace.front().conserved_values.size());
    out << "t,Psi,min_y,max_y,sum_dev,dt";
    for (int q = 0; q < d; ++q) out << ",q_" << (q + 1);
    out << "\n";
    for (const Diagnostics& rec : trace) {
        out << fmt17(rec.time) << "," << fmt17(rec.free_energy) << ","
            << fmt17(rec.min_component) << "," << fmt17(rec.max_component) << ","
            << fmt17(rec.sum_deviation) << "," << fmt17(rec.step_size);
        for (int q = 0; q < d; ++q) out << "," << fmt17(rec.conserved_values(q));
        out << "\n";
    }
}

}  // namespace msdiff
