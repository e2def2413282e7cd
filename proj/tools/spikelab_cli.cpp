#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "spikelab/reports.hpp"

using namespace spikelab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& dir, const std::string& name, const json& j) {
    fs::create_directories(dir);
    std::ofstream out(dir / name);
    out << std::setw(2) << j << "\n";
    if (!out) throw std::runtime_error("failed to write " + (dir / name).string());
    std::cout << (dir / name).string() << "\n";
}

void write_grid(const fs::path& dir, const std::string& name, const Field2D& field) {
    std::ofstream out(dir / name, std::ios::binary);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed to write " + (dir / name).string());
}

// key = value text config; '#' starts a comment, unknown keys are rejected
SimConfig parse_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("simulate: cannot open config file " + path);
    double epsilon = 0.0316, D = 0.02, tau = 0.0, mu2 = 2.0;
    SimConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq, value;
        if (!(ls >> key)) continue;  // blank line
        if (!(ls >> eq >> value) || eq != "=")
            throw DomainError("simulate: malformed line " + std::to_string(lineno) +
                              " (expected 'key = value')");
        try {
            if (key == "k") c.k = std::stoi(value);
            else if (key == "with_centre") c.with_centre = (value == "1" || value == "true");
            else if (key == "epsilon") epsilon = std::stod(value);
            else if (key == "D") D = std::stod(value);
            else if (key == "tau") tau = std::stod(value);
            else if (key == "mu2") mu2 = std::stod(value);
            else if (key == "L") c.L = std::stod(value);
            else if (key == "nx") c.nx = std::stoi(value);
            else if (key == "dt") c.dt = std::stod(value);
            else if (key == "t_end") c.t_end = std::stod(value);
            else if (key == "seed") c.seed = static_cast<unsigned>(std::stoul(value));
            else if (key == "perturb_amp") c.perturb_amp = std::stod(value);
            else if (key == "snapshot_every") c.snapshot_every = std::stoi(value);
            else throw DomainError("simulate: unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw DomainError("simulate: bad value for '" + key + "' on line " +
                              std::to_string(lineno));
        }
    }
    c.params = make_params(epsilon, D, tau, 1.0, mu2);
    c.quasi_steady = (tau == 0.0);
    return c;
}

void run_simulate(const fs::path& dir, const std::string& config_path,
                  const RadialProfile& profile) {
    const SimConfig c = parse_sim_config(config_path);
    fs::create_directories(dir);
    Simulator sim(c, profile);

    std::ofstream csv(dir / "track.csv");
    csv << "t,j,x,y,amplitude,asymmetry\n";
    csv << std::setprecision(17);
    auto snapshot = [&](std::int64_t step) {
        const auto spikes = detect_spikes(sim.state().A);
        const double asym = asymmetry_score(spikes);
        for (std::size_t j = 0; j < spikes.size(); ++j)
            csv << sim.state().t << "," << j << "," << spikes[j].x << "," << spikes[j].y << ","
                << spikes[j].amplitude << "," << asym << "\n";
        std::ostringstream stem;
        stem << "A_" << std::setw(8) << std::setfill('0') << step;
        write_grid(dir, stem.str() + ".bin", sim.state().A);
        write_json(dir, stem.str() + ".json",
                   field_sidecar(sim.state().A, sim.state().t, stem.str() + ".bin"));
    };

    const std::int64_t steps = std::llround(c.t_end / c.dt);
    snapshot(0);
    for (std::int64_t i = 1; i <= steps; ++i) {
        sim.step();
        if (i % c.snapshot_every == 0 || i == steps) snapshot(i);
    }
    write_grid(dir, "final_H.bin", sim.state().H);
    write_json(dir, "final_H.json", field_sidecar(sim.state().H, sim.state().t, "final_H.bin"));
    std::cout << (dir / "track.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("SPIKELAB_THREADS")) {
        const int t = std::atoi(threads);
        if (t > 0) Eigen::setNbThreads(t);
    }

    CLI::App app{"numerical toolkit for spike clusters in a precursor activator-inhibitor model"};
    app.require_subcommand(1);
    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory")->capture_default_str();

    double gs_rmax = 20.0, gs_tol = 1e-8;
    int gs_n = 4000;
    auto* gs = app.add_subcommand("groundstate", "radial ground-state profile and constants");
    gs->add_option("--rmax", gs_rmax, "truncation radius")->capture_default_str();
    gs->add_option("--n", gs_n, "grid nodes")->capture_default_str();
    gs->add_option("--tol", gs_tol, "shooting tolerance")->capture_default_str();

    int eq_k = 3;
    double eq_eps = 1e-4, eq_D = 1e-5, eq_mu2 = 2.0;
    bool eq_centre = false;
    auto* eq = app.add_subcommand("equilibrium", "ring radius of the reduced spike problem");
    eq->add_option("--k", eq_k, "number of ring spikes")->capture_default_str();
    eq->add_option("--epsilon", eq_eps, "activator length scale")->capture_default_str();
    eq->add_option("--D", eq_D, "inhibitor diffusivity")->capture_default_str();
    eq->add_option("--mu2", eq_mu2, "precursor curvature")->capture_default_str();
    eq->add_flag("--with-centre", eq_centre, "add a centre spike");

    int st_k = 3;
    auto* st = app.add_subcommand("stability", "small-eigenvalue spectrum and verdicts");
    st->add_option("--k", st_k, "number of ring spikes")->capture_default_str();

    int nl_m = 0, nl_n = 2000, nl_count = 6;
    double nl_gamma = 2.0, nl_rmax = 20.0;
    auto* nl = app.add_subcommand("nlep", "spectrum of the (non)local linearized operator");
    nl->add_option("--m", nl_m, "angular mode")->capture_default_str();
    nl->add_option("--gamma", nl_gamma, "nonlocal multiplier")->capture_default_str();
    nl->add_option("--n", nl_n, "radial grid cells")->capture_default_str();
    nl->add_option("--rmax", nl_rmax, "radial truncation")->capture_default_str();
    nl->add_option("--count", nl_count, "eigenvalues to report")->capture_default_str();

    std::string sim_config;
    auto* sm = app.add_subcommand("simulate", "time-step the full two-field system");
    sm->add_option("--config", sim_config, "key = value config file")->required();

    auto* rp = app.add_subcommand("reproduce", "run the full verification ladder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const fs::path dir = out_dir;
    try {
        if (gs->parsed()) {
            const auto profile = solve_ground_state(gs_rmax, gs_n, gs_tol);
            write_json(dir, "groundstate.json", groundstate_report(profile, integrals(profile)));
        } else if (eq->parsed()) {
            const auto profile = solve_ground_state(20.0, 4000, 1e-8);
            const auto params = make_params(eq_eps, eq_D, 0.0, 1.0, eq_mu2);
            const auto rc = make_reduced_constants(params, integrals(profile), eq_k);
            const auto root = eq_centre ? equilibrium_radius_centre(eq_k, params, rc)
                                        : equilibrium_radius(eq_k, params, rc);
            const double asym = eq_centre ? asymptotic_radius_centre(params, rc)
                                          : asymptotic_radius(eq_k, params, rc);
            write_json(dir, "equilibrium.json",
                       equilibrium_report(eq_k, eq_centre, params, rc, root, asym));
        } else if (st->parsed()) {
            write_json(dir, "stability.json", stability_report(st_k));
        } else if (nl->parsed()) {
            const auto profile = solve_ground_state(20.0, 4000, 1e-8);
            const auto op = make_radial_operator(profile, nl_m, nl_gamma, nl_n, nl_rmax);
            const auto spectrum = (nl_m == 0 && nl_gamma > 0.0) ? nlep_spectrum(op, nl_count)
                                                                : local_spectrum(op, nl_count);
            write_json(dir, "nlep.json", nlep_report(op, spectrum));
        } else if (sm->parsed()) {
            const auto profile = solve_ground_state(20.0, 4000, 1e-8);
            run_simulate(dir, sim_config, profile);
        } else if (rp->parsed()) {
            const auto results = run_acceptance();
            const int failed = print_acceptance(results, std::cout);
            write_json(dir, "reproduce.json", reproduce_report(results));
            return failed > 0 ? 1 : 0;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidK& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
