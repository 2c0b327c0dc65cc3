#include "qusa/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qusa/analysis.hpp"
#include "qusa/anneal.hpp"
#include "qusa/common.hpp"
#include "qusa/dynamics.hpp"

namespace qusa {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_file(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_text(const fs::path& path, const std::string& text, std::ostream& log) {
    std::ofstream out = open_file(path);
    out << text;
    out.close();
    log << "wrote " << path.string() << "\n";
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, std::ostream& log) {
    write_text(dir / "manifest.json", manifest_json(cfg), log);
}

EnergyParams energy_params(const RunConfig& cfg) {
    return EnergyParams{cfg.hamiltonian.g, cfg.hamiltonian.g_prime, cfg.hamiltonian.trap_free};
}

nlohmann::json scaling_report(const ScalingFit& fit) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < fit.abscissae.size(); ++i)
        points.push_back({{"interval", fit.abscissae[i]}, {"value", fit.ordinates[i]}});
    return {{"exponent", fit.exponent},
            {"intercept", fit.intercept},
            {"exponent_stderr", fit.exponent_stderr},
            {"r_squared", fit.r_squared},
            {"degenerate", fit.degenerate},
            {"points", points}};
}

int simulate_classical(const RunConfig& cfg, std::ostream& log) {
    const ClassicalTrajectory traj =
        classical_anneal(cfg.network, cfg.model, energy_params(cfg), cfg.anneal, cfg.seed);
    const fs::path dir = prepare_out_dir(cfg);

    std::string csv = "step,energy\n";
    for (std::size_t i = 0; i < traj.energies.size(); ++i)
        csv += std::to_string(i) + "," + fmt(traj.energies[i]) + "\n";
    write_text(dir / "anneal.csv", csv, log);

    nlohmann::json result = {
        {"seed", traj.seed},
        {"steps", cfg.anneal.steps},
        {"final_assignment", to_string(traj.final_assignment)},
        {"final_energy", traj.energies.back()},
        {"satisfied", total_error(cfg.network, traj.final_assignment) == 0}};
    if (traj.first_hit)
        result["first_hit"] = *traj.first_hit;
    else
        result["first_hit"] = nullptr;
    write_text(dir / "result.json", result.dump(2) + "\n", log);

    write_manifest(dir, cfg, log);
    return 0;
}

int simulate_quantum(const RunConfig& cfg, std::ostream& log) {
    const fs::path dir = prepare_out_dir(cfg);

    std::ofstream field_out;
    RunHooks hooks;
    if (cfg.dump_fields) {
        field_out = open_file(dir / "fields.csv");
        field_out << "t,tau,beta,bx,by,bz\n";
        hooks.field_log = &field_out;
    }

    std::vector<bool> snapped(cfg.snapshot_times.size(), false);
    hooks.on_sample = [&](double t, const StateVector& state) {
        for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
            if (snapped[i] || std::abs(t - cfg.snapshot_times[i]) > cfg.schedule.dt * 0.5)
                continue;
            snapped[i] = true;
            const fs::path path = dir / ("state_t" + format_double(cfg.snapshot_times[i]) + ".csv");
            std::ofstream out = open_file(path);
            dump_state(out, state);
            out.close();
            log << "wrote " << path.string() << "\n";
        }
    };

    Trajectory traj;
    switch (cfg.kind) {
        case RunKindConfig::SimulateComparison:
            traj = run_comparison(cfg.network, cfg.hamiltonian, cfg.noise, cfg.schedule, cfg.seed,
                                  {}, hooks);
            break;
        case RunKindConfig::SimulateProjected:
            traj = run_projected(cfg.network, cfg.hamiltonian, cfg.noise, cfg.schedule, cfg.seed,
                                 {}, hooks);
            break;
        case RunKindConfig::SimulateSymmetrized:
            traj = run_symmetrized(cfg.network, cfg.hamiltonian, cfg.noise, cfg.schedule, cfg.seed,
                                   {}, hooks);
            break;
        default:
            throw std::logic_error("not a single-trajectory kind");
    }
    if (cfg.dump_fields) {
        field_out.close();
        log << "wrote " << (dir / "fields.csv").string() << "\n";
    }
    for (std::size_t i = 0; i < snapped.size(); ++i)
        if (!snapped[i])
            log << "note: snapshot time " << format_double(cfg.snapshot_times[i])
                << " matched no sample\n";

    {
        std::ofstream out = open_file(dir / "trajectory.csv");
        dump_trajectory(out, traj);
        out.close();
        log << "wrote " << (dir / "trajectory.csv").string() << "\n";
    }

    if (cfg.dump_fluctuation) {
        const FluctuationReport report = fluctuation_diagnostic(traj);
        std::ofstream rows = open_file(dir / "fluctuation_rows.csv");
        std::ofstream matches = open_file(dir / "fluctuation_matches.csv");
        dump_fluctuation(rows, matches, report);
        rows.close();
        matches.close();
        log << "wrote " << (dir / "fluctuation_rows.csv").string() << "\n";
        log << "wrote " << (dir / "fluctuation_matches.csv").string() << "\n";
    }

    write_manifest(dir, cfg, log);
    return 0;
}

int simulate_ensemble(const RunConfig& cfg, std::ostream& log) {
    const EnsembleResult ens =
        run_ensemble(cfg.ensemble_kind, cfg.ensemble_count, cfg.seed, cfg.network,
                     cfg.hamiltonian, cfg.noise, cfg.schedule);
    const fs::path dir = prepare_out_dir(cfg);

    {
        std::ofstream out = open_file(dir / "ensemble.csv");
        dump_ensemble(out, ens);
        out.close();
        log << "wrote " << (dir / "ensemble.csv").string() << "\n";
    }

    if (!ens.event_times.empty()) {
        std::string csv = "t,removed_mean,removed_se\n";
        for (std::size_t i = 0; i < ens.event_times.size(); ++i)
            csv += fmt(ens.event_times[i]) + "," + fmt(ens.removed_mean[i]) + "," +
                   fmt(ens.removed_se[i]) + "\n";
        write_text(dir / "events.csv", csv, log);
    }

    if (cfg.window_start) {
        const TakeoffFit fit = estimate_takeoff(ens, *cfg.window_start, *cfg.window_end);
        const nlohmann::json report = {{"window", {{"start", fit.t_a}, {"end", fit.t_b}}},
                                       {"k_fit", fit.k_fit},
                                       {"k_removed", fit.k_removed},
                                       {"r_squared", fit.r_squared},
                                       {"n", fit.samples}};
        write_text(dir / "takeoff.json", report.dump(2) + "\n", log);
    }

    write_manifest(dir, cfg, log);
    return 0;
}

int sweep_zeno(const RunConfig& cfg, std::ostream& log) {
    // one frozen field draw: the stationary sample of the configured noise
    // under the run's noise seed stream
    NoiseParams nparams = cfg.noise;
    nparams.seed = derive_seed(cfg.seed, 2);
    const NoiseProcess noise(cfg.network.triode_count, nparams);
    const OperatorHandle wire =
        wire_hamiltonian(cfg.network, cfg.hamiltonian, SpaceTag::Comparison);
    const OperatorHandle coupling = comparison_coupling(noise.fields(), cfg.hamiltonian.g);
    const OperatorHandle gen = effective_generator(wire, coupling, cfg.hamiltonian);

    const std::vector<ZenoPoint> points = zeno_convergence_study(
        cfg.network, gen, cfg.sweep_intervals, cfg.schedule.total_time, cfg.seed);
    const ScalingFit fit = convergence_order(points);

    const fs::path dir = prepare_out_dir(cfg);
    std::string csv = "interval,error\n";
    for (const ZenoPoint& p : points) csv += fmt(p.interval) + "," + fmt(p.error) + "\n";
    write_text(dir / "zeno_points.csv", csv, log);
    write_text(dir / "zeno_fit.json", scaling_report(fit).dump(2) + "\n", log);
    write_manifest(dir, cfg, log);
    return 0;
}

int sweep_leak(const RunConfig& cfg, std::ostream& log) {
    LeakParams params;
    params.hamiltonian = cfg.hamiltonian;
    params.noise = cfg.noise;
    params.dt = cfg.schedule.dt;
    params.total_time = cfg.schedule.total_time;
    params.stepper = cfg.schedule.stepper;
    params.allow_coarse_dt = cfg.schedule.allow_coarse_dt;
    params.ensemble = cfg.sweep_ensemble;
    params.base_seed = cfg.seed;

    const fs::path dir = prepare_out_dir(cfg);
    const ScalingFit fit = leak_scaling(
        cfg.network, params, cfg.sweep_intervals,
        [&](double interval, const EnsembleResult& ens) {
            const fs::path path = dir / ("leak_dt_" + format_double(interval) + ".csv");
            std::ofstream out = open_file(path);
            dump_ensemble(out, ens);
            out.close();
            log << "wrote " << path.string() << "\n";
        });

    std::string csv = "interval,delta_mean\n";
    for (std::size_t i = 0; i < fit.abscissae.size(); ++i)
        csv += fmt(fit.abscissae[i]) + "," + fmt(fit.ordinates[i]) + "\n";
    write_text(dir / "leak_points.csv", csv, log);
    write_text(dir / "leak_fit.json", scaling_report(fit).dump(2) + "\n", log);
    write_manifest(dir, cfg, log);
    return 0;
}

}  // namespace

std::string command_for_kind(RunKindConfig kind) {
    switch (kind) {
        case RunKindConfig::Solve:
            return "solve";
        case RunKindConfig::AnnealClassical:
        case RunKindConfig::SimulateComparison:
        case RunKindConfig::SimulateProjected:
        case RunKindConfig::SimulateSymmetrized:
        case RunKindConfig::Ensemble:
            return "simulate";
        case RunKindConfig::ZenoSweep:
        case RunKindConfig::LeakSweep:
            return "sweep";
    }
    throw std::logic_error("unreachable run kind");
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    const std::vector<Assignment> solutions = enumerate_solutions(cfg.network, cfg.model);
    const fs::path dir = prepare_out_dir(cfg);
    std::string text;
    for (const Assignment& a : solutions) text += to_string(a) + "\n";
    text += "count " + std::to_string(solutions.size()) + "\n";
    write_text(dir / "solutions.txt", text, log);
    write_manifest(dir, cfg, log);
    log << (solutions.empty() ? "unsatisfiable\n" : "satisfiable\n");
    return solutions.empty() ? 1 : 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.kind) {
        case RunKindConfig::AnnealClassical:
            return simulate_classical(cfg, log);
        case RunKindConfig::SimulateComparison:
        case RunKindConfig::SimulateProjected:
        case RunKindConfig::SimulateSymmetrized:
            return simulate_quantum(cfg, log);
        case RunKindConfig::Ensemble:
            return simulate_ensemble(cfg, log);
        default:
            throw std::invalid_argument("run kind '" + to_string(cfg.kind) +
                                        "' is not a simulate kind");
    }
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.kind) {
        case RunKindConfig::ZenoSweep:
            return sweep_zeno(cfg, log);
        case RunKindConfig::LeakSweep:
            return sweep_leak(cfg, log);
        default:
            throw std::invalid_argument("run kind '" + to_string(cfg.kind) +
                                        "' is not a sweep kind");
    }
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log) {
    const std::string expected = command_for_kind(cfg.kind);
    if (command != expected)
        throw std::invalid_argument("run kind '" + to_string(cfg.kind) + "' belongs to the '" +
                                    expected + "' command");
    if (command == "solve") return cmd_solve(cfg, log);
    if (command == "simulate") return cmd_simulate(cfg, log);
    return cmd_sweep(cfg, log);
}

}  // namespace qusa
