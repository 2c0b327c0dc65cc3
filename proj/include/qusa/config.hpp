#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qusa/anneal.hpp"
#include "qusa/dynamics.hpp"
#include "qusa/hamiltonian.hpp"
#include "qusa/network.hpp"

namespace qusa {

enum class RunKindConfig {
    Solve,
    AnnealClassical,
    SimulateComparison,
    SimulateProjected,
    SimulateSymmetrized,
    Ensemble,
    ZenoSweep,
    LeakSweep,
};

std::string to_string(RunKindConfig kind);

/// Fully resolved run description. Every field has a definite value after
/// loading, so the manifest echo reproduces the run without the original
/// config file.
struct RunConfig {
    RunKindConfig kind = RunKindConfig::Solve;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    TriodeNetwork network{0, {}};
    Model model = Model::Triode;

    HamiltonianParams hamiltonian;
    NoiseParams noise;
    ScheduleParams schedule;
    AnnealSchedule anneal;

    int ensemble_count = 100;
    RunKind ensemble_kind = RunKind::Projected;

    std::vector<double> sweep_intervals;
    int sweep_ensemble = 25;

    /// Optional take-off fit window for ensemble runs.
    std::optional<double> window_start;
    std::optional<double> window_end;

    std::vector<double> snapshot_times;
    bool dump_fields = false;
    bool dump_fluctuation = false;
};

/// Loads either a sectioned key=value config or a manifest JSON (detected by
/// a leading '{'). Network files referenced by the config are read here, so
/// the result is self-contained. Unknown sections or keys are errors.
RunConfig load_config(const std::string& path);

/// Parses sectioned key=value text. `source` names the input in errors.
RunConfig parse_config_text(const std::string& text, const std::string& source);

/// Parses a manifest JSON string produced by manifest_json.
RunConfig parse_manifest_json(const std::string& text, const std::string& source);

/// Serializes the fully resolved config as the manifest JSON. Loading the
/// result reproduces `cfg` exactly; numeric values are formatted to round-trip.
std::string manifest_json(const RunConfig& cfg);

/// Formats a double so that parsing the result recovers the same bits.
std::string format_double(double v);

}  // namespace qusa
