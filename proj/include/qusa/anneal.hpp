#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qusa/network.hpp"

namespace qusa {

enum class TemperatureProfile : std::uint8_t { Constant, Linear, Geometric };

struct AnnealSchedule {
    long steps = 10000;
    TemperatureProfile profile = TemperatureProfile::Linear;
    double temp_start = 2.0;
    double temp_end = 0.0;
};

/// Temperature at step s (0-based) of the schedule. Geometric requires
/// strictly positive endpoints.
double temperature_at(const AnnealSchedule& sched, long step);

struct ClassicalTrajectory {
    /// energies[0] is the initial assignment, energies[s+1] after step s
    std::vector<double> energies;
    /// first index into `energies` with a zero-error assignment, if any
    std::optional<long> first_hit;
    Assignment final_assignment;
    std::uint64_t seed = 0;
};

/// Metropolis walk over assignments with single-triode label moves.
/// Starting point is drawn uniformly from the model's label set.
/// Deterministic given (network, model, params, schedule, seed).
ClassicalTrajectory classical_anneal(const TriodeNetwork& net, Model model,
                                     const EnergyParams& params,
                                     const AnnealSchedule& sched, std::uint64_t seed);

}  // namespace qusa
