#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qusa/hamiltonian.hpp"
#include "qusa/statespace.hpp"

namespace qusa {

enum class Stepper : std::uint8_t { Euler, Expm };

struct ScheduleParams {
    double dt = 0.1;                  // inner step
    double projection_interval = 1;  // multiple of dt
    double total_time = 10;          // multiple of projection_interval
    bool renormalize = true;
    Stepper stepper = Stepper::Expm;
    /// waives the dt <= tau_c/5 sampling gate
    bool allow_coarse_dt = false;

    /// Throws unless the intervals nest as integers (relative 1e-9).
    /// Returns {steps per projection interval, interval count}.
    std::pair<long, long> layout() const;
};

struct RunCaps {
    int max_triodes = 7;  // comparison space 4^7 = 16384
};

struct ProjectionEvent {
    double time = 0.0;
    std::size_t sample_index = 0;  // sample carrying this event's pre-values
    /// fraction of the squared norm removed, relative to pre-projection
    double removed = 0.0;
    ClassWeights pre;   // normalized class fractions just before
    ClassWeights post;  // and just after the projection
};

struct Trajectory {
    std::vector<double> times;
    // raw squared-norm class weights; equal to fractions while the state
    // stays normalized
    std::vector<double> p_s, p_f, p_v;
    std::vector<double> energy;   // <H_w> normalized by the state norm
    std::vector<double> norm_sq;  // squared norm at the sample
    std::vector<ProjectionEvent> events;
    StateVector final_state;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double projection_interval = 0.0;
    bool renormalized = true;
};

struct RunHooks {
    /// called at every sample time, before any projection at that time
    std::function<void(double, const StateVector&)> on_sample;
    /// OU field path sink, one dump per inner step (CSV, no header)
    std::ostream* field_log = nullptr;
};

/// One propagator application: EULER is (1 - i G dt); EXPM applies
/// exp(-i G dt) by scaled Taylor summation, accurate to near round-off.
/// Neither renormalizes.
void step(StateVector& state, const OperatorHandle& generator, double dt, Stepper stepper);

/// Site-resolved noise on COMPARISON space, no projections.
Trajectory run_comparison(const TriodeNetwork& net, const HamiltonianParams& hparams,
                          const NoiseParams& nparams, const ScheduleParams& sched,
                          std::uint64_t seed, const RunCaps& caps = {},
                          const RunHooks& hooks = {});

/// Same evolution, projected back to the Sing-free subspace every
/// projection_interval; removal fractions recorded per event.
Trajectory run_projected(const TriodeNetwork& net, const HamiltonianParams& hparams,
                         const NoiseParams& nparams, const ScheduleParams& sched,
                         std::uint64_t seed, const RunCaps& caps = {},
                         const RunHooks& hooks = {});

/// Reference dynamics on PHYSICAL space under the site-averaged coupling;
/// shares the noise stream of the other runs at equal seed.
Trajectory run_symmetrized(const TriodeNetwork& net, const HamiltonianParams& hparams,
                           const NoiseParams& nparams, const ScheduleParams& sched,
                           std::uint64_t seed, const RunCaps& caps = {},
                           const RunHooks& hooks = {});

enum class RunKind : std::uint8_t { Comparison, Projected, Symmetrized };

struct EnsembleResult {
    RunKind kind = RunKind::Projected;
    int count = 0;
    std::vector<double> times;
    std::vector<double> p_s_mean, p_s_se;
    std::vector<double> p_f_mean, p_f_se;
    std::vector<double> p_v_mean, p_v_se;
    std::vector<double> energy_mean, energy_se;
    /// per projection event (Projected kind only)
    std::vector<double> event_times;
    std::vector<double> removed_mean, removed_se;
    std::vector<std::uint64_t> seeds;
    double dt = 0.0;
    double projection_interval = 0.0;
};

/// Runs trajectories with seeds base_seed + i and aggregates mean and
/// standard error pointwise.
EnsembleResult run_ensemble(RunKind kind, int count, std::uint64_t base_seed,
                            const TriodeNetwork& net, const HamiltonianParams& hparams,
                            const NoiseParams& nparams, const ScheduleParams& sched,
                            const RunCaps& caps = {});

struct ZenoPoint {
    double interval = 0.0;  // projection interval
    double error = 0.0;     // state distance at total_time
};

/// Dense study of projected evolution against the symmetrized limit for
/// one frozen Hermitian generator: for each interval, evolve
/// (P exp(-i G dt) P)^N from a seeded initial state and compare with
/// exp(-i PGP total_time), both renormalized. T <= 3.
std::vector<ZenoPoint> zeno_convergence_study(const TriodeNetwork& net,
                                              const OperatorHandle& frozen,
                                              const std::vector<double>& intervals,
                                              double total_time, std::uint64_t seed);

/// CSV: t,p_S,p_F,p_V,energy,removed_norm with removed_norm blank away
/// from projection events.
void dump_trajectory(std::ostream& out, const Trajectory& traj);

/// CSV: t,p_S_mean,p_S_se,p_F_mean,p_F_se,p_V_mean,p_V_se,energy_mean,energy_se.
void dump_ensemble(std::ostream& out, const EnsembleResult& ens);

}  // namespace qusa
