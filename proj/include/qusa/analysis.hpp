#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "qusa/dynamics.hpp"

namespace qusa {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    double slope_stderr = 0.0;
    int n = 0;
};

/// Ordinary least squares. A constant series fits with slope 0, r^2 = 1.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct TakeoffFit {
    double t_a = 0.0;
    double t_b = 0.0;
    double k_fit = 0.0;      // slope of log mean p_S
    double k_removed = 0.0;  // summed removal fractions over window length
    double r_squared = 0.0;
    int samples = 0;
};

/// Log-linear fit of mean p_S over [t_a, t_b] against the renormalization
/// gain rate of the same window. Needs a projected ensemble and positive
/// mean p_S throughout the window; the window is the caller's choice
/// (see default_takeoff_window).
TakeoffFit estimate_takeoff(const EnsembleResult& ens, double t_a, double t_b);

/// [first t with mean p_S >= 2 p_S(0), first t with mean p_S >= 0.1].
/// Throws when the rule yields no usable window (e.g. p_S(0) >= 0.05).
std::pair<double, double> default_takeoff_window(const EnsembleResult& ens);

struct LedgerResult {
    double renorm_gain = 0.0;    // sum of -log(1 - removed) over events
    double delta_log_ps = 0.0;   // log p_S(t_b) - log p_S(t_a)
    double drift = 0.0;          // between-projection movement of log p_S
    double residual = 0.0;       // delta - gain - drift
    int events = 0;
};

/// Exact decomposition of the p_S growth of one projected trajectory over
/// [t_a, t_b] into projection gains plus inter-projection drift. Window
/// endpoints must be sample times; events at t_a count, events at t_b
/// belong to the next window.
LedgerResult amplification_ledger(const Trajectory& traj, double t_a, double t_b);

struct ScalingFit {
    std::vector<double> abscissae;  // sorted strictly decreasing
    std::vector<double> ordinates;
    /// some ordinate was nonpositive; no exponent available
    bool degenerate = false;
    double exponent = 0.0;
    double intercept = 0.0;  // of the log-log line
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
};

/// Log-log least squares of y against x. At least 3 points.
ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

struct LeakParams {
    HamiltonianParams hamiltonian;
    NoiseParams noise;
    double dt = 0.1;
    double total_time = 40.0;
    Stepper stepper = Stepper::Expm;
    bool allow_coarse_dt = false;
    int ensemble = 25;
    std::uint64_t base_seed = 1;
    RunCaps caps;
};

/// Mean per-interval removal fraction against the projection interval,
/// fitted as a power law. Intervals must span at least a 4x range and
/// divide total_time. `on_point` sees each interval's ensemble as it
/// completes.
ScalingFit leak_scaling(const TriodeNetwork& net, const LeakParams& params,
                        const std::vector<double>& intervals,
                        const std::function<void(double, const EnsembleResult&)>& on_point = {});

/// Power-law order of a projected-limit study's error points.
ScalingFit convergence_order(const std::vector<ZenoPoint>& points);

struct FluctuationRow {
    double t = 0.0;
    double energy = 0.0;
    double log_ps = 0.0;  // NaN where p_S is not positive
};

struct FluctuationMatch {
    double t_i = 0.0;
    double t_h = 0.0;
    double energy_i = 0.0;
    double energy_h = 0.0;
    /// log p_S(t_h) - log p_S(t_i) minus the ledger gain between them
    double net_drift = 0.0;
};

struct FluctuationReport {
    std::vector<FluctuationRow> rows;
    std::vector<FluctuationMatch> matches;
};

/// Diagnostic pairing of each sample with the first later sample of equal
/// energy (within tolerance): reports how much of the p_S change between
/// them is not explained by projection gains. No assertions attached.
FluctuationReport fluctuation_diagnostic(const Trajectory& traj, double energy_tol = 1e-3);

/// CSV t,energy,log_p_S then pair lines t_i,t_h,energy_i,energy_h,net_drift.
void dump_fluctuation(std::ostream& rows_out, std::ostream& matches_out,
                      const FluctuationReport& report);

}  // namespace qusa
