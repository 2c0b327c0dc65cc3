#include "qusa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace qusa {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("series lengths differ");
    const int n = static_cast<int>(x.size());
    if (n < 2) throw std::invalid_argument("line fit needs at least 2 points");
    double xbar = 0.0, ybar = 0.0;
    for (int i = 0; i < n; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
        syy += (y[i] - ybar) * (y[i] - ybar);
    }
    if (sxx <= 0.0) throw std::invalid_argument("abscissae are all equal");
    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    fit.slope_stderr = n > 2 ? std::sqrt(std::max(0.0, ss_res / (n - 2)) / sxx) : 0.0;
    return fit;
}

TakeoffFit estimate_takeoff(const EnsembleResult& ens, double t_a, double t_b) {
    if (!(t_b > t_a)) throw std::invalid_argument("window is empty");
    if (ens.removed_mean.empty())
        throw std::invalid_argument("take-off estimate needs a projected ensemble");
    const double tol = 1e-9 * std::max(1.0, std::abs(t_b));
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        const double t = ens.times[i];
        if (t < t_a - tol || t > t_b + tol) continue;
        const double p = ens.p_s_mean[i];
        if (!(p > 0.0)) throw std::invalid_argument("mean p_S not positive inside window");
        ts.push_back(t);
        logs.push_back(std::log(p));
    }
    if (ts.size() < 3) throw std::invalid_argument("window covers fewer than 3 samples");
    const LineFit line = fit_line(ts, logs);
    TakeoffFit fit;
    fit.t_a = t_a;
    fit.t_b = t_b;
    fit.k_fit = line.slope;
    fit.r_squared = line.r_squared;
    fit.samples = line.n;
    // samples are taken before the projection at the same time, so the
    // growth from t_a to t_b contains events in [t_a, t_b)
    double removed_sum = 0.0;
    for (std::size_t e = 0; e < ens.event_times.size(); ++e) {
        const double t = ens.event_times[e];
        if (t >= t_a - tol && t < t_b - tol) removed_sum += ens.removed_mean[e];
    }
    fit.k_removed = removed_sum / (t_b - t_a);
    return fit;
}

std::pair<double, double> default_takeoff_window(const EnsembleResult& ens) {
    if (ens.times.empty()) throw std::invalid_argument("empty ensemble");
    const double p0 = ens.p_s_mean.front();
    double t_a = -1.0, t_b = -1.0;
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        if (t_a < 0.0 && ens.p_s_mean[i] >= 2.0 * p0) t_a = ens.times[i];
        if (t_b < 0.0 && ens.p_s_mean[i] >= 0.1) t_b = ens.times[i];
    }
    if (t_a < 0.0 || t_b < 0.0 || !(t_b > t_a))
        throw std::invalid_argument(
            "default take-off window rule does not apply; pass the window explicitly");
    return {t_a, t_b};
}

namespace {

std::size_t sample_index_at(const Trajectory& traj, double t, const char* what) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        if (std::abs(traj.times[i] - t) <= tol) return i;
    throw std::invalid_argument(std::string(what) + " is not a sample time");
}

double log_ps_fraction(const Trajectory& traj, std::size_t i) {
    const double frac = traj.p_s[i] / traj.norm_sq[i];
    if (!(frac > 0.0)) throw std::invalid_argument("p_S vanishes inside the window");
    return std::log(frac);
}

}  // namespace

LedgerResult amplification_ledger(const Trajectory& traj, double t_a, double t_b) {
    if (!(t_b > t_a)) throw std::invalid_argument("window is empty");
    const std::size_t ia = sample_index_at(traj, t_a, "window start");
    const std::size_t ib = sample_index_at(traj, t_b, "window end");

    LedgerResult ledger;
    ledger.delta_log_ps = log_ps_fraction(traj, ib) - log_ps_fraction(traj, ia);

    const double tol = 1e-9 * std::max(1.0, std::abs(t_b));
    double previous_post = log_ps_fraction(traj, ia);
    for (const ProjectionEvent& ev : traj.events) {
        if (ev.time < t_a - tol || ev.time >= t_b - tol) continue;
        ledger.renorm_gain += -std::log1p(-ev.removed);
        ledger.drift += std::log(ev.pre.s) - previous_post;
        previous_post = std::log(ev.post.s);
        ++ledger.events;
    }
    ledger.drift += log_ps_fraction(traj, ib) - previous_post;
    ledger.residual = ledger.delta_log_ps - ledger.renorm_gain - ledger.drift;
    return ledger;
}

ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("series lengths differ");
    if (xs.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 points");
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
    ScalingFit fit;
    for (std::size_t i : order) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("abscissae must be positive");
        if (!fit.abscissae.empty() && xs[i] == fit.abscissae.back())
            throw std::invalid_argument("abscissae must be distinct");
        fit.abscissae.push_back(xs[i]);
        fit.ordinates.push_back(ys[i]);
        if (!(ys[i] > 0.0)) fit.degenerate = true;
    }
    if (fit.degenerate) return fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < fit.abscissae.size(); ++i) {
        lx.push_back(std::log(fit.abscissae[i]));
        ly.push_back(std::log(fit.ordinates[i]));
    }
    const LineFit line = fit_line(lx, ly);
    fit.exponent = line.slope;
    fit.intercept = line.intercept;
    fit.exponent_stderr = line.slope_stderr;
    fit.r_squared = line.r_squared;
    return fit;
}

ScalingFit leak_scaling(const TriodeNetwork& net, const LeakParams& params,
                        const std::vector<double>& intervals,
                        const std::function<void(double, const EnsembleResult&)>& on_point) {
    if (intervals.size() < 3)
        throw std::invalid_argument("leak study needs at least 3 intervals");
    const auto [lo, hi] =
        std::minmax_element(intervals.begin(), intervals.end());
    if (!(*lo > 0.0) || *hi / *lo < 4.0 - 1e-9)
        throw std::invalid_argument("intervals must be positive and span a 4x range");
    std::vector<double> deltas;
    for (const double interval : intervals) {
        ScheduleParams sched;
        sched.dt = params.dt;
        sched.projection_interval = interval;
        sched.total_time = params.total_time;
        sched.stepper = params.stepper;
        sched.allow_coarse_dt = params.allow_coarse_dt;
        const EnsembleResult ens =
            run_ensemble(RunKind::Projected, params.ensemble, params.base_seed, net,
                         params.hamiltonian, params.noise, sched, params.caps);
        if (on_point) on_point(interval, ens);
        double mean = 0.0;
        for (const double d : ens.removed_mean) mean += d;
        deltas.push_back(ens.removed_mean.empty() ? 0.0
                                                  : mean / ens.removed_mean.size());
    }
    return fit_power_law(intervals, deltas);
}

ScalingFit convergence_order(const std::vector<ZenoPoint>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("order estimate needs at least 3 points");
    std::vector<double> xs, ys;
    for (const ZenoPoint& p : points) {
        xs.push_back(p.interval);
        ys.push_back(p.error);
    }
    return fit_power_law(xs, ys);
}

FluctuationReport fluctuation_diagnostic(const Trajectory& traj, double energy_tol) {
    FluctuationReport report;
    report.rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        FluctuationRow row;
        row.t = traj.times[i];
        row.energy = traj.energy[i];
        const double frac = traj.norm_sq[i] > 0.0 ? traj.p_s[i] / traj.norm_sq[i] : 0.0;
        row.log_ps =
            frac > 0.0 ? std::log(frac) : std::numeric_limits<double>::quiet_NaN();
        report.rows.push_back(row);
    }
    // first later sample with matching energy, one match per start sample
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        if (std::isnan(report.rows[i].log_ps)) continue;
        for (std::size_t h = i + 1; h < report.rows.size(); ++h) {
            if (std::abs(report.rows[h].energy - report.rows[i].energy) > energy_tol)
                continue;
            if (std::isnan(report.rows[h].log_ps)) break;
            double gain = 0.0;
            for (const ProjectionEvent& ev : traj.events)
                if (ev.time > report.rows[i].t && ev.time <= report.rows[h].t)
                    gain += -std::log1p(-ev.removed);
            report.matches.push_back({report.rows[i].t, report.rows[h].t,
                                      report.rows[i].energy, report.rows[h].energy,
                                      report.rows[h].log_ps - report.rows[i].log_ps - gain});
            break;
        }
    }
    return report;
}

void dump_fluctuation(std::ostream& rows_out, std::ostream& matches_out,
                      const FluctuationReport& report) {
    char buf[128];
    rows_out << "t,energy,log_p_S\n";
    for (const FluctuationRow& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.t, r.energy, r.log_ps);
        rows_out << buf;
    }
    matches_out << "t_i,t_h,energy_i,energy_h,net_drift\n";
    for (const FluctuationMatch& m : report.matches) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", m.t_i, m.t_h,
                      m.energy_i, m.energy_h, m.net_drift);
        matches_out << buf;
    }
}

}  // namespace qusa
