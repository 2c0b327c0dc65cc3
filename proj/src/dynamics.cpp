#include "qusa/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace qusa {

namespace {

long checked_ratio(double whole, double part, const char* what) {
    if (!(part > 0.0) || !(whole > 0.0))
        throw std::invalid_argument(std::string(what) + ": intervals must be positive");
    const double ratio = whole / part;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(whole) +
                                    " is not an integer multiple of " + std::to_string(part));
    return k;
}

}  // namespace

std::pair<long, long> ScheduleParams::layout() const {
    const long per_interval = checked_ratio(projection_interval, dt, "projection_interval/dt");
    const long intervals = checked_ratio(total_time, projection_interval,
                                         "total_time/projection_interval");
    return {per_interval, intervals};
}

namespace {

/// Upper bound on the spectral norm: diagonal max plus per-pair block
/// Frobenius norms.
double generator_norm_bound(const OperatorHandle& g) {
    double bound = 0.0;
    for (const Complex& d : g.diagonal) bound = std::max(bound, std::abs(d));
    for (const Mat4& m : g.pair_blocks) {
        double fro = 0.0;
        for (const Complex& c : m) fro += std::norm(c);
        bound += std::sqrt(fro);
    }
    return bound;
}

void axpy(StateVector& y, Complex a, const StateVector& x) {
    for (std::size_t i = 0; i < y.amplitudes.size(); ++i)
        y.amplitudes[i] += a * x.amplitudes[i];
}

}  // namespace

void step(StateVector& state, const OperatorHandle& generator, double dt, Stepper stepper) {
    if (!(dt > 0.0)) throw std::invalid_argument("step needs dt > 0");
    if (stepper == Stepper::Euler) {
        const StateVector g = generator.apply(state);
        axpy(state, Complex{0.0, -dt}, g);
        return;
    }
    // exp(-i G dt) by Taylor summation over substeps with |G|h <= 1
    const double bound = generator_norm_bound(generator);
    const long substeps = std::max(1L, static_cast<long>(std::ceil(bound * dt)));
    if (substeps > 1000000)
        throw CapError("propagator needs " + std::to_string(substeps) + " substeps");
    const double h = dt / static_cast<double>(substeps);
    StateVector acc, term, scratch;
    for (long sub = 0; sub < substeps; ++sub) {
        acc = state;
        term = state;
        const double base = state.norm();
        for (int k = 1; k <= 80; ++k) {
            generator.apply(term, scratch);
            const Complex coeff = Complex{0.0, -h / static_cast<double>(k)};
            for (Complex& c : scratch.amplitudes) c *= coeff;
            term.amplitudes.swap(scratch.amplitudes);
            axpy(acc, 1.0, term);
            if (k >= 3 && term.norm() <= 1e-16 * base) break;
        }
        state.amplitudes.swap(acc.amplitudes);
    }
}

namespace {

double diagonal_expectation(const OperatorHandle& diag_op, const StateVector& psi) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
        const double w = std::norm(psi.amplitudes[i]);
        num += diag_op.diagonal[i].real() * w;
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

Trajectory run_dynamics(RunKind kind, const TriodeNetwork& net,
                        const HamiltonianParams& hparams, const NoiseParams& nparams,
                        const ScheduleParams& sched, std::uint64_t seed, const RunCaps& caps,
                        const RunHooks& hooks) {
    hparams.validate();
    nparams.validate();
    const auto [per_interval, intervals] = sched.layout();
    if (net.triode_count > caps.max_triodes)
        throw CapError("run over " + std::to_string(net.triode_count) +
                       " triodes exceeds cap " + std::to_string(caps.max_triodes));
    if (net.triode_count < 1) throw std::invalid_argument("run needs a nonempty network");
    if (!sched.allow_coarse_dt && sched.dt > nparams.tau_c / 5.0 * (1.0 + 1e-12))
        throw std::invalid_argument(
            "dt exceeds tau_c/5; noise would be undersampled (allow_coarse_dt overrides)");

    const SpaceTag space =
        kind == RunKind::Symmetrized ? SpaceTag::Physical : SpaceTag::Comparison;
    const OperatorHandle wire = wire_hamiltonian(net, hparams, space);
    const std::vector<ClassTag> classes = classify_basis(net, space);

    NoiseParams np = nparams;
    np.seed = derive_seed(seed, 2);
    NoiseProcess noise(net.triode_count, np);

    StateVector psi = initial_state(net, derive_seed(seed, 1));
    if (space == SpaceTag::Comparison) psi = embed(psi);

    Trajectory traj;
    traj.seed = seed;
    traj.dt = sched.dt;
    traj.projection_interval = sched.projection_interval;
    traj.renormalized = sched.renormalize;
    const std::size_t total_samples = static_cast<std::size_t>(per_interval * intervals + 1);
    traj.times.reserve(total_samples);
    traj.p_s.reserve(total_samples);
    traj.p_f.reserve(total_samples);
    traj.p_v.reserve(total_samples);
    traj.energy.reserve(total_samples);
    traj.norm_sq.reserve(total_samples);

    const auto sample = [&](double t) {
        const ClassWeights w = probabilities(psi, classes);
        traj.times.push_back(t);
        traj.p_s.push_back(w.s);
        traj.p_f.push_back(w.f);
        traj.p_v.push_back(w.v);
        traj.energy.push_back(diagonal_expectation(wire, psi));
        traj.norm_sq.push_back(psi.norm_squared());
        if (hooks.on_sample) hooks.on_sample(t, psi);
    };

    sample(0.0);
    const long total_steps = per_interval * intervals;
    for (long s = 1; s <= total_steps; ++s) {
        const FieldSample& fields = noise.fields();
        if (hooks.field_log) dump_fields(*hooks.field_log, fields);
        const OperatorHandle coupling =
            kind == RunKind::Symmetrized
                ? actual_coupling(fields, hparams.g, SpaceTag::Physical)
                : comparison_coupling(fields, hparams.g);
        const OperatorHandle generator = effective_generator(wire, coupling, hparams);
        step(psi, generator, sched.dt, sched.stepper);
        noise.advance(sched.dt);
        if (sched.renormalize) psi.normalize();
        const double t = static_cast<double>(s) * sched.dt;
        sample(t);

        if (kind == RunKind::Projected && s % per_interval == 0) {
            const double total = psi.norm_squared();
            const ClassWeights raw = probabilities(psi, classes);
            const double removed_sq = apply_symmetrizer(psi);
            const double kept = total - removed_sq;
            if (kept <= 1e-300)
                throw std::runtime_error("projection removed the whole state");
            ProjectionEvent ev;
            ev.time = t;
            ev.sample_index = traj.times.size() - 1;
            ev.removed = removed_sq / total;
            ev.pre = {raw.s / total, raw.f / total, raw.v / total};
            ev.post = {raw.s / kept, raw.f / kept, 0.0};
            traj.events.push_back(ev);
            if (sched.renormalize) psi.normalize();
        }
    }
    traj.final_state = std::move(psi);
    return traj;
}

}  // namespace

Trajectory run_comparison(const TriodeNetwork& net, const HamiltonianParams& hparams,
                          const NoiseParams& nparams, const ScheduleParams& sched,
                          std::uint64_t seed, const RunCaps& caps, const RunHooks& hooks) {
    return run_dynamics(RunKind::Comparison, net, hparams, nparams, sched, seed, caps, hooks);
}

Trajectory run_projected(const TriodeNetwork& net, const HamiltonianParams& hparams,
                         const NoiseParams& nparams, const ScheduleParams& sched,
                         std::uint64_t seed, const RunCaps& caps, const RunHooks& hooks) {
    return run_dynamics(RunKind::Projected, net, hparams, nparams, sched, seed, caps, hooks);
}

Trajectory run_symmetrized(const TriodeNetwork& net, const HamiltonianParams& hparams,
                           const NoiseParams& nparams, const ScheduleParams& sched,
                           std::uint64_t seed, const RunCaps& caps, const RunHooks& hooks) {
    return run_dynamics(RunKind::Symmetrized, net, hparams, nparams, sched, seed, caps, hooks);
}

namespace {

struct SeriesAccumulator {
    std::vector<double> sum, sumsq;

    void add(const std::vector<double>& xs) {
        if (sum.empty()) {
            sum.resize(xs.size());
            sumsq.resize(xs.size());
        }
        if (xs.size() != sum.size())
            throw std::logic_error("trajectory series lengths disagree");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sum[i] += xs[i];
            sumsq[i] += xs[i] * xs[i];
        }
    }

    void finish(int n, std::vector<double>& mean, std::vector<double>& se) const {
        mean.resize(sum.size());
        se.resize(sum.size());
        for (std::size_t i = 0; i < sum.size(); ++i) {
            mean[i] = sum[i] / n;
            if (n > 1) {
                const double var =
                    std::max(0.0, (sumsq[i] - sum[i] * sum[i] / n) / (n - 1));
                se[i] = std::sqrt(var / n);
            }
        }
    }
};

}  // namespace

EnsembleResult run_ensemble(RunKind kind, int count, std::uint64_t base_seed,
                            const TriodeNetwork& net, const HamiltonianParams& hparams,
                            const NoiseParams& nparams, const ScheduleParams& sched,
                            const RunCaps& caps) {
    if (count < 1) throw std::invalid_argument("ensemble needs at least one trajectory");
    EnsembleResult ens;
    ens.kind = kind;
    ens.count = count;
    ens.dt = sched.dt;
    ens.projection_interval = sched.projection_interval;
    SeriesAccumulator ps, pf, pv, energy, removed;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        ens.seeds.push_back(seed);
        const Trajectory traj = run_dynamics(kind, net, hparams, nparams, sched, seed, caps, {});
        if (i == 0) {
            ens.times = traj.times;
            for (const ProjectionEvent& ev : traj.events) ens.event_times.push_back(ev.time);
        }
        ps.add(traj.p_s);
        pf.add(traj.p_f);
        pv.add(traj.p_v);
        energy.add(traj.energy);
        if (!traj.events.empty()) {
            std::vector<double> deltas;
            deltas.reserve(traj.events.size());
            for (const ProjectionEvent& ev : traj.events) deltas.push_back(ev.removed);
            removed.add(deltas);
        }
    }
    ps.finish(count, ens.p_s_mean, ens.p_s_se);
    pf.finish(count, ens.p_f_mean, ens.p_f_se);
    pv.finish(count, ens.p_v_mean, ens.p_v_se);
    energy.finish(count, ens.energy_mean, ens.energy_se);
    if (!removed.sum.empty()) removed.finish(count, ens.removed_mean, ens.removed_se);
    return ens;
}

namespace {

using DenseMatrix = std::vector<Complex>;

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b, std::size_t dim) {
    DenseMatrix out(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const Complex aik = a[i * dim + k];
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] += aik * b[k * dim + j];
        }
    return out;
}

double dense_fro(const DenseMatrix& a) {
    double s = 0.0;
    for (const Complex& c : a) s += std::norm(c);
    return std::sqrt(s);
}

/// exp(M) by scaling, Taylor summation, and repeated squaring.
DenseMatrix dense_expm(DenseMatrix m, std::size_t dim) {
    double norm1 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < dim; ++i) col += std::abs(m[i * dim + j]);
        norm1 = std::max(norm1, col);
    }
    int squarings = 0;
    while (norm1 > 0.5) {
        norm1 *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (Complex& c : m) c *= scale;

    DenseMatrix sum(dim * dim), term(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        sum[i * dim + i] = 1.0;
        term[i * dim + i] = 1.0;
    }
    for (int k = 1; k <= 120; ++k) {
        term = dense_matmul(term, m, dim);
        const double inv = 1.0 / static_cast<double>(k);
        for (Complex& c : term) c *= inv;
        for (std::size_t i = 0; i < term.size(); ++i) sum[i] += term[i];
        if (k >= 3 && dense_fro(term) <= 1e-18 * dense_fro(sum)) break;
    }
    for (int s = 0; s < squarings; ++s) sum = dense_matmul(sum, sum, dim);
    return sum;
}

std::vector<Complex> dense_matvec(const DenseMatrix& a, const std::vector<Complex>& x,
                                  std::size_t dim) {
    std::vector<Complex> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += a[i * dim + j] * x[j];
        out[i] = acc;
    }
    return out;
}

}  // namespace

std::vector<ZenoPoint> zeno_convergence_study(const TriodeNetwork& net,
                                              const OperatorHandle& frozen,
                                              const std::vector<double>& intervals,
                                              double total_time, std::uint64_t seed) {
    if (!frozen.hermitian)
        throw std::invalid_argument("projected-limit study needs a Hermitian generator");
    if (frozen.space != SpaceTag::Comparison)
        throw std::invalid_argument("projected-limit study runs on the COMPARISON space");
    if (frozen.triode_count != net.triode_count)
        throw std::invalid_argument("generator does not match network");
    if (net.triode_count > 3)
        throw CapError("projected-limit study is dense and capped at 3 triodes");
    if (intervals.empty()) throw std::invalid_argument("need at least one interval");

    const std::size_t dim = space_dimension(SpaceTag::Comparison, net.triode_count);
    const DenseMatrix a = to_dense(frozen);

    std::vector<bool> sing_free(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        sing_free[i] = true;
        std::size_t rest = i;
        for (int t = 0; t < net.triode_count; ++t, rest >>= 2)
            if ((rest & 3) == 3) {
                sing_free[i] = false;
                break;
            }
    }

    DenseMatrix a_sym = a;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (!sing_free[i] || !sing_free[j]) a_sym[i * dim + j] = 0.0;

    const StateVector psi0_state = embed(initial_state(net, seed));
    const std::vector<Complex>& psi0 = psi0_state.amplitudes;

    DenseMatrix prop_sym = a_sym;
    for (Complex& c : prop_sym) c *= Complex{0.0, -total_time};
    std::vector<Complex> ref = dense_matvec(dense_expm(std::move(prop_sym), dim), psi0, dim);
    double ref_norm = 0.0;
    for (const Complex& c : ref) ref_norm += std::norm(c);
    ref_norm = std::sqrt(ref_norm);
    for (Complex& c : ref) c /= ref_norm;

    std::vector<ZenoPoint> points;
    for (const double interval : intervals) {
        const long n = checked_ratio(total_time, interval, "total_time/interval");
        DenseMatrix prop = a;
        for (Complex& c : prop) c *= Complex{0.0, -interval};
        const DenseMatrix u = dense_expm(std::move(prop), dim);
        std::vector<Complex> psi = psi0;
        for (long k = 0; k < n; ++k) {
            psi = dense_matvec(u, psi, dim);
            for (std::size_t i = 0; i < dim; ++i)
                if (!sing_free[i]) psi[i] = 0.0;
        }
        double norm = 0.0;
        for (const Complex& c : psi) norm += std::norm(c);
        if (norm <= 1e-300) throw std::runtime_error("projection removed the whole state");
        norm = std::sqrt(norm);
        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) err += std::norm(psi[i] / norm - ref[i]);
        points.push_back({interval, std::sqrt(err)});
    }
    return points;
}

namespace {

void print_csv_row(std::ostream& out, const double* values, int n, const char* removed) {
    char buf[64];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out << (i ? "," : "") << buf;
    }
    if (removed) out << ',' << removed;
    out << '\n';
}

}  // namespace

void dump_trajectory(std::ostream& out, const Trajectory& traj) {
    out << "t,p_S,p_F,p_V,energy,removed_norm\n";
    std::map<std::size_t, double> removed_at;
    for (const ProjectionEvent& ev : traj.events) removed_at[ev.sample_index] = ev.removed;
    char removed_buf[64];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double row[5] = {traj.times[i], traj.p_s[i], traj.p_f[i], traj.p_v[i],
                               traj.energy[i]};
        const char* removed = "";
        if (auto it = removed_at.find(i); it != removed_at.end()) {
            std::snprintf(removed_buf, sizeof removed_buf, "%.17g", it->second);
            removed = removed_buf;
        }
        print_csv_row(out, row, 5, removed);
    }
}

void dump_ensemble(std::ostream& out, const EnsembleResult& ens) {
    out << "t,p_S_mean,p_S_se,p_F_mean,p_F_se,p_V_mean,p_V_se,energy_mean,energy_se\n";
    for (std::size_t i = 0; i < ens.times.size(); ++i) {
        const double row[9] = {ens.times[i],      ens.p_s_mean[i],    ens.p_s_se[i],
                               ens.p_f_mean[i],   ens.p_f_se[i],      ens.p_v_mean[i],
                               ens.p_v_se[i],     ens.energy_mean[i], ens.energy_se[i]};
        print_csv_row(out, row, 9, nullptr);
    }
}

}  // namespace qusa
