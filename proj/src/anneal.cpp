#include "qusa/anneal.hpp"

#include <cmath>
#include <stdexcept>

#include "qusa/common.hpp"

namespace qusa {

double temperature_at(const AnnealSchedule& sched, long step) {
    if (sched.steps < 1) throw std::invalid_argument("schedule needs at least one step");
    if (step < 0 || step >= sched.steps) throw std::invalid_argument("step out of schedule");
    const double frac = sched.steps > 1
                            ? static_cast<double>(step) / static_cast<double>(sched.steps - 1)
                            : 1.0;
    switch (sched.profile) {
        case TemperatureProfile::Constant:
            return sched.temp_start;
        case TemperatureProfile::Linear:
            return sched.temp_start + (sched.temp_end - sched.temp_start) * frac;
        case TemperatureProfile::Geometric:
            if (sched.temp_start <= 0.0 || sched.temp_end <= 0.0)
                throw std::invalid_argument("geometric profile needs positive temperatures");
            return sched.temp_start * std::pow(sched.temp_end / sched.temp_start, frac);
    }
    throw std::logic_error("bad temperature profile");
}

ClassicalTrajectory classical_anneal(const TriodeNetwork& net, Model model,
                                     const EnergyParams& params,
                                     const AnnealSchedule& sched, std::uint64_t seed) {
    const int radix = label_count(model);
    const int T = net.triode_count;
    if (T < 1) throw std::invalid_argument("annealer needs a nonempty network");

    std::vector<std::vector<int>> incident(T);
    for (std::size_t w = 0; w < net.wires.size(); ++w) {
        incident[net.wires[w].a.triode].push_back(static_cast<int>(w));
        if (net.wires[w].b.triode != net.wires[w].a.triode)
            incident[net.wires[w].b.triode].push_back(static_cast<int>(w));
    }

    RandomStream rng(seed);
    Assignment a(T);
    for (int t = 0; t < T; ++t) a[t] = static_cast<Label>(rng.below(radix));

    // incremental bookkeeping: error count and trap depth sum
    int err = total_error(net, a);
    int depth = 0;
    for (Label l : a) depth += 3 - qubit_sum(l);
    const auto energy_of = [&](int e, int d) {
        return params.trap_free ? e * (params.g + params.g_prime * d)
                                : params.g * e;
    };

    ClassicalTrajectory traj;
    traj.seed = seed;
    traj.energies.reserve(sched.steps + 1);
    traj.energies.push_back(energy_of(err, depth));
    if (err == 0) traj.first_hit = 0;

    for (long s = 0; s < sched.steps; ++s) {
        const int t = static_cast<int>(rng.below(T));
        const int offset = static_cast<int>(rng.below(radix - 1));
        const Label old_label = a[t];
        const Label new_label =
            static_cast<Label>(offset >= static_cast<int>(old_label) ? offset + 1 : offset);

        int new_err = err;
        for (int w : incident[t]) new_err -= wire_error(net.wires[w], a);
        a[t] = new_label;
        for (int w : incident[t]) new_err += wire_error(net.wires[w], a);
        const int new_depth = depth + qubit_sum(old_label) - qubit_sum(new_label);

        const double delta = energy_of(new_err, new_depth) - energy_of(err, depth);
        bool accept = delta <= 0.0;
        if (!accept) {
            const double temp = temperature_at(sched, s);
            if (temp > 0.0) accept = rng.uniform() < std::exp(-delta / temp);
        }
        if (accept) {
            err = new_err;
            depth = new_depth;
        } else {
            a[t] = old_label;
        }
        traj.energies.push_back(energy_of(err, depth));
        if (err == 0 && !traj.first_hit) traj.first_hit = s + 1;
    }
    traj.final_assignment = std::move(a);
    return traj;
}

}  // namespace qusa
