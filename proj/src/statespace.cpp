#include "qusa/statespace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace qusa {

int space_radix(SpaceTag space) { return space == SpaceTag::Physical ? 3 : 4; }

std::size_t space_dimension(SpaceTag space, int triode_count) {
    if (triode_count < 0) throw std::invalid_argument("negative triode count");
    const std::size_t radix = space_radix(space);
    std::size_t dim = 1;
    for (int t = 0; t < triode_count; ++t) {
        dim *= radix;
        if (dim > (std::size_t{1} << 40))
            throw CapError("state space over " + std::to_string(triode_count) +
                           " triodes does not fit in memory");
    }
    return dim;
}

std::size_t encode_labels(SpaceTag space, const Assignment& labels) {
    const std::size_t radix = space_radix(space);
    std::size_t idx = 0;
    for (Label l : labels) {
        const auto digit = static_cast<std::size_t>(l);
        if (digit >= radix) throw std::invalid_argument("label outside space alphabet");
        idx = idx * radix + digit;
    }
    return idx;
}

Assignment decode_index(SpaceTag space, int triode_count, std::size_t index) {
    const std::size_t radix = space_radix(space);
    Assignment labels(triode_count);
    for (int t = triode_count - 1; t >= 0; --t) {
        labels[t] = static_cast<Label>(index % radix);
        index /= radix;
    }
    if (index != 0) throw std::invalid_argument("basis index out of range");
    return labels;
}

StateVector::StateVector(SpaceTag s, int t)
    : space(s), triode_count(t), amplitudes(space_dimension(s, t)) {}

double StateVector::norm_squared() const {
    double n = 0.0;
    for (const Complex& a : amplitudes) n += std::norm(a);
    return n;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

void StateVector::normalize() {
    const double n = norm();
    if (n < 1e-300) throw std::invalid_argument("cannot normalize a zero state");
    const double inv = 1.0 / n;
    for (Complex& a : amplitudes) a *= inv;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.space != b.space || a.triode_count != b.triode_count)
        throw std::invalid_argument("inner product across different spaces");
    Complex out = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        out += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return out;
}

ClassTag classify(const Assignment& labels, const TriodeNetwork& net) {
    for (Label l : labels)
        if (l == Label::Sing) return ClassTag::V;
    return total_error(net, labels) == 0 ? ClassTag::S : ClassTag::F;
}

std::vector<ClassTag> classify_basis(const TriodeNetwork& net, SpaceTag space) {
    const std::size_t dim = space_dimension(space, net.triode_count);
    std::vector<ClassTag> table(dim);
    for (std::size_t i = 0; i < dim; ++i)
        table[i] = classify(decode_index(space, net.triode_count, i), net);
    return table;
}

ClassWeights probabilities(const StateVector& state, const TriodeNetwork& net) {
    return probabilities(state, classify_basis(net, state.space));
}

ClassWeights probabilities(const StateVector& state, const std::vector<ClassTag>& table) {
    if (table.size() != state.amplitudes.size())
        throw std::invalid_argument("class table does not match state dimension");
    ClassWeights w;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double p = std::norm(state.amplitudes[i]);
        switch (table[i]) {
            case ClassTag::S: w.s += p; break;
            case ClassTag::F: w.f += p; break;
            case ClassTag::V: w.v += p; break;
        }
    }
    return w;
}

namespace {

/// Maps a PHYSICAL index to the COMPARISON index with the same labels:
/// re-reads the base-3 digits as base-4 digits.
std::size_t widen_index(std::size_t phys, int triode_count) {
    std::size_t comp = 0;
    std::size_t shift = 0;
    for (int t = 0; t < triode_count; ++t) {
        comp |= (phys % 3) << shift;
        phys /= 3;
        shift += 2;
    }
    return comp;
}

}  // namespace

StateVector embed(const StateVector& physical) {
    if (physical.space != SpaceTag::Physical)
        throw std::invalid_argument("embed expects a PHYSICAL state");
    StateVector out(SpaceTag::Comparison, physical.triode_count);
    for (std::size_t i = 0; i < physical.amplitudes.size(); ++i)
        out.amplitudes[widen_index(i, physical.triode_count)] = physical.amplitudes[i];
    return out;
}

RestrictResult restrict_to_physical(const StateVector& comparison) {
    if (comparison.space != SpaceTag::Comparison)
        throw std::invalid_argument("restrict expects a COMPARISON state");
    RestrictResult out;
    out.state = StateVector(SpaceTag::Physical, comparison.triode_count);
    double kept = 0.0;
    for (std::size_t i = 0; i < out.state.amplitudes.size(); ++i) {
        const Complex a = comparison.amplitudes[widen_index(i, comparison.triode_count)];
        out.state.amplitudes[i] = a;
        kept += std::norm(a);
    }
    out.removed = comparison.norm_squared() - kept;
    if (out.removed < 0.0) out.removed = 0.0;
    return out;
}

double apply_symmetrizer(StateVector& comparison) {
    if (comparison.space != SpaceTag::Comparison)
        throw std::invalid_argument("symmetrizer acts on COMPARISON states");
    double removed = 0.0;
    const int T = comparison.triode_count;
    for (std::size_t i = 0; i < comparison.amplitudes.size(); ++i) {
        std::size_t rest = i;
        bool has_sing = false;
        for (int t = 0; t < T; ++t) {
            if ((rest & 3) == 3) {
                has_sing = true;
                break;
            }
            rest >>= 2;
        }
        if (has_sing) {
            removed += std::norm(comparison.amplitudes[i]);
            comparison.amplitudes[i] = 0.0;
        }
    }
    return removed;
}

StateVector initial_state(const TriodeNetwork& net, std::uint64_t seed) {
    StateVector out(SpaceTag::Physical, net.triode_count);
    RandomStream rng(derive_seed(seed, 0x1517));
    const double mag = 1.0 / std::sqrt(static_cast<double>(out.amplitudes.size()));
    for (Complex& a : out.amplitudes) {
        const double phase = 6.283185307179586476925286766559 * rng.uniform();
        a = Complex{mag * std::cos(phase), mag * std::sin(phase)};
    }
    return out;
}

void dump_state(std::ostream& out, const StateVector& state, double threshold) {
    const int T = state.triode_count;
    char buf[96];
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const Complex a = state.amplitudes[i];
        if (std::abs(a) <= threshold) continue;
        const Assignment labels = decode_index(state.space, T, i);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", a.real(), a.imag());
        out << i << ',' << to_string(labels) << buf;
    }
}

}  // namespace qusa
