#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qusa/common.hpp"
#include "qusa/network.hpp"
#include "qusa/pair_basis.hpp"

namespace qusa {

/// PHYSICAL: labels {X,Y,Z} per triode, dimension 3^T.
/// COMPARISON: labels {X,Y,Z,Sing}, dimension 4^T.
enum class SpaceTag : std::uint8_t { Physical, Comparison };

int space_radix(SpaceTag space);
std::size_t space_dimension(SpaceTag space, int triode_count);

/// Mixed-radix basis indexing, triode 0 most significant.
std::size_t encode_labels(SpaceTag space, const Assignment& labels);
Assignment decode_index(SpaceTag space, int triode_count, std::size_t index);

struct StateVector {
    StateVector() = default;
    StateVector(SpaceTag space, int triode_count);

    SpaceTag space = SpaceTag::Physical;
    int triode_count = 0;
    std::vector<Complex> amplitudes;

    double norm_squared() const;
    double norm() const;
    void normalize();  // throws on (near-)zero norm
};

Complex inner(const StateVector& a, const StateVector& b);

enum class ClassTag : std::uint8_t { S, F, V };

/// V when any label is Sing, else S or F by the network's wire errors.
ClassTag classify(const Assignment& labels, const TriodeNetwork& net);

/// Class of every basis index of the space, in index order.
std::vector<ClassTag> classify_basis(const TriodeNetwork& net, SpaceTag space);

struct ClassWeights {
    double s = 0.0;
    double f = 0.0;
    double v = 0.0;
};

/// Squared-norm weight of each class; sums to norm_squared(state).
ClassWeights probabilities(const StateVector& state, const TriodeNetwork& net);
ClassWeights probabilities(const StateVector& state, const std::vector<ClassTag>& table);

/// PHYSICAL -> COMPARISON, copying amplitudes onto Sing-free labels.
StateVector embed(const StateVector& physical);

struct RestrictResult {
    StateVector state;   // PHYSICAL
    double removed = 0;  // squared norm of the dropped Sing-containing part
};

/// COMPARISON -> PHYSICAL. Does not renormalize.
RestrictResult restrict_to_physical(const StateVector& comparison);

/// In-place tensor-power projector P = prod of per-pair (1+X)/2: zeroes
/// every Sing-containing amplitude. Returns the removed squared norm.
/// Does not renormalize.
double apply_symmetrizer(StateVector& comparison);

/// Uniform-magnitude state over all PHYSICAL labels, one independent
/// uniform random phase per basis state.
StateVector initial_state(const TriodeNetwork& net, std::uint64_t seed);

/// One line per amplitude above `threshold`: index,labels,re,im.
void dump_state(std::ostream& out, const StateVector& state, double threshold = 1e-14);

}  // namespace qusa
