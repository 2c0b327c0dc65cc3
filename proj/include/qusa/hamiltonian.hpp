#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "qusa/network.hpp"
#include "qusa/pair_basis.hpp"
#include "qusa/statespace.hpp"

namespace qusa {

struct HamiltonianParams {
    double g = 1.0;        // energy scale, > 0
    double g_prime = 0.0;  // trap-term scale, >= 0
    bool trap_free = false;
    double gamma = 0.0;  // damping rate, >= 0

    void validate() const;
};

enum class AmplitudeSchedule : std::uint8_t { Constant, LinearDecay, ExponentialDecay };

enum class Polarization : std::uint8_t { Isotropic, Principal };

struct NoiseParams {
    double b0 = 0.1;  // stationary per-site field strength at t = 0
    AmplitudeSchedule schedule = AmplitudeSchedule::Constant;
    double decay_time = 0.0;      // schedule time constant (decaying kinds)
    double floor_fraction = 0.05; // exponential decay levels off at b0 * this
    double tau_c = 1.0;           // correlation time, > 0
    Polarization polarization = Polarization::Isotropic;
    /// both sites of a pair see one shared field (exchange-symmetric bath)
    bool pair_symmetric = false;
    std::uint64_t seed = 0;

    void validate() const;
    /// B0(t) of the schedule; never negative.
    double amplitude(double t) const;
};

/// One field vector per proton site; site index beta is 0 or 1 within a
/// pair (printed 1-based in dumps).
struct FieldSample {
    int triode_count = 0;
    double time = 0.0;
    std::vector<std::array<double, 3>> site_fields;  // index 2*tau + beta

    const std::array<double, 3>& field(int tau, int beta) const {
        return site_fields.at(2 * static_cast<std::size_t>(tau) + beta);
    }
};

/// CSV lines t,tau,beta,bx,by,bz (beta 1-based), no header.
void dump_fields(std::ostream& out, const FieldSample& sample);

/// Per-component Ornstein-Uhlenbeck process over the 2T proton sites.
/// ISOTROPIC: 3 independent components per site, each with stationary
/// standard deviation B0(t). PRINCIPAL: one scalar with stationary
/// standard deviation B0(t) scaling the fixed direction (1,1,1)/sqrt(3).
/// Initial fields are drawn from the stationary law at t = 0.
class NoiseProcess {
public:
    NoiseProcess(int triode_count, const NoiseParams& params);

    const FieldSample& fields() const { return sample_; }
    void advance(double dt);

private:
    NoiseParams params_;
    RandomStream rng_;
    /// one OU unit per site (or per pair when pair_symmetric), times
    /// 3 components when isotropic
    std::vector<double> state_;
    FieldSample sample_;

    void refresh_sample();
};

/// Exact OU update of one scalar: decay toward 0 plus a fresh Gaussian
/// kick sized for stationary standard deviation `target_sd`.
double advance_ou(double value, double dt, double tau_c, double target_sd,
                  RandomStream& rng);

struct SiteCoupling {
    int triode = 0;
    int site = 0;  // 0 or 1 within the pair
    std::array<double, 3> field{};
};

/// Matrix-free operator: a diagonal part over the basis labels plus a sum
/// of single-site Pauli couplings (stored pair-wise as label-basis 4x4
/// blocks; on PHYSICAL space only the Sing-free 3x3 corner acts).
/// Immutable once built.
struct OperatorHandle {
    SpaceTag space = SpaceTag::Physical;
    int triode_count = 0;
    std::vector<Complex> diagonal;        // empty means zero diagonal
    std::vector<SiteCoupling> couplings;  // already scaled by g
    bool hermitian = true;
    std::vector<Mat4> pair_blocks;  // per-triode sum of the couplings

    void apply(const StateVector& in, StateVector& out) const;
    StateVector apply(const StateVector& in) const;
    /// Same with the diagonal conjugated and blocks adjointed.
    StateVector apply_adjoint(const StateVector& in) const;
};

/// Diagonal energy assignment_energy(labels) on the requested space.
OperatorHandle wire_hamiltonian(const TriodeNetwork& net, const HamiltonianParams& params,
                                SpaceTag space);

/// H over COMPARISON space with every site seeing its own field.
OperatorHandle comparison_coupling(const FieldSample& fields, double g);

/// Both sites of each pair replaced by their average field; valid on
/// either space because the averaged coupling never mixes Sing in or out.
OperatorHandle actual_coupling(const FieldSample& fields, double g, SpaceTag space);

/// G = H_w + H_r - i*gamma*H_w. Ground labels of H_w are undamped.
OperatorHandle effective_generator(const OperatorHandle& wire, const OperatorHandle& coupling,
                                   const HamiltonianParams& params);

/// Largest singular value, estimated by power iteration on G^dag G.
double operator_norm_estimate(const OperatorHandle& op, int iterations = 40);

/// Dense row-major matrix of the operator; verification use only.
std::vector<Complex> to_dense(const OperatorHandle& op, int max_triodes = 3);

/// Max Frobenius deviation between P A P and the physical restriction of A
/// re-embedded, for A = wire Hamiltonian and A = site-resolved coupling
/// with averaged counterpart. Dense check, T <= 3.
double verify_symmetrization(const TriodeNetwork& net, const FieldSample& fields,
                             const HamiltonianParams& params);

}  // namespace qusa
