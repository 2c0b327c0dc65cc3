#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <sstream>

#include "qusa/statespace.hpp"

using namespace qusa;

namespace {

TriodeNetwork toy_network() {
    return TriodeNetwork(2, {Wire({0, Axis::X}, {1, Axis::X}), Wire({0, Axis::Y}, {1, Axis::Y}),
                             Wire({0, Axis::Z}, {1, Axis::Z})});
}

StateVector basis_state(SpaceTag space, int triode_count, const std::string& labels) {
    StateVector psi(space, triode_count);
    psi.amplitudes[encode_labels(space, parse_labels(labels))] = 1.0;
    return psi;
}

}  // namespace

TEST_CASE("space dimensions and caps") {
    CHECK(space_radix(SpaceTag::Physical) == 3);
    CHECK(space_radix(SpaceTag::Comparison) == 4);
    CHECK(space_dimension(SpaceTag::Physical, 2) == 9);
    CHECK(space_dimension(SpaceTag::Comparison, 2) == 16);
    CHECK(space_dimension(SpaceTag::Physical, 0) == 1);
    CHECK_THROWS_AS(space_dimension(SpaceTag::Comparison, 21), CapError);
    CHECK_THROWS_AS(space_dimension(SpaceTag::Physical, 26), CapError);
}

TEST_CASE("mixed radix indexing puts triode 0 most significant") {
    CHECK(encode_labels(SpaceTag::Physical, parse_labels("XY")) == 1);
    CHECK(encode_labels(SpaceTag::Physical, parse_labels("ZX")) == 6);
    CHECK(encode_labels(SpaceTag::Comparison, parse_labels("SingX")) == 12);
    CHECK(encode_labels(SpaceTag::Comparison, parse_labels("XSing")) == 3);

    for (std::size_t i = 0; i < 9; ++i)
        CHECK(encode_labels(SpaceTag::Physical, decode_index(SpaceTag::Physical, 2, i)) == i);
    for (std::size_t i = 0; i < 64; ++i)
        CHECK(encode_labels(SpaceTag::Comparison, decode_index(SpaceTag::Comparison, 3, i)) == i);

    CHECK_THROWS_AS(encode_labels(SpaceTag::Physical, parse_labels("XSing")),
                    std::invalid_argument);
}

TEST_CASE("classification splits solutions, frustrated labels, and Sing") {
    const TriodeNetwork net = toy_network();
    CHECK(classify(parse_labels("XX"), net) == ClassTag::S);
    CHECK(classify(parse_labels("XY"), net) == ClassTag::F);
    CHECK(classify(parse_labels("SingSing"), net) == ClassTag::V);  // Sing wins
    CHECK(classify(parse_labels("XSing"), net) == ClassTag::V);

    const auto table = classify_basis(net, SpaceTag::Comparison);
    int s = 0, f = 0, v = 0;
    for (const ClassTag tag : table) {
        if (tag == ClassTag::S) ++s;
        if (tag == ClassTag::F) ++f;
        if (tag == ClassTag::V) ++v;
    }
    CHECK(s == 3);
    CHECK(f == 6);
    CHECK(v == 7);
}

TEST_CASE("class weights sum to the squared norm") {
    const TriodeNetwork net = toy_network();
    StateVector psi(SpaceTag::Comparison, 2);
    psi.amplitudes[encode_labels(SpaceTag::Comparison, parse_labels("XX"))] = {0.5, 0.0};
    psi.amplitudes[encode_labels(SpaceTag::Comparison, parse_labels("XY"))] = {0.0, 0.5};
    psi.amplitudes[encode_labels(SpaceTag::Comparison, parse_labels("XSing"))] = {0.5, 0.5};
    const ClassWeights w = probabilities(psi, net);
    CHECK(w.s == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.f == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.v == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.s + w.f + w.v == doctest::Approx(psi.norm_squared()).epsilon(1e-15));
}

TEST_CASE("embedding preserves amplitudes and inner products") {
    StateVector phys(SpaceTag::Physical, 2);
    for (std::size_t i = 0; i < phys.amplitudes.size(); ++i)
        phys.amplitudes[i] = {static_cast<double>(i + 1), -0.5 * static_cast<double>(i)};

    const StateVector comp = embed(phys);
    CHECK(comp.space == SpaceTag::Comparison);
    CHECK(comp.triode_count == 2);
    CHECK(comp.norm_squared() == doctest::Approx(phys.norm_squared()).epsilon(1e-15));
    CHECK(comp.amplitudes[encode_labels(SpaceTag::Comparison, parse_labels("ZZ"))] ==
          phys.amplitudes[encode_labels(SpaceTag::Physical, parse_labels("ZZ"))]);
    // Sing-containing labels stay empty
    CHECK(std::abs(comp.amplitudes[encode_labels(SpaceTag::Comparison,
                                                 parse_labels("SingY"))]) == 0.0);

    const RestrictResult back = restrict_to_physical(comp);
    CHECK(back.removed == doctest::Approx(0.0));
    for (std::size_t i = 0; i < phys.amplitudes.size(); ++i)
        CHECK(back.state.amplitudes[i] == phys.amplitudes[i]);
}

TEST_CASE("restriction accounts for the dropped weight") {
    StateVector comp(SpaceTag::Comparison, 1);
    comp.amplitudes[0] = {0.6, 0.0};                      // X
    comp.amplitudes[3] = {0.0, 0.8};                      // Sing
    const RestrictResult r = restrict_to_physical(comp);
    CHECK(r.state.amplitudes[0] == Complex{0.6, 0.0});
    CHECK(r.removed == doctest::Approx(0.64).epsilon(1e-15));
    CHECK(r.state.norm_squared() == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("symmetrizer zeroes exactly the Sing-containing amplitudes") {
    StateVector psi(SpaceTag::Comparison, 2);
    for (std::size_t i = 0; i < 16; ++i) psi.amplitudes[i] = {1.0, 1.0};  // norm^2 = 32
    const double removed = apply_symmetrizer(psi);
    CHECK(removed == doctest::Approx(14.0).epsilon(1e-15));  // 7 of 16 labels
    const TriodeNetwork net = toy_network();
    CHECK(probabilities(psi, net).v == 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
        const Assignment labels = decode_index(SpaceTag::Comparison, 2, i);
        const bool has_sing =
            labels[0] == Label::Sing || labels[1] == Label::Sing;
        CHECK(std::abs(psi.amplitudes[i]) == (has_sing ? 0.0 : std::sqrt(2.0)));
    }

    // idempotent: a second application removes nothing
    CHECK(apply_symmetrizer(psi) == 0.0);
}

TEST_CASE("symmetrizer agrees with classifier-driven removal") {
    const TriodeNetwork net(3, {Wire({0, Axis::X}, {2, Axis::Y})});
    RandomStream rng(77);
    StateVector psi(SpaceTag::Comparison, 3);
    for (Complex& a : psi.amplitudes) a = {rng.gaussian(), rng.gaussian()};
    const double v_before = probabilities(psi, net).v;
    StateVector copy = psi;
    const double removed = apply_symmetrizer(copy);
    CHECK(removed == doctest::Approx(v_before).epsilon(1e-14));
    CHECK(probabilities(copy, net).v == 0.0);
}

TEST_CASE("initial state is uniform in magnitude with unit norm") {
    const TriodeNetwork net = toy_network();
    const StateVector psi = initial_state(net, 4242);
    CHECK(psi.space == SpaceTag::Physical);
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
    const double mag = 1.0 / 3.0;  // 3^{-T/2} with T = 2
    for (const Complex& a : psi.amplitudes) CHECK(std::abs(a) == doctest::Approx(mag).epsilon(1e-13));

    // phases vary between basis states and runs are reproducible
    const StateVector again = initial_state(net, 4242);
    CHECK(psi.amplitudes == again.amplitudes);
    const StateVector other = initial_state(net, 4243);
    CHECK(psi.amplitudes != other.amplitudes);

    // a third of the uniform weight sits on the 3 solution labels
    CHECK(probabilities(embed(psi), net).s == doctest::Approx(1.0 / 3).epsilon(1e-13));
}

TEST_CASE("inner products respect the basis and reject space mixing") {
    const StateVector xx = basis_state(SpaceTag::Comparison, 2, "XX");
    const StateVector xy = basis_state(SpaceTag::Comparison, 2, "XY");
    CHECK(inner(xx, xx) == Complex{1.0, 0.0});
    CHECK(inner(xx, xy) == Complex{0.0, 0.0});
    const StateVector phys = basis_state(SpaceTag::Physical, 2, "XX");
    CHECK_THROWS_AS(inner(xx, phys), std::invalid_argument);
}

TEST_CASE("normalize rejects the zero state") {
    StateVector psi(SpaceTag::Physical, 1);
    CHECK_THROWS_AS(psi.normalize(), std::invalid_argument);
    psi.amplitudes[2] = {0.0, 2.0};
    psi.normalize();
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("state dump lists labels and culls below threshold") {
    StateVector psi(SpaceTag::Comparison, 2);
    psi.amplitudes[1] = {0.25, -0.5};
    psi.amplitudes[5] = {1e-16, 0.0};  // below threshold
    std::ostringstream out;
    dump_state(out, psi);
    CHECK(out.str() == "1,XY,0.25,-0.5\n");
}
