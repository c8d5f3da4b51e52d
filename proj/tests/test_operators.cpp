#include "histq/errors.hpp"
#include "histq/operators.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace histq;

TEST_CASE("gate algebra") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(approx_eq(gate_H() * gate_H(), i2, 1e-14));
    CHECK(approx_eq(gate_X() * gate_X(), i2, 1e-14));
    CHECK(approx_eq(gate_Z() * gate_Z(), i2, 1e-14));
    CHECK(approx_eq(gate_CNOT() * gate_CNOT(), ComplexMatrix::identity(4), 1e-14));
    CHECK(is_unitary(gate_H(), 1e-14));
    CHECK(is_unitary(gate_CNOT(), 1e-14));
    // HZH = X
    CHECK(approx_eq(gate_H() * gate_Z() * gate_H(), gate_X(), 1e-14));

    const double s = 1.0 / std::sqrt(2.0);
    const StateVector plus = gate_H() * StateVector::basis(2, 0);
    CHECK(std::abs(plus[0] - Complex(s, 0)) < 1e-14);
    CHECK(std::abs(plus[1] - Complex(s, 0)) < 1e-14);
    // control by the first factor: |10> -> |11>, |01> stays
    CHECK(approx_eq(gate_CNOT() * StateVector::basis(4, 2), StateVector::basis(4, 3), 1e-14));
    CHECK(approx_eq(gate_CNOT() * StateVector::basis(4, 1), StateVector::basis(4, 1), 1e-14));
}

TEST_CASE("projector contract: Hermitian and idempotent") {
    CHECK_NOTHROW(Projector::checked(ComplexMatrix::identity(2), "I"));
    // a unitary that is not a projector
    CHECK_THROWS_AS(Projector::checked(gate_H(), "H"), ValidationError);
    // Hermitian but not idempotent
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= Complex(0.5, 0);
    CHECK_THROWS_AS(Projector::checked(half, "half"), ValidationError);
    CHECK(!Projector{half, "half"}.violations().empty());
}

TEST_CASE("frame contract: completeness, orthogonality, labels") {
    const Frame comp = computational_frame(1);
    CHECK(comp.dim == 2);
    CHECK(comp.projectors.size() == 2);

    const Projector p0 = Projector::checked(outer(StateVector::basis(2, 0), StateVector::basis(2, 0)), "0");
    const Projector p1 = Projector::checked(outer(StateVector::basis(2, 1), StateVector::basis(2, 1)), "1");

    // incomplete
    CHECK_THROWS_AS(Frame::checked({p0}, "half"), ValidationError);
    // overlapping members
    CHECK_THROWS_AS(Frame::checked({p0, p0}, "dup"), ValidationError);
    // duplicate labels on distinct members
    Projector p1bad = p1;
    p1bad.label = "0";
    CHECK_THROWS_AS(Frame::checked({p0, p1bad}, "dup-labels"), ValidationError);
    CHECK_NOTHROW(Frame::checked({p0, p1}, "ok"));

    CHECK(comp.index_of("1") == 1);
    CHECK(comp.index_of("2") == -1);
}

TEST_CASE("computational frame labels are bitstrings, first qubit leftmost") {
    const Frame f = computational_frame(2);
    REQUIRE(f.projectors.size() == 4);
    CHECK(f.dim == 4);
    CHECK(f.projectors[2].label == "10");
    // the "10" member projects onto basis index 2 = binary 10
    const StateVector ten = StateVector::basis(4, 2);
    CHECK(approx_eq(f.projectors[2].matrix * ten, ten, 1e-14));
    CHECK((f.projectors[2].matrix * StateVector::basis(4, 1)).norm() < 1e-14);
}

TEST_CASE("subsystem frame lifts a factor and keeps member labels") {
    const Frame alice = subsystem_frame(computational_frame(1), 0, {2, 2});
    CHECK(alice.dim == 4);
    CHECK(alice.projectors[1].label == "1");
    // P_1 x I acting on |10> keeps it, on |01> kills it
    CHECK(approx_eq(alice.projectors[1].matrix * StateVector::basis(4, 2),
                    StateVector::basis(4, 2), 1e-14));
    CHECK((alice.projectors[1].matrix * StateVector::basis(4, 1)).norm() < 1e-14);

    const Frame bob = subsystem_frame(computational_frame(1), 1, {2, 2});
    CHECK(approx_eq(bob.projectors[1].matrix * StateVector::basis(4, 1), StateVector::basis(4, 1),
                    1e-14));
    // lifted members of a complete frame still sum to the identity
    ComplexMatrix sum(4);
    for (const auto& p : bob.projectors) sum += p.matrix;
    CHECK(approx_eq(sum, ComplexMatrix::identity(4), 1e-14));

    CHECK_THROWS_AS(subsystem_frame(computational_frame(1), 2, {2, 2}), ValidationError);
    // frame dim must match its position's dim
    CHECK_THROWS_AS(subsystem_frame(computational_frame(2), 0, {2, 2}), ValidationError);
}

TEST_CASE("state projector requires a normalized vector") {
    CHECK_NOTHROW(state_projector(oracle::random_state(3, 61), "r"));
    StateVector big(std::vector<Complex>{Complex(2, 0), Complex(0, 0)});
    CHECK_THROWS_AS(state_projector(big, "big"), ValidationError);
}

TEST_CASE("binary frame splits into a member and its complement") {
    const Projector pa = state_projector(StateVector::basis(3, 0), "A");
    const Frame f = binary_frame(pa);
    REQUIRE(f.projectors.size() == 2);
    CHECK(f.projectors[0].label == "A");
    CHECK(f.projectors[1].label == "~A");
    ComplexMatrix sum = f.projectors[0].matrix + f.projectors[1].matrix;
    CHECK(approx_eq(sum, ComplexMatrix::identity(3), 1e-14));

    // complement of the identity would be the zero projector
    CHECK_THROWS_AS(binary_frame(Projector::checked(ComplexMatrix::identity(2), "I")),
                    ValidationError);
}

TEST_CASE("trivial frame is the single identity member") {
    const Frame f = trivial_frame(3);
    REQUIRE(f.projectors.size() == 1);
    CHECK(f.projectors[0].label == "I");
    CHECK(approx_eq(f.projectors[0].matrix, ComplexMatrix::identity(3), 1e-15));
}

TEST_CASE("random frames from the oracle satisfy the frame contract") {
    for (std::uint32_t seed : {71u, 72u, 73u}) {
        const Frame f = oracle::random_frame(4, {1, 2, 1}, seed);
        CHECK(f.violations().empty());
        CHECK(f.projectors.size() == 3);
        // ranks show up as traces
        CHECK(trace(f.projectors[1].matrix).real() == doctest::Approx(2.0).epsilon(1e-9));
    }
}
