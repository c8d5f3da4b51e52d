#pragma once

// Schedule builders shared by the unit tests and the acceptance runner.
// Everything is constructed through the public library API.

#include "histq/collapse.hpp"
#include "histq/pathint.hpp"
#include "histq/probability.hpp"

#include <cmath>
#include <optional>

namespace helpers {

using namespace histq;

// |0> through two balanced beam splitters, nothing recorded.
inline Schedule mach_zehnder() {
    Schedule s;
    s.dim = 2;
    s.initial = StateVector::basis(2, 0);
    s.slots.push_back({gate_H(), computational_frame(1), std::nullopt});
    s.slots.push_back({gate_H(), computational_frame(1), std::nullopt});
    return s;
}

// |00> -> (H x I) -> CNOT, both steps watched in the computational frame.
inline Schedule entangler() {
    Schedule s;
    s.dim = 4;
    s.initial = StateVector::basis(4, 0);
    s.slots.push_back({tensor(gate_H(), ComplexMatrix::identity(2)), computational_frame(2),
                       std::nullopt});
    s.slots.push_back({gate_CNOT(), computational_frame(2), std::nullopt});
    return s;
}

inline StateVector teleport_input() {
    const double a = 1.0 / std::sqrt(3.0);
    const double b = std::sqrt(2.0) / std::sqrt(3.0);
    StateVector psi(std::vector<Complex>{Complex(a, 0), Complex(b, 0)});
    StateVector bell(std::vector<Complex>{Complex(1 / std::sqrt(2.0), 0), Complex(0, 0),
                                          Complex(0, 0), Complex(1 / std::sqrt(2.0), 0)});
    return tensor(psi, bell);
}

// psi x bell -> (CNOT x I) -> (H x I x I), each step in comp(3).
inline Schedule teleport() {
    Schedule s;
    s.dim = 8;
    s.initial = teleport_input();
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix i4 = ComplexMatrix::identity(4);
    s.slots.push_back({ComplexMatrix::identity(8), computational_frame(3), std::nullopt});
    s.slots.push_back({tensor(gate_CNOT(), i2), computational_frame(3), std::nullopt});
    s.slots.push_back({tensor(gate_H(), i4), computational_frame(3), std::nullopt});
    return s;
}

// Alice's two qubits viewed as one 4-dimensional subsystem.
inline Frame alice_frame() {
    return subsystem_frame(computational_frame(2), 0, {4, 2});
}

// Bob's qubit.
inline Frame bob_frame() {
    return subsystem_frame(computational_frame(1), 2, {2, 2, 2});
}

inline StateVector three_box_state(double sign_c) {
    const double a = 1.0 / std::sqrt(3.0);
    return StateVector(std::vector<Complex>{Complex(a, 0), Complex(a, 0), Complex(sign_c * a, 0)});
}

// One slot (identity), pre-selected on psi and post-selected on phi.
inline Schedule three_box(const Frame& frame) {
    Schedule s;
    s.dim = 3;
    s.initial = three_box_state(1.0);
    s.slots.push_back({ComplexMatrix::identity(3), frame, std::nullopt});
    s.final = three_box_state(-1.0);
    return s;
}

inline Projector box_projector(std::size_t index, const std::string& label) {
    return state_projector(StateVector::basis(3, index), label);
}

inline Frame box_frame_full() {
    return Frame::checked({box_projector(0, "A"), box_projector(1, "B"), box_projector(2, "C")},
                          "boxes");
}

} // namespace helpers
