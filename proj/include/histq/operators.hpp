#pragma once

#include "histq/linalg.hpp"

#include <string>
#include <vector>

namespace histq {

// Orthogonal projector with an outcome name ("11", "A", "phi", ...).
// Hermiticity/idempotency are enforced by checked() and re-checkable
// via violations(); plain aggregate construction stays available for
// callers that already hold a valid projector.
struct Projector {
    ComplexMatrix matrix;
    std::string label;

    // Validates Hermitian + idempotent within tol; throws ValidationError.
    static Projector checked(ComplexMatrix matrix, std::string label, double tol = 1e-10);
    // Empty iff Hermitian and idempotent within tol.
    std::vector<std::string> violations(double tol = 1e-10) const;
};

// Decomposition of unity: ordered, mutually orthogonal projectors
// summing to I.  Order is meaningful — history outcome indices refer
// to positions in this list.
struct Frame {
    std::size_t dim = 0;
    std::vector<Projector> projectors;
    std::string label;

    // Validates the full frame contract; throws ValidationError.
    static Frame checked(std::vector<Projector> projectors, std::string label, double tol = 1e-10);
    // Empty iff complete, orthogonal, idempotent, labels distinct, no
    // zero member.
    std::vector<std::string> violations(double tol = 1e-10) const;
    // Index of the projector with this label; -1 if absent.
    int index_of(const std::string& label) const;
};

ComplexMatrix gate_H();
ComplexMatrix gate_X();
ComplexMatrix gate_Z();
ComplexMatrix gate_CNOT();

// 2^n rank-1 projectors |b⟩⟨b| labeled by bitstrings in lexicographic
// order ("00", "01", "10", "11" for n = 2).
Frame computational_frame(std::size_t num_qubits);

// Lifts each projector of `frame` to the tensor-product space described
// by dims, acting at `position` (0-based): I ⊗ … ⊗ P ⊗ … ⊗ I.
Frame subsystem_frame(const Frame& frame, std::size_t position, const std::vector<std::size_t>& dims);

// |v⟩⟨v| for a normalized v (norm within tol_norm of 1).
Projector state_projector(const StateVector& v, std::string label = "P", double tol_norm = 1e-9);

// {P, I−P} with labels (p.label, "~"+p.label).  p == I is rejected:
// the complement would be the zero projector, which labels an
// impossible outcome.
Frame binary_frame(const Projector& p, double tol = 1e-10);

// Single-member frame {I}: a time with no measurement alternatives.
Frame trivial_frame(std::size_t dim);

} // namespace histq
