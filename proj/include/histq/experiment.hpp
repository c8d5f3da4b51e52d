#pragma once

#include "histq/linalg.hpp"
#include "histq/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace histq {

// One time step: evolve by `unitary` into this slot's time, then offer
// the measurement alternatives of `frame`.  `recorded` pins the
// outcome that was actually observed (index into frame.projectors).
struct Slot {
    ComplexMatrix unitary;
    Frame frame;
    std::optional<std::size_t> recorded;
};

// A full experimental arrangement: initial state, ordered slots, and
// an optional post-selected final state.
struct Schedule {
    std::size_t dim = 0;
    StateVector initial;
    std::vector<Slot> slots;
    std::optional<StateVector> final;

    // Display names for the end points ("00", "psi", ...); cosmetic
    // only, never consulted by the engine.
    std::string initial_label = "psi";
    std::string final_label = "phi";
};

inline constexpr double kNormTol = 1e-9;   // state normalization
inline constexpr double kEntryTol = 1e-10; // matrix entry comparisons

// Every invariant violation as a human-readable string; empty means
// the schedule is valid.  Violations are data, not exceptions.
std::vector<std::string> validate(const Schedule& s, double tol = kEntryTol);

// Throws ValidationError listing all violations unless validate() is
// empty.  Engine entry points call this.
void require_valid(const Schedule& s, double tol = kEntryTol);

// U(t_n, t_0) = U_n ··· U_1 (chronological product, last slot leftmost).
ComplexMatrix total_unitary(const Schedule& s);

// Same schedule with all recorded outcomes and the final state removed;
// used by resummation and normalization checks.
Schedule stripped(const Schedule& s);

} // namespace histq
