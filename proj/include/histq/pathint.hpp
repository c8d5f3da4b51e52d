#pragma once

#include "histq/experiment.hpp"

#include <optional>

namespace histq {

// A particle on N grid points with a Hermitian Hamiltonian; ħ = 1 and
// arbitrary units throughout.
struct GridSystem {
    std::size_t n_points = 0;
    double spacing = 1.0; // Δq
    ComplexMatrix hamiltonian;
    double hbar = 1.0;
};

struct TimeSlicing {
    double t0 = 0.0;
    double tn = 0.0;
    std::size_t n_slices = 1;
};

// Periodic finite-difference kinetic term, H = −(1/2)∇²_disc with m = 1.
GridSystem free_particle(std::size_t n_points, double spacing = 1.0);
// Free particle plus the ½q² well on a grid centered at q = 0.
GridSystem harmonic_oscillator(std::size_t n_points, double spacing = 1.0);

// N rank-1 projectors onto the grid points, labels "q0".."q{N-1}".
Frame coordinate_frame(const GridSystem& g);

// e^{−i·H·dt/ħ} via Hermitian eigendecomposition (exactly unitary up to
// rounding, unlike a truncated series).
ComplexMatrix step_unitary(const GridSystem& g, double dt);

// n_slices slots of (step_unitary(Δt), coordinate_frame), starting from
// the grid state q_start, post-selected on q_end if given.  Summing the
// chains of this schedule over all intermediate grid points is the
// discrete sum over paths.
Schedule build_schedule(const GridSystem& g, const TimeSlicing& ts, std::size_t q_start,
                        std::optional<std::size_t> q_end = {});

// |⟨q_end|U(tn,t0)|q_start⟩|², computed through the frame-summed
// history operator of build_schedule (not by a direct one-shot
// exponential — that independent route lives in the tests).
double propagation_probability(const GridSystem& g, const TimeSlicing& ts, std::size_t q_start,
                               std::size_t q_end);

} // namespace histq
