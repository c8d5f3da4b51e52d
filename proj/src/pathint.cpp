#include "histq/pathint.hpp"

#include "histq/errors.hpp"
#include "histq/probability.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace histq {

namespace {

void check_grid(const GridSystem& g) {
    if (g.n_points == 0) throw std::invalid_argument("GridSystem: need at least one grid point");
    if (g.hamiltonian.dim() != g.n_points) {
        throw ValidationError("GridSystem: hamiltonian dim " + std::to_string(g.hamiltonian.dim()) +
                              " != n_points " + std::to_string(g.n_points));
    }
    const double defect = hermiticity_defect(g.hamiltonian);
    if (defect > kEntryTol) {
        throw ValidationError("GridSystem: hamiltonian is not Hermitian (defect " +
                              std::to_string(defect) + ")");
    }
    if (g.spacing <= 0.0) throw ValidationError("GridSystem: spacing must be positive");
}

void check_index(const GridSystem& g, std::size_t q, const char* what) {
    if (q >= g.n_points) {
        throw EngineError(std::string(what) + ": grid index " + std::to_string(q) +
                          " out of range (N = " + std::to_string(g.n_points) + ")");
    }
}

} // namespace

GridSystem free_particle(std::size_t n_points, double spacing) {
    if (n_points == 0) throw std::invalid_argument("free_particle: need at least one grid point");
    if (spacing <= 0.0) throw ValidationError("free_particle: spacing must be positive");
    ComplexMatrix h(n_points);
    const double hop = 1.0 / (2.0 * spacing * spacing);
    for (std::size_t j = 0; j < n_points; ++j) {
        h(j, j) += 2.0 * hop;
        h(j, (j + 1) % n_points) += -hop;
        h(j, (j + n_points - 1) % n_points) += -hop;
    }
    return {n_points, spacing, std::move(h), 1.0};
}

GridSystem harmonic_oscillator(std::size_t n_points, double spacing) {
    GridSystem g = free_particle(n_points, spacing);
    const double mid = (static_cast<double>(n_points) - 1.0) / 2.0;
    for (std::size_t j = 0; j < n_points; ++j) {
        const double q = (static_cast<double>(j) - mid) * spacing;
        g.hamiltonian(j, j) += 0.5 * q * q;
    }
    return g;
}

Frame coordinate_frame(const GridSystem& g) {
    check_grid(g);
    std::vector<Projector> ps;
    ps.reserve(g.n_points);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const StateVector e = StateVector::basis(g.n_points, j);
        ps.push_back({outer(e, e), "q" + std::to_string(j)});
    }
    return Frame::checked(std::move(ps), "coord" + std::to_string(g.n_points));
}

ComplexMatrix step_unitary(const GridSystem& g, double dt) {
    check_grid(g);
    const std::size_t n = g.n_points;
    Eigen::MatrixXcd h(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) h(r, c) = g.hamiltonian(r, c);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw EngineError("step_unitary: eigendecomposition failed");
    }
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(n);
    for (std::size_t k = 0; k < n; ++k) {
        phases[static_cast<Eigen::Index>(k)] =
            std::exp(Complex(0.0, -evals[static_cast<Eigen::Index>(k)] * dt / g.hbar));
    }
    const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out(r, c) = u(r, c);
    }
    return out;
}

Schedule build_schedule(const GridSystem& g, const TimeSlicing& ts, std::size_t q_start,
                        std::optional<std::size_t> q_end) {
    check_grid(g);
    check_index(g, q_start, "build_schedule");
    if (q_end) check_index(g, *q_end, "build_schedule");
    if (!(ts.tn > ts.t0)) throw ValidationError("TimeSlicing: tn must exceed t0");
    if (ts.n_slices == 0) throw ValidationError("TimeSlicing: need at least one slice");

    const double dt = (ts.tn - ts.t0) / static_cast<double>(ts.n_slices);
    const ComplexMatrix u = step_unitary(g, dt);
    const Frame frame = coordinate_frame(g);

    Schedule s;
    s.dim = g.n_points;
    s.initial = StateVector::basis(g.n_points, q_start);
    s.initial_label = "q" + std::to_string(q_start);
    for (std::size_t k = 0; k < ts.n_slices; ++k) s.slots.push_back({u, frame, std::nullopt});
    if (q_end) {
        s.final = StateVector::basis(g.n_points, *q_end);
        s.final_label = "q" + std::to_string(*q_end);
    }
    return s;
}

double propagation_probability(const GridSystem& g, const TimeSlicing& ts, std::size_t q_start,
                               std::size_t q_end) {
    check_index(g, q_end, "propagation_probability");
    const Schedule s = build_schedule(g, ts, q_start);
    const StateVector e = StateVector::basis(g.n_points, q_end);
    return conditional_next(s, {outer(e, e), "q" + std::to_string(q_end)});
}

} // namespace histq
