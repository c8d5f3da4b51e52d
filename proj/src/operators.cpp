#include "histq/operators.hpp"

#include "histq/errors.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace histq {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

} // namespace

Projector Projector::checked(ComplexMatrix matrix, std::string label, double tol) {
    Projector p{std::move(matrix), std::move(label)};
    auto bad = p.violations(tol);
    if (!bad.empty()) {
        throw ValidationError("projector '" + p.label + "': " + join(bad, "; "));
    }
    return p;
}

std::vector<std::string> Projector::violations(double tol) const {
    std::vector<std::string> out;
    if (matrix.dim() == 0) {
        out.push_back("empty matrix");
        return out;
    }
    const double herm = hermiticity_defect(matrix);
    if (herm > tol) out.push_back("not Hermitian (defect " + fmt(herm) + ")");
    const double idem = max_abs_diff(matrix * matrix, matrix);
    if (idem > tol) out.push_back("not idempotent (defect " + fmt(idem) + ")");
    return out;
}

Frame Frame::checked(std::vector<Projector> projectors, std::string label, double tol) {
    Frame f;
    f.projectors = std::move(projectors);
    f.label = std::move(label);
    f.dim = f.projectors.empty() ? 0 : f.projectors.front().matrix.dim();
    auto bad = f.violations(tol);
    if (!bad.empty()) {
        throw ValidationError("frame '" + f.label + "': " + join(bad, "; "));
    }
    return f;
}

std::vector<std::string> Frame::violations(double tol) const {
    std::vector<std::string> out;
    if (projectors.empty()) {
        out.push_back("no projectors");
        return out;
    }
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const auto& p = projectors[i];
        if (p.matrix.dim() != dim) {
            out.push_back("projector '" + p.label + "' has dim " + std::to_string(p.matrix.dim()) +
                          ", frame has dim " + std::to_string(dim));
            return out; // remaining checks need consistent dims
        }
        for (const auto& v : p.violations(tol)) out.push_back("projector '" + p.label + "': " + v);
        if (norm_sq(p.matrix) <= tol) out.push_back("projector '" + p.label + "' is zero");
    }
    std::set<std::string> seen;
    for (const auto& p : projectors) {
        if (!seen.insert(p.label).second) out.push_back("duplicate label '" + p.label + "'");
    }
    ComplexMatrix sum(dim);
    for (const auto& p : projectors) sum += p.matrix;
    const double comp = max_abs_diff(sum, ComplexMatrix::identity(dim));
    if (comp > tol) out.push_back("not complete: sum deviates from I by " + fmt(comp));
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        for (std::size_t j = i + 1; j < projectors.size(); ++j) {
            const double cross =
                max_abs_diff(projectors[i].matrix * projectors[j].matrix, ComplexMatrix(dim));
            if (cross > tol) {
                out.push_back("projectors '" + projectors[i].label + "' and '" + projectors[j].label +
                              "' are not orthogonal (defect " + fmt(cross) + ")");
            }
        }
    }
    return out;
}

int Frame::index_of(const std::string& wanted) const {
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        if (projectors[i].label == wanted) return static_cast<int>(i);
    }
    return -1;
}

ComplexMatrix gate_H() {
    const double s = 1.0 / std::sqrt(2.0);
    return ComplexMatrix::from_rows({{s, s}, {s, -s}});
}

ComplexMatrix gate_X() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }

ComplexMatrix gate_Z() { return ComplexMatrix::from_rows({{1, 0}, {0, -1}}); }

ComplexMatrix gate_CNOT() {
    return ComplexMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
}

Frame computational_frame(std::size_t num_qubits) {
    if (num_qubits == 0) throw std::invalid_argument("computational_frame: need at least one qubit");
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::vector<Projector> ps;
    ps.reserve(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        std::string bits(num_qubits, '0');
        for (std::size_t q = 0; q < num_qubits; ++q) {
            if (b & (std::size_t{1} << (num_qubits - 1 - q))) bits[q] = '1';
        }
        ps.push_back({outer(StateVector::basis(dim, b), StateVector::basis(dim, b)), bits});
    }
    return Frame::checked(std::move(ps), "comp" + std::to_string(num_qubits));
}

Frame subsystem_frame(const Frame& frame, std::size_t position, const std::vector<std::size_t>& dims) {
    if (position >= dims.size()) {
        throw ValidationError("subsystem_frame: position " + std::to_string(position) +
                              " out of range for " + std::to_string(dims.size()) + " subsystems");
    }
    if (frame.dim != dims[position]) {
        throw ValidationError("subsystem_frame: frame dim " + std::to_string(frame.dim) +
                              " does not match subsystem dim " + std::to_string(dims[position]));
    }
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < position; ++k) left *= dims[k];
    for (std::size_t k = position + 1; k < dims.size(); ++k) right *= dims[k];
    std::vector<Projector> ps;
    ps.reserve(frame.projectors.size());
    for (const auto& p : frame.projectors) {
        ComplexMatrix lifted =
            tensor(tensor(ComplexMatrix::identity(left), p.matrix), ComplexMatrix::identity(right));
        ps.push_back({std::move(lifted), p.label});
    }
    return Frame::checked(std::move(ps), frame.label + "@" + std::to_string(position));
}

Projector state_projector(const StateVector& v, std::string label, double tol_norm) {
    if (!v.is_normalized(tol_norm)) {
        throw ValidationError("state_projector: vector is not normalized (norm " + fmt(v.norm()) + ")");
    }
    return {outer(v, v), std::move(label)};
}

Frame binary_frame(const Projector& p, double tol) {
    auto bad = p.violations(tol);
    if (!bad.empty()) {
        throw ValidationError("binary_frame: projector '" + p.label + "': " + join(bad, "; "));
    }
    ComplexMatrix complement = ComplexMatrix::identity(p.matrix.dim()) - p.matrix;
    if (norm_sq(complement) <= tol) {
        throw ValidationError("binary_frame: complement of '" + p.label +
                              "' is the zero projector (p == I)");
    }
    if (norm_sq(p.matrix) <= tol) {
        throw ValidationError("binary_frame: '" + p.label + "' is the zero projector");
    }
    std::vector<Projector> ps;
    ps.push_back(p);
    ps.push_back({std::move(complement), "~" + p.label});
    return Frame::checked(std::move(ps), "binary(" + p.label + ")", tol);
}

Frame trivial_frame(std::size_t dim) {
    std::vector<Projector> ps;
    ps.push_back({ComplexMatrix::identity(dim), "I"});
    return Frame::checked(std::move(ps), "trivial");
}

} // namespace histq
