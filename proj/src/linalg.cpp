#include "histq/linalg.hpp"

#include "histq/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace histq {

namespace {

bool entry_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("ComplexMatrix::from_rows: empty matrix");
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) {
            throw std::invalid_argument("ComplexMatrix::from_rows: matrix is not square (row " +
                                        std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                        " entries, expected " + std::to_string(n) + ")");
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (!entry_finite(rows[r][c])) {
                throw std::invalid_argument("ComplexMatrix::from_rows: non-finite entry at (" +
                                            std::to_string(r) + "," + std::to_string(c) + ")");
            }
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_dim(dim_, other.dim_, "matrix +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_dim(dim_, other.dim_, "matrix -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& z : data_)
        if (!entry_finite(z)) return false;
    return true;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "matrix *");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

StateVector::StateVector(std::size_t dim) : entries_(dim) {
    if (dim == 0) throw std::invalid_argument("StateVector: dimension must be >= 1");
}

StateVector::StateVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("StateVector: dimension must be >= 1");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!entry_finite(entries_[i])) {
            throw std::invalid_argument("StateVector: non-finite entry at index " + std::to_string(i));
        }
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("StateVector::basis: index out of range");
    StateVector v(dim);
    v[index] = 1.0;
    return v;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& z : entries_) s += std::norm(z);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

StateVector StateVector::normalized(double tol) const {
    const double n = norm();
    if (n <= tol) throw ValidationError("StateVector::normalized: vector norm is ~0");
    StateVector out = *this;
    out *= Complex(1.0 / n, 0.0);
    return out;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector& StateVector::operator+=(const StateVector& other) {
    require_same_dim(dim(), other.dim(), "vector +");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
    require_same_dim(dim(), other.dim(), "vector -");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

StateVector& StateVector::operator*=(Complex scale) {
    for (auto& z : entries_) z *= scale;
    return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(Complex scale, StateVector v) { return v *= scale; }

StateVector operator*(const ComplexMatrix& m, const StateVector& v) {
    require_same_dim(m.dim(), v.dim(), "matrix * vector");
    const std::size_t n = m.dim();
    StateVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim(), b.dim(), "inner product");
    Complex s{};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

ComplexMatrix outer(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim(), b.dim(), "outer product");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ja = 0; ja < na; ++ja) {
            const Complex aij = a(ia, ja);
            if (aij == Complex{}) continue;
            for (std::size_t ib = 0; ib < nb; ++ib)
                for (std::size_t jb = 0; jb < nb; ++jb)
                    out(ia * nb + ib, ja * nb + jb) = aij * b(ib, jb);
        }
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    StateVector out(na * nb);
    for (std::size_t ia = 0; ia < na; ++ia)
        for (std::size_t ib = 0; ib < nb; ++ib) out[ia * nb + ib] = a[ia] * b[ib];
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = std::conj(m(j, i));
    return out;
}

Complex trace(const ComplexMatrix& m) {
    Complex s{};
    for (std::size_t i = 0; i < m.dim(); ++i) s += m(i, i);
    return s;
}

double norm_sq(const ComplexMatrix& m) {
    double s = 0.0;
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += std::norm(m(i, j));
    return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double worst = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

bool approx_eq(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return max_abs_diff(a, b) <= tol;
}

bool approx_eq(const StateVector& a, const StateVector& b, double tol) {
    require_same_dim(a.dim(), b.dim(), "approx_eq");
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(u.dim()));
}

bool is_unitary(const ComplexMatrix& u, double tol) { return unitarity_defect(u) <= tol; }

double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs_diff(m, adjoint(m));
}

} // namespace histq
