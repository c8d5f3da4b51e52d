#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace histq {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.  Dimensions in this project
// stay tiny (<= 64), so everything is plain O(n^3) loops over a flat
// std::vector; no attempt at sparsity or blocking.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
    // Validates squareness and finiteness of every entry.
    static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    bool all_finite() const;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

// Complex column vector.  May hold unnormalized data (e.g. a state hit
// by a projector); normalized() is where the norm contract lives.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t dim);
    // Validates finiteness of every entry.
    explicit StateVector(std::vector<Complex> entries);

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }

    double norm() const;
    double norm_sq() const;
    // Returns the unit vector along *this; near-zero vectors are an error.
    StateVector normalized(double tol = 1e-12) const;
    bool is_normalized(double tol = 1e-9) const;

    StateVector& operator+=(const StateVector& other);
    StateVector& operator-=(const StateVector& other);
    StateVector& operator*=(Complex scale);

private:
    std::vector<Complex> entries_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(Complex scale, StateVector v);
StateVector operator*(const ComplexMatrix& m, const StateVector& v);

// <a|b>, conjugating the first argument.
Complex inner(const StateVector& a, const StateVector& b);
// |a><b|
ComplexMatrix outer(const StateVector& a, const StateVector& b);
// Kronecker product; index convention (i_a, i_b) -> i_a * b.dim() + i_b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector tensor(const StateVector& a, const StateVector& b);

ComplexMatrix adjoint(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
// Frobenius norm squared: sum of |entry|^2 = Tr(M† M).
double norm_sq(const ComplexMatrix& m);

// Entry-wise comparison, max |a_ij - b_ij| <= tol.  Dim mismatch throws.
bool approx_eq(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-10);
bool approx_eq(const StateVector& a, const StateVector& b, double tol = 1e-10);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// max entry deviation of U†U from the identity.
double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);
// max entry deviation from M† = M.
double hermiticity_defect(const ComplexMatrix& m);

} // namespace histq
