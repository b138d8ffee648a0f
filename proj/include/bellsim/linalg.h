#ifndef BELLSIM_LINALG_H
#define BELLSIM_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace bellsim {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
   public:
    explicit ComplexMatrix(size_t dim);
    /// Rows given as nested lists; throws DimensionMismatch unless square.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(size_t dim);
    static ComplexMatrix zero(size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    size_t dim() const noexcept {
        return dim_;
    }
    Complex &operator()(size_t row, size_t col) {
        return entries_[row * dim_ + col];
    }
    const Complex &operator()(size_t row, size_t col) const {
        return entries_[row * dim_ + col];
    }
    std::span<const Complex> entries() const noexcept {
        return entries_;
    }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    /// max |h - h^dagger| over entries.
    double hermiticity_violation() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scalar);

    bool operator==(const ComplexMatrix &other) const = default;

    std::string str(int precision = 6) const;

   private:
    size_t dim_;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex scalar);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

/// Unit-norm complex vector. Construction checks normalization to 1e-12.
class StateVector {
   public:
    explicit StateVector(std::vector<Complex> amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    /// Scales `amplitudes` to unit norm; throws NotNormalized for the zero vector.
    static StateVector normalized(std::vector<Complex> amplitudes);
    /// Standard basis vector e_index.
    static StateVector basis(size_t dim, size_t index);

    size_t dim() const noexcept {
        return amplitudes_.size();
    }
    const Complex &operator[](size_t i) const {
        return amplitudes_[i];
    }
    std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }

    /// Outer product |v><v|.
    ComplexMatrix projector() const;

    bool operator==(const StateVector &other) const = default;

   private:
    std::vector<Complex> amplitudes_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
Complex inner(const StateVector &a, const StateVector &b);
double norm(std::span<const Complex> v);
std::vector<Complex> matvec(const ComplexMatrix &m, std::span<const Complex> v);
/// <v|m|v>.
Complex expectation(const ComplexMatrix &m, const StateVector &v);

/// Kronecker product; entry (i*n+k, j*n+l) = a(i,j) * b(k,l).
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);

double frobenius_norm(const ComplexMatrix &a);
double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// One run of (numerically) equal eigenvalues.
struct EigenGroup {
    double value;
    size_t multiplicity;
    size_t first_index;
};

struct EigenSystem {
    /// Ascending.
    std::vector<double> eigenvalues;
    /// eigenvectors[i] belongs to eigenvalues[i]; orthonormal.
    std::vector<std::vector<Complex>> eigenvectors;

    /// Eigenvalues separated by less than `tol` are merged into one group.
    std::vector<EigenGroup> groups(double tol = 1e-8) const;
    ComplexMatrix reconstruct() const;
};

inline constexpr double kDefaultHermiticityTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix via cyclic Jacobi on its real
/// 2d x 2d embedding [[Re, -Im], [Im, Re]]. Throws NotHermitian when
/// `h.hermiticity_violation() > hermiticity_tol`.
EigenSystem hermitian_eigen(const ComplexMatrix &h, double hermiticity_tol = kDefaultHermiticityTol);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace bellsim

#endif
