#include "bellsim/linalg.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "bellsim/error.h"

namespace bellsim {

namespace {

constexpr double kNormalizationTol = 1e-12;

void require_same_dim(size_t a, size_t b, const char *what) {
    if (a != b) {
        throw BellError(
            ErrorKind::DimensionMismatch,
            std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
    }
}

// Phase convention shared by eigenvectors and coherent states: first
// non-negligible amplitude made real positive.
void fix_phase(std::vector<Complex> &v) {
    for (const auto &c : v) {
        double mag = std::abs(c);
        if (mag > 1e-12) {
            Complex phase = std::conj(c) / mag;
            for (auto &x : v) {
                x *= phase;
            }
            return;
        }
    }
}

using RealMatrix = std::vector<std::vector<double>>;

// Cyclic Jacobi on a real symmetric matrix. On return `a` is (numerically)
// diagonal and the columns of `v` hold the eigenvectors.
void jacobi_symmetric(RealMatrix &a, RealMatrix &v) {
    const size_t n = a.size();
    v.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; i++) {
        v[i][i] = 1.0;
    }
    double scale = 0;
    for (const auto &row : a) {
        for (double x : row) {
            scale += x * x;
        }
    }
    if (scale == 0) {
        return;
    }
    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0;
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off <= 1e-32 * scale) {
            return;
        }
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double apq = a[p][q];
                if (std::abs(apq) <= 1e-300) {
                    continue;
                }
                double theta = (a[q][q] - a[p][p]) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                for (size_t k = 0; k < n; k++) {
                    double akp = a[k][p];
                    double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (size_t k = 0; k < n; k++) {
                    double apk = a[p][k];
                    double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (size_t k = 0; k < n; k++) {
                    double vkp = v[k][p];
                    double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    throw std::runtime_error("jacobi_symmetric: no convergence after 100 sweeps");
}

}  // namespace

ComplexMatrix::ComplexMatrix(size_t dim) : dim_(dim), entries_(dim * dim) {
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()), entries_() {
    entries_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        require_same_dim(row.size(), dim_, "ComplexMatrix rows");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(size_t dim) {
    ComplexMatrix m(dim);
    for (size_t i = 0; i < dim; i++) {
        m(i, i) = 1;
    }
    return m;
}

ComplexMatrix ComplexMatrix::zero(size_t dim) {
    return ComplexMatrix(dim);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (size_t i = 0; i < values.size(); i++) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (size_t i = 0; i < dim_; i++) {
        for (size_t j = 0; j < dim_; j++) {
            r(j, i) = std::conj((*this)(i, j));
        }
    }
    return r;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0;
    for (size_t i = 0; i < dim_; i++) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::hermiticity_violation() const {
    double worst = 0;
    for (size_t i = 0; i < dim_; i++) {
        for (size_t j = i; j < dim_; j++) {
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return worst;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_dim(dim_, other.dim_, "matrix sum");
    for (size_t i = 0; i < entries_.size(); i++) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_dim(dim_, other.dim_, "matrix difference");
    for (size_t i = 0; i < entries_.size(); i++) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scalar) {
    for (auto &e : entries_) {
        e *= scalar;
    }
    return *this;
}

std::string ComplexMatrix::str(int precision) const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision);
    for (size_t i = 0; i < dim_; i++) {
        out << (i == 0 ? "[[" : " [");
        for (size_t j = 0; j < dim_; j++) {
            const auto &c = (*this)(i, j);
            out << (j ? ", " : "") << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
        }
        out << (i + 1 == dim_ ? "]]" : "]\n");
    }
    return out.str();
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a) {
    a *= -1.0;
    return a;
}

ComplexMatrix operator*(ComplexMatrix a, Complex scalar) {
    a *= scalar;
    return a;
}

ComplexMatrix operator*(Complex scalar, ComplexMatrix a) {
    a *= scalar;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.dim(), b.dim(), "matrix product");
    size_t n = a.dim();
    ComplexMatrix r(n);
    for (size_t i = 0; i < n; i++) {
        for (size_t k = 0; k < n; k++) {
            Complex aik = a(i, k);
            for (size_t j = 0; j < n; j++) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    double n = norm(amplitudes_);
    if (std::abs(n * n - 1) > kNormalizationTol) {
        std::ostringstream msg;
        msg << "squared norm " << std::setprecision(17) << n * n << " differs from 1";
        throw BellError(ErrorKind::NotNormalized, msg.str());
    }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(std::vector<Complex>(amplitudes)) {
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
    double n = norm(amplitudes);
    if (n == 0) {
        throw BellError(ErrorKind::NotNormalized, "cannot normalize the zero vector");
    }
    for (auto &a : amplitudes) {
        a /= n;
    }
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(size_t dim, size_t index) {
    std::vector<Complex> v(dim);
    v.at(index) = 1;
    return StateVector(std::move(v));
}

ComplexMatrix StateVector::projector() const {
    ComplexMatrix m(dim());
    for (size_t i = 0; i < dim(); i++) {
        for (size_t j = 0; j < dim(); j++) {
            m(i, j) = amplitudes_[i] * std::conj(amplitudes_[j]);
        }
    }
    return m;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    require_same_dim(a.size(), b.size(), "inner product");
    Complex total = 0;
    for (size_t i = 0; i < a.size(); i++) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

Complex inner(const StateVector &a, const StateVector &b) {
    return inner(a.amplitudes(), b.amplitudes());
}

double norm(std::span<const Complex> v) {
    double total = 0;
    for (const auto &c : v) {
        total += std::norm(c);
    }
    return std::sqrt(total);
}

std::vector<Complex> matvec(const ComplexMatrix &m, std::span<const Complex> v) {
    require_same_dim(m.dim(), v.size(), "matrix-vector product");
    std::vector<Complex> r(v.size());
    for (size_t i = 0; i < v.size(); i++) {
        for (size_t j = 0; j < v.size(); j++) {
            r[i] += m(i, j) * v[j];
        }
    }
    return r;
}

Complex expectation(const ComplexMatrix &m, const StateVector &v) {
    auto mv = matvec(m, v.amplitudes());
    return inner(v.amplitudes(), mv);
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    size_t m = a.dim();
    size_t n = b.dim();
    ComplexMatrix r(m * n);
    for (size_t i = 0; i < m; i++) {
        for (size_t j = 0; j < m; j++) {
            for (size_t k = 0; k < n; k++) {
                for (size_t l = 0; l < n; l++) {
                    r(i * n + k, j * n + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

double frobenius_norm(const ComplexMatrix &a) {
    double total = 0;
    for (const auto &c : a.entries()) {
        total += std::norm(c);
    }
    return std::sqrt(total);
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.dim(), b.dim(), "frobenius_distance");
    return frobenius_norm(a - b);
}

double max_abs_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_distance");
    double worst = 0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (size_t i = 0; i < ea.size(); i++) {
        worst = std::max(worst, std::abs(ea[i] - eb[i]));
    }
    return worst;
}

std::vector<EigenGroup> EigenSystem::groups(double tol) const {
    std::vector<EigenGroup> out;
    for (size_t i = 0; i < eigenvalues.size(); i++) {
        if (!out.empty() && eigenvalues[i] - eigenvalues[i - 1] < tol) {
            auto &g = out.back();
            g.value = (g.value * g.multiplicity + eigenvalues[i]) / (g.multiplicity + 1);
            g.multiplicity++;
        } else {
            out.push_back({eigenvalues[i], 1, i});
        }
    }
    return out;
}

ComplexMatrix EigenSystem::reconstruct() const {
    size_t d = eigenvalues.size();
    ComplexMatrix r(d);
    for (size_t k = 0; k < d; k++) {
        const auto &v = eigenvectors[k];
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) {
                r(i, j) += eigenvalues[k] * v[i] * std::conj(v[j]);
            }
        }
    }
    return r;
}

EigenSystem hermitian_eigen(const ComplexMatrix &h, double hermiticity_tol) {
    double violation = h.hermiticity_violation();
    if (violation > hermiticity_tol) {
        std::ostringstream msg;
        msg << "max |h - h^dagger| = " << std::setprecision(6) << violation << " exceeds tolerance "
            << hermiticity_tol;
        throw BellError(ErrorKind::NotHermitian, msg.str());
    }
    const size_t d = h.dim();
    const size_t m = 2 * d;

    // Symmetrize before embedding so the real matrix is exactly symmetric.
    RealMatrix s(m, std::vector<double>(m));
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            Complex hij = 0.5 * (h(i, j) + std::conj(h(j, i)));
            s[i][j] = hij.real();
            s[i + d][j + d] = hij.real();
            s[i][j + d] = -hij.imag();
            s[i + d][j] = hij.imag();
        }
    }
    RealMatrix basis;
    jacobi_symmetric(s, basis);

    std::vector<size_t> order(m);
    for (size_t k = 0; k < m; k++) {
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return s[a][a] < s[b][b];
    });

    // Every complex eigenvalue appears twice in the embedding, with real
    // eigenvectors spanning {v, i v}. Within each run of equal real
    // eigenvalues, pivoted Gram-Schmidt in the complex inner product keeps
    // exactly one complex vector per pair.
    std::vector<std::vector<Complex>> accepted;
    size_t start = 0;
    while (start < m) {
        size_t end = start + 1;
        while (end < m && s[order[end]][order[end]] - s[order[end - 1]][order[end - 1]] < 1e-8) {
            end++;
        }
        std::vector<std::vector<Complex>> candidates;
        for (size_t k = start; k < end; k++) {
            std::vector<Complex> c(d);
            for (size_t i = 0; i < d; i++) {
                c[i] = Complex(basis[i][order[k]], basis[i + d][order[k]]);
            }
            candidates.push_back(std::move(c));
        }
        while (accepted.size() < d) {
            double best_norm = 0;
            std::vector<Complex> best;
            for (const auto &c : candidates) {
                auto r = c;
                for (const auto &a : accepted) {
                    Complex proj = inner(a, r);
                    for (size_t i = 0; i < d; i++) {
                        r[i] -= proj * a[i];
                    }
                }
                double rn = norm(r);
                if (rn > best_norm) {
                    best_norm = rn;
                    best = std::move(r);
                }
            }
            if (best_norm < 0.3) {
                break;
            }
            for (auto &x : best) {
                x /= best_norm;
            }
            accepted.push_back(std::move(best));
        }
        start = end;
    }
    if (accepted.size() != d) {
        throw std::runtime_error("hermitian_eigen: failed to extract a complete complex eigenbasis");
    }

    EigenSystem result;
    for (auto &v : accepted) {
        fix_phase(v);
        double lambda = inner(v, matvec(h, v)).real();
        result.eigenvalues.push_back(lambda);
        result.eigenvectors.push_back(std::move(v));
    }
    // Rayleigh quotients can reorder values that agree to ~1e-15.
    std::vector<size_t> idx(d);
    for (size_t k = 0; k < d; k++) {
        idx[k] = k;
    }
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return result.eigenvalues[a] < result.eigenvalues[b];
    });
    EigenSystem sorted;
    for (size_t k : idx) {
        sorted.eigenvalues.push_back(result.eigenvalues[k]);
        sorted.eigenvectors.push_back(std::move(result.eigenvectors[k]));
    }
    return sorted;
}

namespace pauli {

ComplexMatrix identity() {
    return ComplexMatrix::identity(2);
}

ComplexMatrix x() {
    return {{0, 1}, {1, 0}};
}

ComplexMatrix y() {
    return {{0, Complex(0, -1)}, {Complex(0, 1), 0}};
}

ComplexMatrix z() {
    return {{1, 0}, {0, -1}};
}

}  // namespace pauli

}  // namespace bellsim
