#ifndef BELLSIM_QUANTUM_SPIN_H
#define BELLSIM_QUANTUM_SPIN_H

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bellsim/linalg.h"

namespace bellsim {

using Vec3 = std::array<double, 3>;
using Rotation3 = std::array<std::array<double, 3>, 3>;

double dot(const Vec3 &a, const Vec3 &b);

/// Unit 3-vector. Planar angles live in the x-z plane, measured from +z
/// towards +x, so angle 0 is z and angle pi/2 is x.
class Direction {
   public:
    /// Throws NotUnit unless |v| = 1 within 1e-12.
    static Direction from_vector(const Vec3 &v);
    /// Normalizes `v`; throws NotUnit for the zero vector.
    static Direction normalized(const Vec3 &v);
    static Direction planar(double angle_radians);
    static Direction x_axis();
    static Direction y_axis();
    static Direction z_axis();

    const Vec3 &vec() const noexcept {
        return v_;
    }
    double x() const noexcept {
        return v_[0];
    }
    double y() const noexcept {
        return v_[1];
    }
    double z() const noexcept {
        return v_[2];
    }
    Direction operator-() const;
    double dot(const Direction &other) const;

   private:
    explicit Direction(const Vec3 &v) : v_(v) {
    }
    Vec3 v_;
};

/// n.sigma; eigenvalues exactly +-1.
ComplexMatrix spin_operator(const Direction &n);

/// (|+-> - |-+>)/sqrt(2) in the basis |1+>|2+>, |1+>|2->, |1->|2+>, |1->|2->.
StateVector singlet_state();

/// sx(x)sx + sy(x)sy + sz(x)sz; spectrum {-3, 1, 1, 1}, singlet at -3.
ComplexMatrix spin_dot_operator();

/// +1 eigenvector of spin_operator(n), first nonzero amplitude real positive.
StateVector coherent_state(const Direction &n);

/// Near-uniform deterministic sphere grid (Fibonacci lattice, z midpoints).
std::vector<Direction> fibonacci_sphere(size_t points);

inline constexpr size_t kMinIdentityGrid = 100;
inline constexpr size_t kMinOperatorGrid = 10000;

/// || 2 * mean_n |n><n| - I ||_F over an N-point Fibonacci grid.
/// Throws GridTooCoarse below kMinIdentityGrid points.
double resolution_of_identity_defect(size_t grid_points);
/// Same defect over an explicit set of directions (no size restriction).
double resolution_of_identity_defect(std::span<const Direction> grid);

using SphereFunction = std::function<double(const Direction &)>;

/// Closed interval [low, high] that the operator's spectrum is mapped onto.
struct ValueRange {
    double low;
    double high;
};

struct CoherentOperator {
    /// Rescaled operator; its eigenvalues are `range.low` and `range.high`.
    ComplexMatrix matrix;
    /// mean_n theta(n) |n><n| before rescaling.
    ComplexMatrix raw;
    ValueRange range;
    /// True when theta was constant on the grid; `matrix` is then theta * I.
    bool degenerate_range = false;
    /// Number of distinct theta values seen on the grid (capped at 3).
    size_t distinct_values = 0;
};

/// Builds the operator of a sphere function from coherent-state projectors:
/// raw = (1/N) sum theta(n) |n><n|, then an affine rescale so the two
/// eigenvalues equal the extremes of theta. When theta is two-valued on the
/// grid those extremes are its two values; otherwise they are `range` if
/// given, else the min and max of theta over the grid.
/// Throws GridTooCoarse below kMinOperatorGrid points.
CoherentOperator operator_from_coherent(
    const SphereFunction &theta, size_t grid_points, std::optional<ValueRange> range = std::nullopt);

/// Least-squares c minimizing ||a - c * target||_F.
double proportionality_constant(const ComplexMatrix &a, const ComplexMatrix &target);

/// Throws NotRotation unless r is orthogonal with det +1 within 1e-10.
void require_rotation(const Rotation3 &r);
Rotation3 rotation_about(const Direction &axis, double angle_radians);
Vec3 rotate(const Rotation3 &r, const Vec3 &v);
Direction rotate(const Rotation3 &r, const Direction &d);

/// SU(2) element T with T (n.sigma) T^dagger = (R n).sigma. `sign` selects
/// one of the two lifts (+1 or -1).
ComplexMatrix spin_rotation(const Rotation3 &r, int sign = +1);

/// || T^dagger A[theta] T - A[theta o R] ||_F with both operators built by
/// operator_from_coherent on the same grid. Throws NotRotation.
double conjugation_defect(
    const SphereFunction &theta,
    const Rotation3 &rotation,
    size_t grid_points,
    std::optional<ValueRange> range = std::nullopt,
    int lift_sign = +1);

}  // namespace bellsim

#endif
