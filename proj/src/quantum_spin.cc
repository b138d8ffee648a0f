#include "bellsim/quantum_spin.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "bellsim/error.h"

namespace bellsim {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kRotationTol = 1e-10;

// Pairwise (cascade) summation of term(i) over [begin, end). Grid sums use
// this so that results do not depend on how a range is partitioned.
ComplexMatrix pairwise_sum(size_t begin, size_t end, const std::function<ComplexMatrix(size_t)> &term, size_t dim) {
    if (end - begin <= 32) {
        ComplexMatrix acc(dim);
        for (size_t i = begin; i < end; i++) {
            acc += term(i);
        }
        return acc;
    }
    size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(begin, mid, term, dim) + pairwise_sum(mid, end, term, dim);
}

void require_grid(size_t points, size_t minimum) {
    if (points < minimum) {
        throw BellError(
            ErrorKind::GridTooCoarse,
            "grid of " + std::to_string(points) + " points is below the minimum of " + std::to_string(minimum));
    }
}

}  // namespace

double dot(const Vec3 &a, const Vec3 &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Direction Direction::from_vector(const Vec3 &v) {
    double n = std::sqrt(bellsim::dot(v, v));
    if (!(std::abs(n - 1) <= kUnitTol)) {
        std::ostringstream msg;
        msg << "direction has norm " << std::setprecision(17) << n;
        throw BellError(ErrorKind::NotUnit, msg.str());
    }
    return Direction(v);
}

Direction Direction::normalized(const Vec3 &v) {
    double n = std::sqrt(bellsim::dot(v, v));
    if (!(n > 0) || !std::isfinite(n)) {
        throw BellError(ErrorKind::NotUnit, "cannot normalize a zero or non-finite vector");
    }
    return Direction({v[0] / n, v[1] / n, v[2] / n});
}

Direction Direction::planar(double angle) {
    return Direction({std::sin(angle), 0.0, std::cos(angle)});
}

Direction Direction::x_axis() {
    return Direction({1, 0, 0});
}

Direction Direction::y_axis() {
    return Direction({0, 1, 0});
}

Direction Direction::z_axis() {
    return Direction({0, 0, 1});
}

Direction Direction::operator-() const {
    return Direction({-v_[0], -v_[1], -v_[2]});
}

double Direction::dot(const Direction &other) const {
    return bellsim::dot(v_, other.v_);
}

ComplexMatrix spin_operator(const Direction &n) {
    return {
        {n.z(), Complex(n.x(), -n.y())},
        {Complex(n.x(), n.y()), -n.z()},
    };
}

StateVector singlet_state() {
    const double h = std::numbers::sqrt2 / 2;
    return StateVector({0.0, h, -h, 0.0});
}

ComplexMatrix spin_dot_operator() {
    return tensor(pauli::x(), pauli::x()) + tensor(pauli::y(), pauli::y()) + tensor(pauli::z(), pauli::z());
}

StateVector coherent_state(const Direction &n) {
    // (1 + z, x + iy) and (x - iy, 1 - z) both span the +1 eigenspace; use
    // the one that stays well conditioned away from its pole.
    std::vector<Complex> v;
    if (n.z() >= 0) {
        v = {1 + n.z(), Complex(n.x(), n.y())};
    } else {
        v = {Complex(n.x(), -n.y()), 1 - n.z()};
    }
    double len = norm(v);
    for (auto &c : v) {
        c /= len;
    }
    double mag = std::abs(v[0]);
    if (mag > 0) {
        Complex phase = std::conj(v[0]) / mag;
        v[0] = mag;
        v[1] *= phase;
    } else {
        v[1] = 1;
    }
    return StateVector::normalized(std::move(v));
}

std::vector<Direction> fibonacci_sphere(size_t points) {
    std::vector<Direction> out;
    out.reserve(points);
    const double golden_angle = std::numbers::pi * (3 - std::sqrt(5.0));
    for (size_t i = 0; i < points; i++) {
        double z = 1 - (2.0 * i + 1) / static_cast<double>(points);
        double r = std::sqrt(std::max(0.0, 1 - z * z));
        double phi = golden_angle * static_cast<double>(i);
        out.push_back(Direction::normalized({r * std::cos(phi), r * std::sin(phi), z}));
    }
    return out;
}

double resolution_of_identity_defect(std::span<const Direction> grid) {
    if (grid.empty()) {
        throw BellError(ErrorKind::GridTooCoarse, "empty grid");
    }
    auto total = pairwise_sum(
        0,
        grid.size(),
        [&](size_t i) {
            return coherent_state(grid[i]).projector();
        },
        2);
    total *= 2.0 / static_cast<double>(grid.size());
    return frobenius_distance(total, ComplexMatrix::identity(2));
}

double resolution_of_identity_defect(size_t grid_points) {
    require_grid(grid_points, kMinIdentityGrid);
    auto grid = fibonacci_sphere(grid_points);
    return resolution_of_identity_defect(grid);
}

CoherentOperator operator_from_coherent(const SphereFunction &theta, size_t grid_points, std::optional<ValueRange> range) {
    require_grid(grid_points, kMinOperatorGrid);
    auto grid = fibonacci_sphere(grid_points);
    std::vector<double> values(grid.size());
    for (size_t i = 0; i < grid.size(); i++) {
        values[i] = theta(grid[i]);
    }

    CoherentOperator out{ComplexMatrix(2), ComplexMatrix(2), {0, 0}};
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    auto same = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    if (same(lo, hi)) {
        out.distinct_values = 1;
    } else {
        out.distinct_values = 2;
        for (double v : values) {
            if (!same(v, lo) && !same(v, hi)) {
                out.distinct_values = 3;
                break;
            }
        }
    }

    out.raw = pairwise_sum(
        0,
        grid.size(),
        [&](size_t i) {
            return values[i] * coherent_state(grid[i]).projector();
        },
        2);
    out.raw *= 1.0 / static_cast<double>(grid.size());

    if (out.distinct_values == 1) {
        out.range = {lo, lo};
        out.degenerate_range = true;
        out.matrix = lo * ComplexMatrix::identity(2);
        return out;
    }
    out.range = (out.distinct_values == 2 || !range.has_value()) ? ValueRange{lo, hi} : *range;

    auto eig = hermitian_eigen(out.raw);
    double spread = eig.eigenvalues[1] - eig.eigenvalues[0];
    if (spread < 1e-14) {
        // theta varies but its operator is a multiple of the identity.
        out.degenerate_range = true;
        out.matrix = out.raw;
        return out;
    }
    double scale = (out.range.high - out.range.low) / spread;
    out.matrix = out.range.low * ComplexMatrix::identity(2) +
                 scale * (out.raw - eig.eigenvalues[0] * ComplexMatrix::identity(2));
    return out;
}

double proportionality_constant(const ComplexMatrix &a, const ComplexMatrix &target) {
    double denom = std::pow(frobenius_norm(target), 2);
    if (denom == 0) {
        throw BellError(ErrorKind::DimensionMismatch, "proportionality to the zero matrix is undefined");
    }
    auto ta = target.adjoint() * a;
    return ta.trace().real() / denom;
}

void require_rotation(const Rotation3 &r) {
    double worst = 0;
    for (size_t i = 0; i < 3; i++) {
        for (size_t j = 0; j < 3; j++) {
            double s = 0;
            for (size_t k = 0; k < 3; k++) {
                s += r[k][i] * r[k][j];
            }
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                 r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if (!(worst <= kRotationTol) || !(std::abs(det - 1) <= kRotationTol)) {
        std::ostringstream msg;
        msg << "matrix is not a proper rotation (orthogonality error " << worst << ", determinant " << det << ")";
        throw BellError(ErrorKind::NotRotation, msg.str());
    }
}

Rotation3 rotation_about(const Direction &axis, double angle) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    double t = 1 - c;
    double x = axis.x();
    double y = axis.y();
    double z = axis.z();
    return {{
        {t * x * x + c, t * x * y - s * z, t * x * z + s * y},
        {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
        {t * x * z - s * y, t * y * z + s * x, t * z * z + c},
    }};
}

Vec3 rotate(const Rotation3 &r, const Vec3 &v) {
    return {dot(r[0], v), dot(r[1], v), dot(r[2], v)};
}

Direction rotate(const Rotation3 &r, const Direction &d) {
    return Direction::normalized(rotate(r, d.vec()));
}

ComplexMatrix spin_rotation(const Rotation3 &r, int sign) {
    require_rotation(r);
    // Rotation matrix -> unit quaternion (w, x, y, z), branch on the largest
    // diagonal term for stability near half turns.
    double w, x, y, z;
    double tr = r[0][0] + r[1][1] + r[2][2];
    if (tr > 0) {
        double s = 2 * std::sqrt(tr + 1);
        w = s / 4;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if (r[0][0] > r[1][1] && r[0][0] > r[2][2]) {
        double s = 2 * std::sqrt(1 + r[0][0] - r[1][1] - r[2][2]);
        w = (r[2][1] - r[1][2]) / s;
        x = s / 4;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if (r[1][1] > r[2][2]) {
        double s = 2 * std::sqrt(1 + r[1][1] - r[0][0] - r[2][2]);
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = s / 4;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        double s = 2 * std::sqrt(1 + r[2][2] - r[0][0] - r[1][1]);
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = s / 4;
    }
    const Complex minus_i(0, -1);
    auto u = w * pauli::identity() + minus_i * (x * pauli::x() + y * pauli::y() + z * pauli::z());
    if (sign < 0) {
        u *= -1.0;
    }
    return u;
}

double conjugation_defect(
    const SphereFunction &theta,
    const Rotation3 &rotation,
    size_t grid_points,
    std::optional<ValueRange> range,
    int lift_sign) {
    require_rotation(rotation);
    auto t = spin_rotation(rotation, lift_sign);
    auto base = operator_from_coherent(theta, grid_points, range);
    SphereFunction rotated = [&](const Direction &n) {
        return theta(rotate(rotation, n));
    };
    auto moved = operator_from_coherent(rotated, grid_points, range);
    return frobenius_distance(t.adjoint() * base.matrix * t, moved.matrix);
}

}  // namespace bellsim
