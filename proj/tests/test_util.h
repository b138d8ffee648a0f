#ifndef BELLSIM_TEST_UTIL_H
#define BELLSIM_TEST_UTIL_H

#include <cmath>
#include <numbers>
#include <random>

#include "bellsim/linalg.h"
#include "bellsim/quantum_spin.h"

namespace bellsim::fixtures {

inline ComplexMatrix random_matrix(std::mt19937_64 &rng, size_t dim) {
    std::normal_distribution<double> g;
    ComplexMatrix m(dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64 &rng, size_t dim) {
    auto m = random_matrix(rng, dim);
    return 0.5 * (m + m.adjoint());
}

inline Direction random_direction(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return Direction::normalized({g(rng), g(rng), g(rng)});
}

inline Rotation3 random_rotation(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    return rotation_about(random_direction(rng), angle(rng));
}

/// |<u|v>| for raw amplitude vectors.
inline double overlap(std::span<const Complex> u, std::span<const Complex> v) {
    return std::abs(inner(u, v));
}

}  // namespace bellsim::fixtures

#endif
