#include "bellsim/born_rule.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bellsim/error.h"

namespace bellsim {

namespace {

constexpr double kDensityTol = 1e-10;

void require_finite(double x, const char *name) {
    if (!std::isfinite(x)) {
        throw BellError(ErrorKind::InvalidConfig, std::string("angle ") + name + " is not finite");
    }
}

void require_outcome(int x) {
    if (x != 1 && x != -1) {
        throw BellError(ErrorKind::BadOutcome, "outcome " + std::to_string(x) + " is not +1 or -1");
    }
}

double clamp_probability(double p) {
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double normalize_angle(double radians) {
    double r = std::fmod(radians, 2 * std::numbers::pi);
    if (r < 0) {
        r += 2 * std::numbers::pi;
    }
    if (r >= 2 * std::numbers::pi) {
        r = 0;
    }
    return r;
}

double degrees_to_radians(double degrees) {
    return degrees * std::numbers::pi / 180.0;
}

double radians_to_degrees(double radians) {
    return radians * 180.0 / std::numbers::pi;
}

AngleSettings::AngleSettings(double a, double a_prime, double b, double b_prime) {
    require_finite(a, "a");
    require_finite(a_prime, "a'");
    require_finite(b, "b");
    require_finite(b_prime, "b'");
    a_ = normalize_angle(a);
    a_prime_ = normalize_angle(a_prime);
    b_ = normalize_angle(b);
    b_prime_ = normalize_angle(b_prime);
}

AngleSettings AngleSettings::from_degrees(double a, double a_prime, double b, double b_prime) {
    return AngleSettings(
        degrees_to_radians(a), degrees_to_radians(a_prime), degrees_to_radians(b), degrees_to_radians(b_prime));
}

AngleSettings AngleSettings::tsirelson() {
    return from_degrees(0, 90, 225, 135);
}

AngleSettings AngleSettings::rotated(double delta) const {
    return AngleSettings(a_ + delta, a_prime_ + delta, b_ + delta, b_prime_ + delta);
}

double transition_probability(const StateVector &psi_a, const StateVector &psi_b) {
    return clamp_probability(std::norm(inner(psi_b, psi_a)));
}

double conditional_outcome_probability(int u, int v, double angle_ab) {
    require_outcome(u);
    require_outcome(v);
    return (1 - u * v * std::cos(angle_ab)) / 2;
}

double joint_outcome_probability(int u, int v, double angle_ab) {
    return conditional_outcome_probability(u, v, angle_ab) / 2;
}

double correlation_theory(double angle_ab) {
    return -std::cos(angle_ab);
}

double chsh_theory(const AngleSettings &s) {
    return correlation_theory(s.b() - s.a()) + correlation_theory(s.b_prime() - s.a()) +
           correlation_theory(s.b() - s.a_prime()) - correlation_theory(s.b_prime() - s.a_prime());
}

double prospect_probability(const StateVector &state, const StateVector &prospect) {
    return transition_probability(state, prospect);
}

void require_density(const ComplexMatrix &rho) {
    double violation = rho.hermiticity_violation();
    if (violation > kDensityTol) {
        throw BellError(ErrorKind::NotDensity, "matrix is not Hermitian");
    }
    Complex tr = rho.trace();
    if (std::abs(tr - Complex(1, 0)) > kDensityTol) {
        std::ostringstream msg;
        msg << "trace " << tr.real() << " differs from 1";
        throw BellError(ErrorKind::NotDensity, msg.str());
    }
    auto eig = hermitian_eigen(rho, kDensityTol);
    if (eig.eigenvalues.front() < -kDensityTol) {
        std::ostringstream msg;
        msg << "negative eigenvalue " << eig.eigenvalues.front();
        throw BellError(ErrorKind::NotDensity, msg.str());
    }
}

double prospect_probability(const ComplexMatrix &rho, const StateVector &prospect) {
    if (rho.dim() != prospect.dim()) {
        throw BellError(ErrorKind::DimensionMismatch, "density matrix and prospect dimensions differ");
    }
    require_density(rho);
    return clamp_probability(expectation(rho, prospect).real());
}

}  // namespace bellsim
