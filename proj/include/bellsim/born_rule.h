#ifndef BELLSIM_BORN_RULE_H
#define BELLSIM_BORN_RULE_H

#include <string_view>

#include "bellsim/linalg.h"

namespace bellsim {

/// The four coplanar measurement angles, radians, normalized to [0, 2pi).
class AngleSettings {
   public:
    AngleSettings(double a, double a_prime, double b, double b_prime);
    static AngleSettings from_degrees(double a, double a_prime, double b, double b_prime);
    /// 0, 90, 225, 135 degrees: the settings that reach 2 sqrt 2.
    static AngleSettings tsirelson();

    double a() const noexcept {
        return a_;
    }
    double a_prime() const noexcept {
        return a_prime_;
    }
    double b() const noexcept {
        return b_;
    }
    double b_prime() const noexcept {
        return b_prime_;
    }
    /// Same settings with every angle shifted by `delta`.
    AngleSettings rotated(double delta) const;

    bool operator==(const AngleSettings &) const = default;

   private:
    double a_, a_prime_, b_, b_prime_;
};

double normalize_angle(double radians);
double degrees_to_radians(double degrees);
double radians_to_degrees(double radians);

/// Sign convention in force for the singlet conditional law.
inline constexpr std::string_view kSignConvention =
    "P(B=v|A=u) = (1 - u*v*cos(a,b))/2, which gives E(AB) = -cos(a,b)";

/// |<psi_b|psi_a>|^2. Throws DimensionMismatch.
double transition_probability(const StateVector &psi_a, const StateVector &psi_b);

/// (1 - u v cos(angle_ab)) / 2 for u, v in {-1, +1}.
double conditional_outcome_probability(int u, int v, double angle_ab);

/// Joint law of the singlet: (1 - u v cos(angle_ab)) / 4.
double joint_outcome_probability(int u, int v, double angle_ab);

/// -cos(angle_ab).
double correlation_theory(double angle_ab);

/// E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh_theory(const AngleSettings &s);

/// |<psi|prospect>|^2.
double prospect_probability(const StateVector &state, const StateVector &prospect);
/// <prospect|rho|prospect>. Throws NotDensity unless rho is Hermitian,
/// trace 1 and positive semidefinite (all within 1e-10).
double prospect_probability(const ComplexMatrix &rho, const StateVector &prospect);

void require_density(const ComplexMatrix &rho);

}  // namespace bellsim

#endif
