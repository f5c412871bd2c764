#pragma once

#include "dimerwave/field.hpp"
#include "dimerwave/material.hpp"

namespace dimerwave {

/// Symbol of the linear coupling operator D[omega] at K = omega*k.
Mat2c symbol_D(const Material& mat, double K);
/// Symbol of the traveling-wave linearization: L(K) = -c^2 K^2 M + D(K).
Mat2c symbol_L(const Material& mat, double c, double K);
/// Componentwise K-derivative of symbol_L.
Mat2c symbol_L_prime(const Material& mat, double c, double K);

struct DispersionPoint {
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double rho = 0.0;
};

/// Closed-form acoustic/optical branches of M^{-1} D(K).  Every call is
/// cross-checked against a direct eigendecomposition (InternalError on
/// disagreement beyond 1e-10 relative).
DispersionPoint dispersion(const Material& mat, double K);

/// sqrt(4 kappa w / ((1+kappa)(1+w))): the supersonic threshold.
double speed_of_sound(const Material& mat);

/// Unique K > 0 with c^2 K^2 = lambda_plus(K), for |c| > c_star.
/// Bisection on the guaranteed bracket, then Newton polish; the defining
/// residual is driven below 1e-13.
double critical_frequency(const Material& mat, double c);

/// Everything the linearization at speed c yields.
struct LinearData {
    Material material;
    double c = 0.0;
    double c_star = 0.0;
    double omega_c = 0.0;
    Vec2c mu;               // (e^{i w_c} + kappa e^{-i w_c}, 1 + kappa - c^2 w_c^2)
    double normalizer = 0.0;  // sqrt(2) |mu|_2, making |nu1| = 1
    PeriodicField nu0, nu1, nu2;
    double transversality = 0.0;      // <L' nu1, nu1> (closed form; sign-carrying)
    double lambda_plus_prime = 0.0;   // lambda_plus'(omega_c)
    // Intermediates of the closed-form transversality computation.
    double z1 = 0.0;   // -2 c^2 omega_c
    Complex z2;        // e^{i w_c} - kappa e^{-i w_c}
    Complex v1;        // e^{i w_c} + kappa e^{-i w_c}
    double v2 = 0.0;   // 1 + kappa - c^2 omega_c^2

    MultiplierSymbol op_L() const;        // symbol k -> L(omega_c k)
    MultiplierSymbol op_L_prime() const;  // symbol k -> k L'(omega_c k)
    MultiplierSymbol op_L_adjoint() const;  // L^2 -> H^2 adjoint, (1+k^2)^{-2} L(omega_c k)^*
};

/// Builds the kernel basis and certifies it: |L nu_i| < 1e-11, exact
/// orthonormality, nu2 = S^{-pi/2} nu1, and the mode-(+-1) orthogonality
/// equivalence.  Also cross-checks the transversality value two ways.
LinearData kernel_basis(const Material& mat, double c, int truncation);

struct TransversalityCheck {
    double numeric = 0.0;      // <L' nu1, nu1> via apply_symbol
    double closed_form = 0.0;  // (2 rho v2 / (w N^2)) (2 c^2 w_c - lambda_plus')
    double cross = 0.0;        // <L' nu1, nu2>, must vanish
    double nu2_nu2 = 0.0;      // <L' nu2, nu2>, must equal <L' nu1, nu1>
};

/// Computes the transversality pairing both ways; InternalError if the
/// numeric and closed-form values disagree beyond 1e-8 relative.
TransversalityCheck transversality(const LinearData& data);

/// Solves L[omega_c] psi = eta for the unique psi orthogonal to
/// {nu0, nu1, nu2}.  Requires eta orthogonal to the kernel within 1e-10
/// (DomainError otherwise); eta is re-projected before solving.  If
/// coercivity_out is non-null it receives |psi|_{H^2} / |eta|_{L^2}.
PeriodicField coercive_solve(const LinearData& data, const PeriodicField& eta,
                             double* coercivity_out = nullptr);

/// c-independent upper bound for the coercivity constant, assembled from
/// the per-mode estimates (k = 0, |k| = 1, |k| >= 2) with a factor-2 margin.
double coercivity_bound(const Material& mat);

}  // namespace dimerwave
