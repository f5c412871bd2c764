#pragma once

#include <utility>
#include <vector>

#include "dimerwave/field.hpp"
#include "dimerwave/material.hpp"

namespace dimerwave {

/// A traveling-wave problem instance: material, supersonic speed, and the
/// spectral discretization (truncation N, dealiasing grid G).
struct WaveProblem {
    Material material;
    double c = 0.0;
    int truncation = 64;
    int grid = 256;

    /// Validates material hypotheses, |c| > c_star, and the dealiasing
    /// bound G >= (maxdeg+1)N + 1.  grid = 0 picks max(4N, (maxdeg+1)N+1).
    static WaveProblem make(const Material& mat, double c, int truncation, int grid = 0);
};

/// Difference stencils: (D+ f) = (-f1 + S^w f2, f1 - S^{-w} f2) and
/// (D- f) = (f1 - f2, -S^{-w} f1 + S^w f2); adjoints of one another up to sign.
PeriodicField delta_plus(const PeriodicField& f, double omega);
PeriodicField delta_minus(const PeriodicField& f, double omega);

/// The traveling-wave operator c^2 w^2 M phi'' - D-(w) V'(D+(w) phi),
/// evaluated pseudospectrally with exact dealiasing and truncated to N.
PeriodicField phi_op(const WaveProblem& p, const PeriodicField& phi, double omega);
/// Same operator assembled from the componentwise definition (four separate
/// force evaluations); used to cross-check the stencil path.
PeriodicField phi_op_direct(const WaveProblem& p, const PeriodicField& phi, double omega);
/// Untruncated evaluation (all modes of the nonlinearity retained).
PeriodicField phi_op_full(const WaveProblem& p, const PeriodicField& phi, double omega);

struct EnergyBreakdown {
    double kinetic = 0.0;    // T = (w^2/2) <M phi'', phi>
    double potential = 0.0;  // P = <V(D+ phi), (1,1)>
    double total = 0.0;      // G_c = c^2 T + P
};
EnergyBreakdown energy(const WaveProblem& p, const PeriodicField& phi, double omega);

/// Grid trace of the first integral along x, with its advance-delay part.
struct FirstIntegralTrace {
    std::vector<double> x;
    std::vector<double> values;
    std::vector<double> advance_delay;
    double max_variation = 0.0;    // max - min over the grid
    double total_variation = 0.0;  // sum |J(x_{j+1}) - J(x_j)|
    double pairing_residual = 0.0; // |<Phi, phi'> - quadrature of dJ/dx|
    double pointwise_defect = 0.0; // max |Phi . phi' - dJ/dx| on the grid
};

/// Evaluates the first integral, with the advance-delay term computed by
/// spectral antidifferentiation of the mean-removed integrands plus the
/// -w * mean contribution.  Verifies the pairing identity to 1e-9.
FirstIntegralTrace first_integral(const WaveProblem& p, const PeriodicField& phi, double omega);

/// One lattice sample: particle index and time.
using LatticeSample = std::pair<long long, double>;

/// Reconstructs u_j(t) from the profile (odd particles from component 1,
/// even from component 2) and returns the maximum Newton-law residual
/// |m_j u_j'' - V_j'(u_{j+1} - u_j) + V_{j-1}'(u_j - u_{j-1})| over the samples.
double lattice_residual(const WaveProblem& p, const PeriodicField& phi, double omega,
                        const std::vector<LatticeSample>& samples);

}  // namespace dimerwave
