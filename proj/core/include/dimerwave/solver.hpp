#pragma once

#include <optional>
#include <vector>

#include "dimerwave/linear.hpp"
#include "dimerwave/wave_operator.hpp"

namespace dimerwave {

enum class SolverMode { fixed_point, lyapunov_center };

struct SolverConfig {
    SolverMode mode = SolverMode::fixed_point;
    int truncation = 64;
    int grid = 0;                  // 0 -> problem default
    double tol_increment = 1e-12;  // H^2 increment at which iteration stops
    int max_iter = 200;
    double relaxation = 1.0;       // under-relaxation factor in (0, 1]
    double amplitude_cap = 0.0;    // 0 -> heuristic cap
    double residual_tol = 1e-10;   // |Phi| certification at convergence
    std::vector<double> amplitudes;
};

/// One solved wave: phi = a (nu1 + psi), omega = omega_c + a xi.
struct BranchPoint {
    double a = 0.0;
    double omega = 0.0;
    double xi = 0.0;     // (omega - omega_c) / a; 0 at a = 0
    double gamma = 0.0;  // Lyapunov-center multiplier; 0 in fixed-point mode
    PeriodicField psi;
    double phi_residual = 0.0;        // |Phi(a(nu1+psi), omega)|_{L^2}
    double kernel_ortho_defect = 0.0; // max_i |<psi, nu_i>|
    double nu2_pairing = 0.0;         // <Phi, nu2>, closed by derivative orthogonality
    int iterations = 0;
    bool converged = false;

    PeriodicField assemble_phi(const LinearData& data) const;
};

struct Branch {
    LinearData linear;
    std::vector<BranchPoint> points;
    bool truncated = false;        // stopped at first non-convergence
    double psi_lipschitz = 0.0;    // sup over adjacent pairs of |psi_a - psi_a'|_{H^2}/|a-a'|
    double xi_lipschitz = 0.0;     // same for the total frequency shift
    double sup_psi_h2 = 0.0;
    double sup_abs_xi = 0.0;
};

struct LongWaveParams {
    double epsilon = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    double a = 0.0;       // alpha * epsilon^2
    double Omega = 0.0;   // omega / epsilon
    double profile_sup = 0.0;        // |phi|_{C^0}
    double profile_deriv_sup = 0.0;  // |d^2 phi / dx^2|_{C^0}
};

struct LongWaveBranch {
    double epsilon = 0.0;
    Branch branch;
    std::vector<LongWaveParams> params;
    double freq_lipschitz = 0.0;  // max adjacent |Omega^a - Omega^a'| / |alpha - alpha'|
};

/// Orthogonal projection onto span(nu1, nu2).
PeriodicField project_kernel(const LinearData& data, const PeriodicField& eta);
/// (I - Pi) with the nu0 component removed as well.
PeriodicField project_complement(const LinearData& data, const PeriodicField& eta);

/// Remainder of the amplitude-divided expansion:
///   R(psi, xi, a) = L psi + xi L' nu1 - Phi(a(nu1+psi), omega_c+xi)/a,
/// with the analytic a -> 0 limit L psi + xi L' nu1 - L[omega_c+xi](nu1+psi).
PeriodicField remainder_R(const WaveProblem& p, const LinearData& data,
                          const PeriodicField& psi, double xi, double a);

/// One step of the projected contraction scheme:
///   psi+ = Linv (I-Pi)[R - (P R) L' nu1],   xi+ = P R(psi+, xi, a),
/// where P eta = <eta, nu1> / <L' nu1, nu1>.
std::pair<PeriodicField, double> fixed_point_step(const WaveProblem& p, const LinearData& data,
                                                  const PeriodicField& psi, double xi, double a);

/// Heuristic amplitude cap: 1e-2 |<L' nu1, nu1>| / |quadratic term on nu1|.
double amplitude_cap(const WaveProblem& p, const LinearData& data);

/// Iterates the contraction scheme (or its Lyapunov-center variant, which
/// carries the extra multiplier gamma and certifies gamma -> 0) until the
/// H^2 increment drops below tol.  Certifies the residual, the kernel
/// orthogonality of psi, and the automatic <Phi, nu2> closure.
BranchPoint solve_point(const WaveProblem& p, const LinearData& data, double a,
                        const SolverConfig& config, const BranchPoint* warm_start = nullptr);

/// Solves the amplitude grid with warm starts and Lipschitz diagnostics.
Branch solve_branch(const WaveProblem& p, const SolverConfig& config);

/// Long-wave sweep: c^2 = c_star^2 + eps^2, a = alpha eps^2, Omega = omega/eps.
std::vector<LongWaveBranch> longwave_branches(const Material& mat,
                                              const std::vector<double>& epsilons,
                                              const std::vector<double>& alphas,
                                              const SolverConfig& config);

/// Independent oracle: Newton's method on the bordered system
/// Phi(phi, omega) + gamma phi' = 0, <phi, nu1> = a, <phi, nu2> = 0,
/// with a dense mode-wise Jacobian.  Shares no code with the contraction path.
BranchPoint solve_point_newton(const WaveProblem& p, const LinearData& data, double a,
                               const SolverConfig& config,
                               const BranchPoint* initial = nullptr);

}  // namespace dimerwave
