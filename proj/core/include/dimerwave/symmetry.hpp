#pragma once

#include "dimerwave/linear.hpp"
#include "dimerwave/wave_operator.hpp"

namespace dimerwave {

/// The two dimer symmetries, built from reflection (R f)(x) = f(-x) and the
/// component flip J: mass dimers (equal springs) carry S = -R, spring dimers
/// (equal masses) carry S = -RJ.  Both are involutions, self-adjoint, and
/// anti-commute with d/dx.
enum class SymmetryKind { mass, spring };

struct SymmetryOp {
    SymmetryKind kind = SymmetryKind::mass;
};

PeriodicField apply_symmetry(SymmetryOp op, const PeriodicField& f);

struct InvarianceReport {
    double operator_defect = 0.0;  // |Phi(S phi, w) - S Phi(phi, w)|
    double energy_defect = 0.0;    // |G(S phi, w) - G(phi, w)|
};

/// Requires the material to actually possess the symmetry (mass: identical
/// springs; spring: identical masses); DomainError otherwise.
InvarianceReport check_invariance(SymmetryOp op, const WaveProblem& p, const PeriodicField& phi,
                                  double omega);

enum class KernelSymmetryClass { fixed, anti, generic };

struct SymmetricBasis {
    PeriodicField nu_plus;   // S nu+ = +nu+
    PeriodicField nu_minus;  // S nu- = -nu-
    KernelSymmetryClass classification = KernelSymmetryClass::generic;
};

/// Adapts (nu1, nu2) to the symmetry: (nu1, nu2) if S nu1 = nu1,
/// (nu2, nu1) if S nu1 = -nu1, else the normalized combinations
/// (nu1 + S nu1, nu2 - S nu2).  Certifies the basis invariants.
SymmetricBasis symmetric_basis(SymmetryOp op, const LinearData& data);

struct AlignedDefect {
    double defect = 0.0;  // min over theta of |S(S^theta phi) - S^theta phi|
    double theta = 0.0;
};

/// Phase-aligned symmetry defect: coarse scan over 512 phases followed by
/// golden-section refinement.
AlignedDefect check_solution_symmetry(SymmetryOp op, const PeriodicField& phi);

}  // namespace dimerwave
