#include "dimerwave/symmetry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dimerwave/errors.hpp"

namespace dimerwave {

namespace {

constexpr double kClassifyTol = 1e-8;
constexpr double kBasisTol = 1e-12;
constexpr double kDegenerateTol = 1e-10;

bool forces_equal(const Polynomial& a, const Polynomial& b) {
    int d = std::max(a.degree(), b.degree());
    for (int i = 0; i <= d; ++i)
        if (a.coeff(i) != b.coeff(i)) return false;
    return true;
}

void require_symmetric_material(SymmetryOp op, const Material& mat) {
    if (op.kind == SymmetryKind::mass) {
        if (!forces_equal(mat.force1, mat.force2))
            throw DomainError("mass-dimer symmetry requires identical spring forces");
    } else {
        if (mat.m != 1.0)
            throw DomainError("spring-dimer symmetry requires identical masses (m = 1)");
    }
}

}  // namespace

PeriodicField apply_symmetry(SymmetryOp op, const PeriodicField& f) {
    PeriodicField out(f.truncation());
    for (int k = 0; k <= f.truncation(); ++k) {
        Vec2c v = f.coeff(k).conjugate();  // reflection: fhat(k) -> fhat(-k)
        if (op.kind == SymmetryKind::spring) std::swap(v(0), v(1));
        out.set_coeff(k, -v);
    }
    return out;
}

InvarianceReport check_invariance(SymmetryOp op, const WaveProblem& p, const PeriodicField& phi,
                                  double omega) {
    require_symmetric_material(op, p.material);
    InvarianceReport rep;
    PeriodicField s_phi = apply_symmetry(op, phi);
    rep.operator_defect =
        l2_norm(phi_op(p, s_phi, omega) - apply_symmetry(op, phi_op(p, phi, omega)));
    rep.energy_defect = std::abs(energy(p, s_phi, omega).total - energy(p, phi, omega).total);
    return rep;
}

SymmetricBasis symmetric_basis(SymmetryOp op, const LinearData& data) {
    require_symmetric_material(op, data.material);
    SymmetricBasis out;
    PeriodicField s_nu1 = apply_symmetry(op, data.nu1);
    double d_fixed = l2_norm(s_nu1 - data.nu1);
    double d_anti = l2_norm(s_nu1 + data.nu1);

    if (d_fixed < kClassifyTol) {
        out.classification = KernelSymmetryClass::fixed;
        out.nu_plus = data.nu1;
        out.nu_minus = data.nu2;
    } else if (d_anti < kClassifyTol) {
        out.classification = KernelSymmetryClass::anti;
        out.nu_plus = data.nu2;
        out.nu_minus = data.nu1;
    } else {
        out.classification = KernelSymmetryClass::generic;
        PeriodicField plus = data.nu1 + s_nu1;
        PeriodicField minus = data.nu2 - apply_symmetry(op, data.nu2);
        double np = l2_norm(plus), nm = l2_norm(minus);
        if (np < kDegenerateTol || nm < kDegenerateTol)
            throw InternalError("symmetric_basis: degenerate norm in the generic case");
        out.nu_plus = (1.0 / np) * plus;
        out.nu_minus = (1.0 / nm) * minus;
    }

    // Certify the construction.
    if (l2_norm(apply_symmetry(op, out.nu_plus) - out.nu_plus) > kBasisTol)
        throw InternalError("symmetric_basis: S nu+ != nu+");
    if (l2_norm(apply_symmetry(op, out.nu_minus) + out.nu_minus) > kBasisTol)
        throw InternalError("symmetric_basis: S nu- != -nu-");
    if (std::abs(inner_product(out.nu_plus, out.nu_minus)) > kBasisTol)
        throw InternalError("symmetric_basis: nu+ and nu- not orthogonal");
    MultiplierSymbol Lp = data.op_L_prime();
    double t_plus = inner_product(apply_symbol(Lp, out.nu_plus), out.nu_plus);
    double t_one = inner_product(apply_symbol(Lp, data.nu1), data.nu1);
    if (std::abs(t_plus - t_one) > 1e-10 * std::max(1.0, std::abs(t_one)))
        throw InternalError("symmetric_basis: <L' nu+, nu+> != <L' nu1, nu1>");
    return out;
}

AlignedDefect check_solution_symmetry(SymmetryOp op, const PeriodicField& phi) {
    auto defect_at = [&](double theta) {
        PeriodicField shifted = shift(phi, theta);
        return l2_norm(apply_symmetry(op, shifted) - shifted);
    };

    const int coarse = 512;
    AlignedDefect best;
    best.defect = std::numeric_limits<double>::infinity();
    const double two_pi = 2.0 * std::numbers::pi_v<double>;
    for (int i = 0; i < coarse; ++i) {
        double theta = two_pi * i / coarse;
        double d = defect_at(theta);
        if (d < best.defect) {
            best.defect = d;
            best.theta = theta;
        }
    }

    // Golden-section refinement on the bracketing coarse interval.
    double lo = best.theta - two_pi / coarse;
    double hi = best.theta + two_pi / coarse;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = defect_at(x1);
    double f2 = defect_at(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = defect_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = defect_at(x2);
        }
    }
    double theta = 0.5 * (lo + hi);
    double d = defect_at(theta);
    if (d < best.defect) {
        best.defect = d;
        best.theta = theta;
    }
    return best;
}

}  // namespace dimerwave
