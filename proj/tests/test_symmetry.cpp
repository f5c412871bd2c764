#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dimerwave/errors.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/solver.hpp"
#include "dimerwave/symmetry.hpp"

using namespace dimerwave;

namespace {

const double kPi = std::numbers::pi_v<double>;

PeriodicField random_field(Rng& rng, int n, double amp = 1.0) {
    PeriodicField f(n);
    f.set_coeff(0, Vec2c(Complex(amp * rng.normal(), 0.0), Complex(amp * rng.normal(), 0.0)));
    for (int k = 1; k <= n; ++k) {
        double w = amp * std::exp(-0.3 * k);
        f.set_coeff(k, Vec2c(Complex(w * rng.normal(), w * rng.normal()),
                             Complex(w * rng.normal(), w * rng.normal())));
    }
    return f;
}

}  // namespace

TEST_CASE("symmetries are involutions, self-adjoint, and anti-commute with d/dx") {
    Rng rng(41);
    for (SymmetryKind kind : {SymmetryKind::mass, SymmetryKind::spring}) {
        SymmetryOp op{kind};
        PeriodicField f = random_field(rng, 16);
        PeriodicField g = random_field(rng, 16);

        PeriodicField twice = apply_symmetry(op, apply_symmetry(op, f));
        for (int k = 0; k <= 16; ++k) {
            CHECK(twice.coeff(k)(0) == f.coeff(k)(0));  // bit-exact
            CHECK(twice.coeff(k)(1) == f.coeff(k)(1));
        }

        CHECK(std::abs(inner_product(apply_symmetry(op, f), g) -
                       inner_product(f, apply_symmetry(op, g))) < 1e-13);

        PeriodicField anti = derivative(apply_symmetry(op, f), 1) +
                             apply_symmetry(op, derivative(f, 1));
        CHECK(l2_norm(anti) < 1e-13);
    }
}

TEST_CASE("mass dimer kernel: S nu1 = -nu1 and S nu2 = nu2") {
    // kappa=1 makes mu real, so nu1 is cosine-type and nu2 sine-type;
    // S = -R then fixes nu2 and negates nu1.
    Material mat = Material::dimer(0.5, 1.0, 1.0);
    LinearData d = kernel_basis(mat, std::sqrt(2.0), 16);
    SymmetryOp op{SymmetryKind::mass};
    CHECK(l2_norm(apply_symmetry(op, d.nu1) + d.nu1) < 1e-14);
    CHECK(l2_norm(apply_symmetry(op, d.nu2) - d.nu2) < 1e-14);
}

TEST_CASE("S nu1 = +-nu1 iff S nu2 = -+nu2") {
    struct Case {
        Material mat;
        SymmetryKind kind;
    };
    Case cases[] = {{Material::dimer(0.5, 1.0, 1.0), SymmetryKind::mass},
                    {Material::dimer(1.0, 2.0, 1.0), SymmetryKind::spring}};
    for (const Case& c : cases) {
        LinearData d = kernel_basis(c.mat, std::sqrt(2.0), 16);
        SymmetryOp op{c.kind};
        double fix1 = l2_norm(apply_symmetry(op, d.nu1) - d.nu1);
        double anti1 = l2_norm(apply_symmetry(op, d.nu1) + d.nu1);
        double fix2 = l2_norm(apply_symmetry(op, d.nu2) - d.nu2);
        double anti2 = l2_norm(apply_symmetry(op, d.nu2) + d.nu2);
        if (fix1 < 1e-12) CHECK(anti2 < 1e-12);
        if (anti1 < 1e-12) CHECK(fix2 < 1e-12);
        if (fix2 < 1e-12) CHECK(anti1 < 1e-12);
        if (anti2 < 1e-12) CHECK(fix1 < 1e-12);
    }
}

TEST_CASE("operator and energy invariance for matching materials") {
    Rng rng(42);

    Material mass_mat = Material::dimer(0.5, 1.0, 1.0);
    WaveProblem mp = WaveProblem::make(mass_mat, std::sqrt(2.0), 20);
    PeriodicField phi = random_field(rng, 20, 0.3);
    InvarianceReport mr = check_invariance(SymmetryOp{SymmetryKind::mass}, mp, phi, 1.3);
    CHECK(mr.operator_defect < 1e-11);
    CHECK(mr.energy_defect < 1e-11);

    Material spring_mat = Material::dimer(1.0, 2.0, 1.0);
    WaveProblem sp = WaveProblem::make(spring_mat, std::sqrt(2.0), 20);
    PeriodicField phi2 = random_field(rng, 20, 0.3);
    InvarianceReport sr = check_invariance(SymmetryOp{SymmetryKind::spring}, sp, phi2, 1.7);
    CHECK(sr.operator_defect < 1e-11);
    CHECK(sr.energy_defect < 1e-11);

    // A general dimer (both heterogeneities) possesses neither symmetry.
    Material general = Material::dimer(0.5, 2.0, 1.0);
    WaveProblem gp = WaveProblem::make(general, std::sqrt(2.0), 20);
    CHECK_THROWS_AS(check_invariance(SymmetryOp{SymmetryKind::mass}, gp, phi, 1.3), DomainError);
    CHECK_THROWS_AS(check_invariance(SymmetryOp{SymmetryKind::spring}, gp, phi, 1.3), DomainError);

    // kappa = 1 with different quadratic coefficients is not a mass dimer.
    Material near_mass = Material::dimer(0.5, 1.0, 0.7);
    WaveProblem np = WaveProblem::make(near_mass, std::sqrt(2.0), 20);
    CHECK_THROWS_AS(check_invariance(SymmetryOp{SymmetryKind::mass}, np, phi, 1.3), DomainError);
}

TEST_CASE("symmetric basis rejects materials without the symmetry") {
    Material general = Material::dimer(0.5, 2.0, 1.0);
    LinearData gd = kernel_basis(general, std::sqrt(2.0), 16);
    CHECK_THROWS_AS(symmetric_basis(SymmetryOp{SymmetryKind::mass}, gd), DomainError);
    CHECK_THROWS_AS(symmetric_basis(SymmetryOp{SymmetryKind::spring}, gd), DomainError);
}

TEST_CASE("symmetric basis in the three cases") {
    // Mass dimer: anti case, so (nu+, nu-) = (nu2, nu1).
    Material mass_mat = Material::dimer(0.5, 1.0, 1.0);
    LinearData md = kernel_basis(mass_mat, std::sqrt(2.0), 16);
    SymmetricBasis mb = symmetric_basis(SymmetryOp{SymmetryKind::mass}, md);
    CHECK(mb.classification == KernelSymmetryClass::anti);
    CHECK(l2_norm(mb.nu_plus - md.nu2) < 1e-14);
    CHECK(l2_norm(mb.nu_minus - md.nu1) < 1e-14);

    // Spring dimer at a generic speed: genuinely mixed case.
    Material spring_mat = Material::dimer(1.0, 2.0, 1.0);
    LinearData sd = kernel_basis(spring_mat, std::sqrt(2.0), 16);
    SymmetryOp sop{SymmetryKind::spring};
    CHECK(l2_norm(apply_symmetry(sop, sd.nu1) - sd.nu1) > 1e-6);
    CHECK(l2_norm(apply_symmetry(sop, sd.nu1) + sd.nu1) > 1e-6);
    SymmetricBasis sb = symmetric_basis(sop, sd);
    CHECK(sb.classification == KernelSymmetryClass::generic);
    CHECK(l2_norm(apply_symmetry(sop, sb.nu_plus) - sb.nu_plus) < 1e-12);
    CHECK(l2_norm(apply_symmetry(sop, sb.nu_minus) + sb.nu_minus) < 1e-12);
    CHECK(std::abs(inner_product(sb.nu_plus, sb.nu_minus)) < 1e-12);
    CHECK(std::abs(l2_norm(sb.nu_plus) - 1.0) < 1e-13);
    CHECK(std::abs(l2_norm(sb.nu_minus) - 1.0) < 1e-13);

    // Span check: nu1 and nu2 are reproduced by their (nu+, nu-) projections.
    for (const PeriodicField* nu : {&sd.nu1, &sd.nu2}) {
        PeriodicField proj = inner_product(*nu, sb.nu_plus) * sb.nu_plus;
        proj += inner_product(*nu, sb.nu_minus) * sb.nu_minus;
        CHECK(l2_norm(proj.retruncated(nu->truncation()) - *nu) < 1e-12);
    }

    // Spring dimer tuned so omega_c = pi exactly: S nu1 = -nu1 at odd
    // multiples of pi.
    double kappa = 8.0;
    Material tuned = Material::dimer(1.0, kappa, 1.0);
    double c = std::sqrt(2.0 * (1.0 + kappa)) / kPi;
    CHECK(c > speed_of_sound(tuned));
    LinearData td = kernel_basis(tuned, c, 16);
    CHECK(std::abs(td.omega_c - kPi) < 1e-8);
    SymmetricBasis tb = symmetric_basis(sop, td);
    CHECK(tb.classification == KernelSymmetryClass::anti);
}

TEST_CASE("phase-aligned defect of solved symmetric waves") {
    Material mass_mat = Material::dimer(0.5, 1.0, 1.0);
    WaveProblem p = WaveProblem::make(mass_mat, std::sqrt(2.0), 32);
    LinearData d = kernel_basis(mass_mat, std::sqrt(2.0), 32);
    SolverConfig cfg;
    cfg.truncation = 32;
    BranchPoint pt = solve_point(p, d, 1e-3, cfg);
    PeriodicField phi = pt.assemble_phi(d);

    SymmetryOp op{SymmetryKind::mass};
    AlignedDefect ad = check_solution_symmetry(op, phi);
    CHECK(ad.defect < 1e-9);

    // Shifting the wave does not change the minimal defect.
    AlignedDefect ad2 = check_solution_symmetry(op, shift(phi, 1.234));
    CHECK(std::abs(ad2.defect - ad.defect) < 1e-11);
}

TEST_CASE("spring dimer defect at generic frequency is recorded, not asserted") {
    Material spring_mat = Material::dimer(1.0, 2.0, 1.0);
    WaveProblem p = WaveProblem::make(spring_mat, std::sqrt(2.0), 32);
    LinearData d = kernel_basis(spring_mat, std::sqrt(2.0), 32);
    SolverConfig cfg;
    cfg.truncation = 32;
    BranchPoint pt = solve_point(p, d, 1e-3, cfg);
    AlignedDefect ad =
        check_solution_symmetry(SymmetryOp{SymmetryKind::spring}, pt.assemble_phi(d));
    CHECK(std::isfinite(ad.defect));
    CHECK(ad.defect >= 0.0);
}
