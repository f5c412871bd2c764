#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "dimerwave/errors.hpp"
#include "dimerwave/linear.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/solver.hpp"

using namespace dimerwave;

namespace {

const double kPi = std::numbers::pi_v<double>;
const Material kDefault = Material::dimer(1.0, 2.0, 1.0);

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

TEST_CASE("symbol_D basics") {
    Mat2c D0 = symbol_D(kDefault, 0.0);
    Vec2c ones(Complex(1.0, 0.0), Complex(1.0, 0.0));
    CHECK((D0 * ones).norm() < 1e-15);

    // D(K) is Hermitian for real K.
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        double K = rng.uniform(0.0, 2.0 * kPi);
        Mat2c D = symbol_D(kDefault, K);
        CHECK((D - D.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    }

    // kappa=2, w=1, K=pi/2: M^{-1} D = [[3, i], [-i, 3]] with eigenvalues {4, 2}.
    Mat2c Dh = symbol_D(kDefault, kPi / 2.0);
    CHECK(Dh(0, 0).real() == doctest::Approx(3.0));
    CHECK(Dh(0, 1).imag() == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::ComplexEigenSolver<Mat2c> es(Dh);
    double lo = std::min(es.eigenvalues()(0).real(), es.eigenvalues()(1).real());
    double hi = std::max(es.eigenvalues()(0).real(), es.eigenvalues()(1).real());
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dispersion closed forms") {
    DispersionPoint d = dispersion(kDefault, kPi / 2.0);
    CHECK(d.rho == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.lambda_plus == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d.lambda_minus == doctest::Approx(2.0).epsilon(1e-14));

    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        double kappa = rng.uniform(0.2, 5.0);
        double w = rng.uniform(0.2, 5.0);
        double K = rng.uniform(0.0, 2.0 * kPi);
        Material mat = Material::dimer(1.0 / w, kappa);
        DispersionPoint p = dispersion(mat, K);
        // Acoustic branch vanishes at K = 0.
        CHECK(std::abs(dispersion(mat, 0.0).lambda_minus) < 1e-12);
        // Trace identity.
        CHECK(p.lambda_plus + p.lambda_minus ==
              doctest::Approx((1.0 + kappa) * (1.0 + w)).epsilon(1e-12));
        // Determinant identity (the corrected characteristic-equation constant).
        double det = 4.0 * kappa * w * std::sin(K) * std::sin(K);
        CHECK(p.lambda_plus * p.lambda_minus ==
              doctest::Approx(det).epsilon(1e-10).scale(std::max(1.0, det)));
    }
}

TEST_CASE("speed of sound") {
    CHECK(speed_of_sound(kDefault) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(speed_of_sound(Material::dimer(1.0, 1.0)) == doctest::Approx(1.0));
    // Small-K limit oracle.
    double K = 1e-4;
    double cs = std::sqrt(dispersion(kDefault, K).lambda_minus) / K;
    CHECK(cs == doctest::Approx(speed_of_sound(kDefault)).epsilon(1e-6));
}

TEST_CASE("critical frequency") {
    double c = std::sqrt(2.0);
    double wc = critical_frequency(kDefault, c);

    // Independent bisection oracle on 2 K^2 = 3 + sqrt(1 + 8 cos^2 K).
    auto f = [](double K) {
        return 2.0 * K * K - 3.0 - std::sqrt(1.0 + 8.0 * std::cos(K) * std::cos(K));
    };
    double lo = 0.5, hi = 3.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(wc == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
    CHECK(std::abs(wc - 1.428) < 1e-3);

    // Defining residual and brackets.
    CHECK(std::abs(2.0 * wc * wc - dispersion(kDefault, wc).lambda_plus) < 1e-12);
    CHECK(wc >= std::sqrt(dispersion(kDefault, kPi / 2).lambda_plus) / c - 1e-12);
    CHECK(wc <= std::sqrt(6.0) / c + 1e-12);

    CHECK_THROWS_AS(critical_frequency(kDefault, 1.0), DomainError);
}

TEST_CASE("kernel basis construction and certification") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 32);
    const PeriodicField* nus[3] = {&d.nu0, &d.nu1, &d.nu2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(inner_product(*nus[i], *nus[j]) - (i == j ? 1.0 : 0.0)) < 1e-14);

    CHECK(l2_norm(d.nu2 - shift(d.nu1, -kPi / 2.0)) < 1e-15);
    CHECK(l2_norm(derivative(d.nu1, 1) + d.nu2) < 1e-15);
    CHECK(l2_norm(derivative(d.nu2, 1) - d.nu1) < 1e-15);

    // Mode blocks away from the kernel are uniformly nonsingular.
    for (int k = 2; k <= 32; ++k) {
        Eigen::JacobiSVD<Mat2c> svd(symbol_L(kDefault, d.c, d.omega_c * k));
        CHECK(svd.singularValues()(1) > 1e-6);
    }

    // Mass dimer (kappa=1): the kernel mode is the real vector
    // (2 cos w_c, 2 - c^2 w_c^2) carried by cos(x).
    Material mass = Material::dimer(0.5, 1.0, 1.0);
    LinearData dm = kernel_basis(mass, std::sqrt(2.0), 16);
    Vec2c mode = dm.nu1.coeff(1);
    CHECK(std::abs(mode(0).imag()) < 1e-14);
    CHECK(std::abs(mode(1).imag()) < 1e-14);
    double ratio_expect = 2.0 * std::cos(dm.omega_c) / (2.0 - 2.0 * dm.omega_c * dm.omega_c);
    CHECK(mode(0).real() / mode(1).real() == doctest::Approx(ratio_expect).epsilon(1e-12));
}

TEST_CASE("adjoint kernel via the weighted adjoint symbol") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 32);
    MultiplierSymbol Lstar = d.op_L_adjoint();
    CHECK(l2_norm(apply_symbol(Lstar, d.nu0)) < 1e-11);
    CHECK(l2_norm(apply_symbol(Lstar, d.nu1)) < 1e-11);
    CHECK(l2_norm(apply_symbol(Lstar, d.nu2)) < 1e-11);
}

TEST_CASE("transversality two routes and internal identities") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 24);
    TransversalityCheck tc = transversality(d);
    CHECK(std::abs(tc.numeric - tc.closed_form) <= 1e-8 * std::abs(tc.closed_form));
    CHECK(std::abs(tc.cross) < 1e-11);
    CHECK(std::abs(tc.nu2_nu2 - tc.numeric) < 1e-10 * std::max(1.0, std::abs(tc.numeric)));

    // w |v1|^2 + v2^2 = -rho(w_c) v2: the keystone of the closed form.
    DispersionPoint disp = dispersion(kDefault, d.omega_c);
    double lhs = kDefault.w * std::norm(d.v1) + d.v2 * d.v2;
    CHECK(lhs == doctest::Approx(-disp.rho * d.v2).epsilon(1e-12));

    // Frequency transversality margin is positive.
    CHECK(2.0 * d.c * d.c * d.omega_c - d.lambda_plus_prime > 0.0);

    // Sign of the pairing is constant across speeds.
    double cs = speed_of_sound(kDefault);
    int sign = 0;
    for (double ratio : {1.01, 1.3, 2.0, 3.0}) {
        LinearData dc = kernel_basis(kDefault, ratio * cs, 16);
        int s = dc.transversality > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        CHECK(s == sign);
    }
}

TEST_CASE("optical branch derivative matches finite differences") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 16);
    double h = 1e-6;
    double fd = (dispersion(kDefault, d.omega_c + h).lambda_plus -
                 dispersion(kDefault, d.omega_c - h).lambda_plus) /
                (2.0 * h);
    CHECK(d.lambda_plus_prime == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("coercive mode-1 reduction uses the scalar equation") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 16);
    // Kernel-orthogonal mode-1 data: etahat(1) . conj(mu) = 0.
    PeriodicField eta(16);
    Vec2c e1;
    e1(0) = Complex(0.4, -0.2);
    e1(1) = -std::conj(d.v1) * e1(0) / d.v2;
    eta.set_coeff(1, e1);
    PeriodicField psi = coercive_solve(d, eta);
    Complex p1 = psi.coeff(1)(0);
    Complex p2 = psi.coeff(1)(1);
    double denom = d.v2 * d.v2 + std::norm(d.v1);
    CHECK(std::abs(p1 * denom - d.v2 * e1(0)) < 1e-13);
    CHECK(std::abs(p2 + std::conj(d.v1) / d.v2 * p1) < 1e-14);
}

TEST_CASE("coercive solve") {
    LinearData d = kernel_basis(kDefault, std::sqrt(2.0), 24);

    PeriodicField zero(24);
    CHECK(l2_norm(coercive_solve(d, zero)) == 0.0);

    // Single high mode: solution equals the dense 2x2 inverse.
    PeriodicField eta(24);
    eta.set_coeff(2, Vec2c(Complex(0.5, 0.0), Complex(0.0, 0.0)));  // cos(2x)(1,0)
    PeriodicField psi = coercive_solve(d, eta);
    Mat2c L2 = symbol_L(kDefault, d.c, 2.0 * d.omega_c);
    Vec2c expect = L2.inverse() * eta.coeff(2);
    CHECK((psi.coeff(2) - expect).norm() < 1e-12 * expect.norm());

    // Round trip on a random kernel-orthogonal field.
    Rng rng(13);
    PeriodicField target = project_complement(d, random_field(rng, 24));
    PeriodicField image = apply_symbol(d.op_L(), target);
    PeriodicField back = coercive_solve(d, image);
    CHECK(l2_norm(back - target) < 1e-9 * (1.0 + l2_norm(target)));

    // Non-orthogonal right-hand sides are rejected.
    PeriodicField bad = d.nu1;
    CHECK_THROWS_AS(coercive_solve(d, bad), DomainError);

    // Recorded constant stays below the closed-form bound across speeds.
    double bound = coercivity_bound(kDefault);
    double cs = speed_of_sound(kDefault);
    for (double ratio : {1.01, 1.5, 3.0}) {
        LinearData dc = kernel_basis(kDefault, ratio * cs, 24);
        PeriodicField rhs = project_complement(dc, random_field(rng, 24));
        double C = 0.0;
        coercive_solve(dc, rhs, &C);
        CHECK(C <= bound);
    }
}
