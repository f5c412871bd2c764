#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dimerwave/errors.hpp"
#include "dimerwave/linear.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/wave_operator.hpp"

using namespace dimerwave;

namespace {

const Material kDefault = Material::dimer(1.0, 2.0, 1.0);

PeriodicField random_field(Rng& rng, int n, double amp = 0.4) {
    PeriodicField f(n);
    f.set_coeff(0, Vec2c(Complex(amp * rng.normal(), 0.0), Complex(amp * rng.normal(), 0.0)));
    for (int k = 1; k <= n; ++k) {
        double w = amp * std::exp(-0.3 * k);
        f.set_coeff(k, Vec2c(Complex(w * rng.normal(), w * rng.normal()),
                             Complex(w * rng.normal(), w * rng.normal())));
    }
    return f;
}

WaveProblem default_problem(int n = 24) {
    return WaveProblem::make(kDefault, std::sqrt(2.0), n);
}

}  // namespace

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(WaveProblem::make(kDefault, 1.0, 24), DomainError);  // subsonic
    CHECK_THROWS_AS(WaveProblem::make(kDefault, std::sqrt(2.0), 24, 60), ConfigError);
    CHECK_THROWS_AS(WaveProblem::make(Material::dimer(1.0, 1.0), std::sqrt(2.0), 24), ConfigError);
    WaveProblem p = WaveProblem::make(kDefault, std::sqrt(2.0), 24);
    CHECK(p.grid == 96);  // 4N default, above (d+1)N+1 = 73
}

TEST_CASE("phi_op vanishes on constants and respects invariances") {
    WaveProblem p = default_problem();
    Rng rng(21);
    PeriodicField phi = random_field(rng, p.truncation);
    double omega = 1.37;

    PeriodicField zero(p.truncation);
    CHECK(l2_norm(phi_op(p, zero, omega)) == 0.0);

    // Translation invariance: adding alpha nu0 changes nothing.
    PeriodicField shifted_const = phi + fields::constant(p.truncation, 0.31, 0.31);
    CHECK(l2_norm(phi_op(p, shifted_const, omega) - phi_op(p, phi, omega)) <
          1e-13 * (1.0 + l2_norm(phi_op(p, phi, omega))));

    // Shift invariance.
    double theta = 0.83;
    PeriodicField lhs = phi_op(p, shift(phi, theta), omega);
    PeriodicField rhs = shift(phi_op(p, phi, omega), theta);
    CHECK(l2_norm(lhs - rhs) < 1e-12 * (1.0 + l2_norm(rhs)));

    // Range orthogonal to nu0.
    PeriodicField nu0 = fields::constant(p.truncation, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    CHECK(std::abs(inner_product(phi_op(p, phi, omega), nu0)) < 1e-12);
}

TEST_CASE("stencil and componentwise paths agree") {
    WaveProblem p = default_problem();
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        PeriodicField phi = random_field(rng, p.truncation);
        double omega = rng.uniform(0.5, 2.5);
        PeriodicField a = phi_op(p, phi, omega);
        PeriodicField b = phi_op_direct(p, phi, omega);
        CHECK(l2_norm(a - b) < 1e-12 * (1.0 + l2_norm(a)));
    }
}

TEST_CASE("difference stencils are skew-adjoint to each other") {
    Rng rng(23);
    PeriodicField f = random_field(rng, 20);
    PeriodicField g = random_field(rng, 20);
    double omega = 1.21;
    double lhs = inner_product(delta_plus(f, omega), g);
    double rhs = -inner_product(f, delta_minus(g, omega));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("linearization consistency at small amplitude") {
    WaveProblem p = default_problem();
    Rng rng(24);
    PeriodicField eta = random_field(rng, p.truncation, 1.0);
    double omega = 1.4;
    MultiplierSymbol L{[&](double K) { return symbol_L(p.material, p.c, omega * K); }};
    PeriodicField L_eta = apply_symbol(L, eta);
    auto defect = [&](double h) {
        PeriodicField scaled = h * eta;
        return l2_norm((1.0 / h) * phi_op(p, scaled, omega) - L_eta);
    };
    double d3 = defect(1e-3);
    double d4 = defect(1e-4);
    CHECK(d4 < d3);
    CHECK(d3 / d4 == doctest::Approx(10.0).epsilon(0.5));  // O(h) from the quadratic term
}

TEST_CASE("energy gradient identity via central differences") {
    WaveProblem p = default_problem();
    Rng rng(25);
    PeriodicField phi = random_field(rng, p.truncation);
    PeriodicField eta = random_field(rng, p.truncation, 0.3);
    double omega = 1.5;

    CHECK(energy(p, PeriodicField(p.truncation), omega).total == 0.0);

    // Shift invariance of the functional.
    CHECK(energy(p, shift(phi, 0.9), omega).total ==
          doctest::Approx(energy(p, phi, omega).total).epsilon(1e-12));

    double pairing = inner_product(phi_op(p, phi, omega), eta);
    double e1 = 0.0, e2 = 0.0;
    double errs[2];
    int i = 0;
    for (double h : {1e-3, 1e-4}) {
        double fd =
            (energy(p, phi + h * eta, omega).total - energy(p, phi - h * eta, omega).total) /
            (2.0 * h);
        errs[i++] = std::abs(fd - pairing);
    }
    e1 = errs[0];
    e2 = errs[1];
    CHECK(e2 < 1e-7);
    double order = std::log10(e1 / std::max(e2, 1e-16));
    CHECK(order >= 1.9);
}

TEST_CASE("first integral trace") {
    WaveProblem p = default_problem();

    PeriodicField zero(p.truncation);
    FirstIntegralTrace tz = first_integral(p, zero, 1.3);
    CHECK(tz.max_variation == 0.0);
    for (double v : tz.values) CHECK(v == 0.0);

    Rng rng(26);
    for (int trial = 0; trial < 5; ++trial) {
        PeriodicField phi = random_field(rng, p.truncation);
        double omega = rng.uniform(0.8, 2.0);
        FirstIntegralTrace tr = first_integral(p, phi, omega);
        PeriodicField Phi = phi_op(p, phi, omega);
        PeriodicField dphi = derivative(phi, 1);
        double scale = 1.0 + l2_norm(Phi) * l2_norm(dphi);
        // Derivative orthogonality, and the pointwise version of the identity.
        CHECK(std::abs(inner_product(Phi, dphi)) < 1e-11 * scale);
        CHECK(tr.pairing_residual < 1e-9 * scale);
        CHECK(tr.pointwise_defect < 1e-10 * scale);
    }
}

TEST_CASE("lattice residual vanishes on the zero solution") {
    WaveProblem p = default_problem();
    PeriodicField zero(p.truncation);
    std::vector<LatticeSample> samples = {{0, 0.0}, {3, 1.7}, {-11, 5.2}};
    CHECK(lattice_residual(p, zero, 1.4, samples) == 0.0);
}
