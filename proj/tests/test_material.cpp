#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dimerwave/material.hpp"

using namespace dimerwave;

TEST_CASE("validate accepts and rejects the standing hypotheses") {
    CHECK(validate(Material::dimer(1.0, 2.0, 1.0)).ok());     // kappa > 1
    CHECK(validate(Material::dimer(0.5, 1.0, 0.0)).ok());     // w = 2 > 1
    ValidationReport rep = validate(Material::dimer(1.0, 1.0, 1.0));
    CHECK_FALSE(rep.ok());
    CHECK(rep.to_string().find("w>1 or kappa>1") != std::string::npos);
}

TEST_CASE("validate pins the linear coefficients exactly") {
    Material mat = Material::dimer_with_forces(1.0, {1.0 + 1e-12, 1.0}, {2.0, 1.0});
    ValidationReport rep = validate(mat);
    CHECK_FALSE(rep.ok());
    CHECK(rep.to_string().find("force1 linear coefficient") != std::string::npos);

    Material mat2 = Material::dimer(1.0, 2.0, 1.0);
    mat2.kappa = 2.5;  // now inconsistent with force2
    CHECK_FALSE(validate(mat2).ok());
}

TEST_CASE("validate rejects degrees above the cap and non-finite coefficients") {
    Material quartic = Material::dimer_with_forces(1.0, {1.0, 0.0, 0.0, 0.5}, {2.0, 1.0});
    CHECK_FALSE(validate(quartic).ok());
    CHECK(validate(quartic, 4).ok());

    Material inf = Material::dimer_with_forces(1.0, {1.0, INFINITY}, {2.0, 1.0});
    CHECK_FALSE(validate(inf).ok());
}

TEST_CASE("force evaluation matches hand values") {
    Material mat = Material::dimer(1.0, 2.0, 1.0);
    CHECK(force(mat, 1, 0.0) == 0.0);
    CHECK(force(mat, 1, 0.1) == doctest::Approx(0.11).epsilon(1e-15));  // r + r^2 at 0.1
    CHECK(force_deriv(mat, 2, 1, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(force_deriv(mat, 1, 1, 0.0) == 1.0);
    CHECK(force_deriv(mat, 1, 2, 0.0) == doctest::Approx(2.0));  // d^2/dr^2 (r + r^2) = 2
}

TEST_CASE("polynomial evaluation agrees with a power-sum oracle") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> arg(-1.5, 1.5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> c(4);
        for (double& v : c) v = coef(gen);
        Polynomial p(c);
        double r = arg(gen);
        double expect = 0.0;
        for (size_t i = 0; i < c.size(); ++i) expect += c[i] * std::pow(r, static_cast<double>(i));
        CHECK(p(r) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("potential is the antiderivative vanishing at zero") {
    Material mat = Material::dimer(1.0, 2.0, 1.0);
    Polynomial V1 = potential(mat, 1);  // r^2/2 + r^3/3
    CHECK(V1(0.0) == 0.0);
    CHECK(V1(0.5) == doctest::Approx(0.25 / 2.0 + 0.125 / 3.0).epsilon(1e-15));
    Polynomial V2 = potential(mat, 2);  // r^2 + r^3/3
    CHECK(V2(2.0) == doctest::Approx(4.0 + 8.0 / 3.0).epsilon(1e-15));
    // d/dr of the antiderivative recovers the force.
    Polynomial back = V1.derivative();
    CHECK(back(0.3) == doctest::Approx(force(mat, 1, 0.3)).epsilon(1e-15));
}
