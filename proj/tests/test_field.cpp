#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "dimerwave/errors.hpp"
#include "dimerwave/field.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/serialize.hpp"

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

TEST_CASE("inner product basics") {
    PeriodicField zero(8);
    Rng rng(1);
    PeriodicField g = random_field(rng, 8);
    CHECK(inner_product(zero, g) == 0.0);

    PeriodicField f = fields::cosine(8, 1, 0);
    CHECK(inner_product(f, f) == doctest::Approx(0.5).epsilon(1e-15));

    // Symmetry and real bilinearity.
    PeriodicField h = random_field(rng, 8);
    CHECK(inner_product(g, h) == doctest::Approx(inner_product(h, g)).epsilon(1e-14));
    PeriodicField combo = 2.0 * g + h;
    CHECK(inner_product(combo, f) ==
          doctest::Approx(2.0 * inner_product(g, f) + inner_product(h, f)).epsilon(1e-13));
}

TEST_CASE("sobolev norms") {
    PeriodicField c = fields::constant(8, 3.0, -4.0);
    for (double r : {0.0, 1.0, 2.5}) CHECK(sobolev_norm(c, r) == doctest::Approx(5.0));

    PeriodicField f = fields::cosine(8, 1, 0);
    CHECK(sobolev_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(std::sqrt(inner_product(f, f))));

    Rng rng(2);
    PeriodicField g = random_field(rng, 16);
    for (double r : {0.0, 0.5, 1.0, 2.0})
        CHECK(sobolev_norm(g, r + 1.0) >= sobolev_norm(g, r));
}

TEST_CASE("shift and derivative identities") {
    Rng rng(3);
    PeriodicField f = random_field(rng, 16);
    PeriodicField g = random_field(rng, 16);

    CHECK(l2_norm(shift(f, 0.0) - f) == 0.0);

    double theta = 0.7321;
    CHECK(std::abs(inner_product(shift(f, theta), g) - inner_product(f, shift(g, -theta))) <
          1e-13);
    CHECK(std::abs(inner_product(derivative(f, 1), g) + inner_product(f, derivative(g, 1))) <
          1e-13);

    // shift(cos k x) by theta advances the phase.
    PeriodicField c2 = fields::cosine(8, 2, 1);
    PeriodicField shifted = shift(c2, kPi / 4.0);  // cos(2(x + pi/4)) = -sin(2x)
    GridData g2 = to_grid(shifted, 32);
    for (int j = 0; j < 32; ++j) {
        double x = 2.0 * kPi * j / 32.0;
        CHECK(g2.c2[static_cast<size_t>(j)] == doctest::Approx(-std::sin(2.0 * x)).epsilon(1e-12));
    }
}

TEST_CASE("apply_symbol composes and rejects asymmetric symbols") {
    Rng rng(4);
    PeriodicField f = random_field(rng, 12);

    // Real matrix coefficients give symbols with M(-K) = conj(M(K)).
    auto random_symbol = [&rng]() {
        Mat2c cm, c0, c1;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cm(i, j) = Complex(rng.normal(), 0.0);
                c0(i, j) = Complex(rng.normal(), 0.0);
                c1(i, j) = Complex(rng.normal(), 0.0);
            }
        return MultiplierSymbol{[cm, c0, c1](double K) {
            Complex e = std::exp(Complex(0.0, K));
            return Mat2c(c0 + e * c1 + std::conj(e) * cm);
        }};
    };
    MultiplierSymbol A = random_symbol();
    MultiplierSymbol B = random_symbol();
    MultiplierSymbol AB{[&A, &B](double K) { return Mat2c(A.at(K) * B.at(K)); }};
    PeriodicField lhs = apply_symbol(A, apply_symbol(B, f));
    PeriodicField rhs = apply_symbol(AB, f);
    CHECK(l2_norm(lhs - rhs) < 1e-12 * (1.0 + l2_norm(rhs)));

    MultiplierSymbol bad{[](double K) {
        Mat2c m = Mat2c::Zero();
        m(0, 0) = K;  // odd real symbol: conj symmetry fails at k != 0
        return m;
    }};
    CHECK_THROWS_AS(apply_symbol(bad, f), InternalError);
}

TEST_CASE("Parseval against trapezoid quadrature") {
    Rng rng(5);
    PeriodicField f = random_field(rng, 16);
    PeriodicField g = random_field(rng, 16);
    int G = 64;
    GridData fg = to_grid(f, G);
    GridData gg = to_grid(g, G);
    double quad = 0.0;
    for (int j = 0; j < G; ++j) {
        auto idx = static_cast<size_t>(j);
        quad += fg.c1[idx] * gg.c1[idx] + fg.c2[idx] * gg.c2[idx];
    }
    quad /= G;  // equals (1/2pi) * integral for band-limited products
    CHECK(inner_product(f, g) == doctest::Approx(quad).epsilon(1e-12));
}

TEST_CASE("grid round trip is exact for band-limited fields") {
    Rng rng(6);
    PeriodicField f = random_field(rng, 16);
    PeriodicField back = from_grid(to_grid(f, 64), 16);
    CHECK(l2_norm(back - f) < 1e-13 * (1.0 + l2_norm(f)));

    // eval_at agrees with the grid synthesis.
    GridData g = to_grid(f, 64);
    for (int j : {0, 7, 31}) {
        Eigen::Vector2d v = eval_at(f, 2.0 * kPi * j / 64.0);
        CHECK(v(0) == doctest::Approx(g.c1[static_cast<size_t>(j)]).epsilon(1e-12));
        CHECK(v(1) == doctest::Approx(g.c2[static_cast<size_t>(j)]).epsilon(1e-12));
    }
}

TEST_CASE("apply_pointwise: identity, squaring oracle, dealiasing guard") {
    Rng rng(7);
    PeriodicField f = random_field(rng, 16);
    Polynomial identity({0.0, 1.0});
    PeriodicField same = apply_pointwise(f, identity, identity, 64);
    CHECK(l2_norm(same - f) < 1e-13 * (1.0 + l2_norm(f)));

    // cos(x)^2 = (1 + cos 2x)/2.
    PeriodicField c = fields::cosine(16, 1, 0);
    Polynomial square({0.0, 0.0, 1.0});
    Polynomial zero;
    PeriodicField sq = apply_pointwise(c, square, zero, 64);
    CHECK(sq.coeff(0)(0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sq.coeff(2)(0).real() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::abs(sq.coeff(1)(0)) < 1e-15);

    Polynomial cubic({0.0, 0.0, 0.0, 1.0});
    CHECK_THROWS_AS(apply_pointwise(f, cubic, cubic, 2 * 16 + 1), ConfigError);
}

TEST_CASE("grid transforms are safe under concurrent use") {
    Rng rng(9);
    std::vector<PeriodicField> inputs;
    for (int i = 0; i < 8; ++i) inputs.push_back(random_field(rng, 16));
    std::vector<PeriodicField> serial;
    for (const auto& f : inputs) serial.push_back(from_grid(to_grid(f, 64), 16));

    std::vector<PeriodicField> parallel(8, PeriodicField(16));
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            for (size_t i = static_cast<size_t>(t); i < inputs.size(); i += 4)
                parallel[i] = from_grid(to_grid(inputs[i], 64), 16);
        });
    for (auto& th : pool) th.join();
    for (size_t i = 0; i < inputs.size(); ++i)
        CHECK(l2_norm(parallel[i] - serial[i]) == 0.0);
}

TEST_CASE("field JSON round trip preserves coefficients exactly") {
    Rng rng(8);
    PeriodicField f = random_field(rng, 9);
    PeriodicField back = field_from_json(field_to_json(f));
    REQUIRE(back.truncation() == f.truncation());
    for (int k = 0; k <= f.truncation(); ++k) {
        CHECK(back.coeff(k)(0) == f.coeff(k)(0));
        CHECK(back.coeff(k)(1) == f.coeff(k)(1));
    }
}
