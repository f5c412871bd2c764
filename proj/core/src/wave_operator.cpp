#include "dimerwave/wave_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dimerwave/errors.hpp"
#include "dimerwave/linear.hpp"

namespace dimerwave {

namespace {

MultiplierSymbol delta_plus_symbol(double omega) {
    return {[omega](double K) {
        Mat2c m;
        m(0, 0) = -1.0;
        m(0, 1) = std::exp(Complex(0.0, omega * K));
        m(1, 0) = 1.0;
        m(1, 1) = -std::exp(Complex(0.0, -omega * K));
        return m;
    }};
}

MultiplierSymbol delta_minus_symbol(double omega) {
    return {[omega](double K) {
        Mat2c m;
        m(0, 0) = 1.0;
        m(0, 1) = -1.0;
        m(1, 0) = -std::exp(Complex(0.0, -omega * K));
        m(1, 1) = std::exp(Complex(0.0, omega * K));
        return m;
    }};
}

MultiplierSymbol second_derivative_mass_symbol(const Material& mat, double c, double omega) {
    double m = mat.m;
    return {[c, omega, m](double K) {
        Mat2c d = Mat2c::Zero();
        double f = -c * c * omega * omega * K * K;
        d(0, 0) = f;
        d(1, 1) = f * m;
        return d;
    }};
}

// V'(D+ phi) with the output kept to `out_trunc` modes.
PeriodicField stencil_force(const WaveProblem& p, const PeriodicField& phi, double omega,
                            int out_trunc, int grid_size) {
    PeriodicField dp = apply_symbol(delta_plus_symbol(omega), phi);
    GridData g = to_grid(dp, grid_size);
    for (auto& v : g.c1) v = p.material.force1(v);
    for (auto& v : g.c2) v = p.material.force2(v);
    return from_grid(g, out_trunc);
}

PeriodicField phi_op_impl(const WaveProblem& p, const PeriodicField& phi, double omega,
                          int out_trunc, int grid_size) {
    PeriodicField kin =
        apply_symbol(second_derivative_mass_symbol(p.material, p.c, omega),
                     phi.retruncated(out_trunc));
    PeriodicField nl = apply_symbol(delta_minus_symbol(omega),
                                    stencil_force(p, phi, omega, out_trunc, grid_size));
    return kin - nl;
}

// Scalar helper for the componentwise path: applies poly to component
// `comp` of f on the grid and accumulates sign * result into out[comp_out].
void accumulate_force_term(GridData& out, int comp_out, const GridData& arg, int comp_arg,
                           const Polynomial& poly, double sign) {
    const std::vector<double>& src = comp_arg == 0 ? arg.c1 : arg.c2;
    std::vector<double>& dst = comp_out == 0 ? out.c1 : out.c2;
    for (size_t j = 0; j < src.size(); ++j) dst[j] += sign * poly(src[j]);
}

}  // namespace

WaveProblem WaveProblem::make(const Material& mat, double c, int truncation, int grid) {
    ValidationReport rep = validate(mat);
    if (!rep.ok()) throw ConfigError("invalid material: " + rep.to_string());
    int d = mat.max_force_degree();
    int min_grid = (d + 1) * truncation + 1;
    WaveProblem p;
    p.material = mat;
    p.c = c;
    p.truncation = truncation;
    p.grid = grid > 0 ? grid : std::max(4 * truncation, min_grid);
    if (p.grid < min_grid) {
        std::ostringstream os;
        os << "grid " << p.grid << " below the dealiasing bound " << min_grid
           << " for force degree " << d << " at truncation " << truncation;
        throw ConfigError(os.str());
    }
    if (!(std::abs(c) > speed_of_sound(mat)))
        throw DomainError("wave speed is not supersonic: |c| <= c_star");
    return p;
}

PeriodicField delta_plus(const PeriodicField& f, double omega) {
    return apply_symbol(delta_plus_symbol(omega), f);
}

PeriodicField delta_minus(const PeriodicField& f, double omega) {
    return apply_symbol(delta_minus_symbol(omega), f);
}

PeriodicField phi_op(const WaveProblem& p, const PeriodicField& phi, double omega) {
    return phi_op_impl(p, phi, omega, p.truncation, p.grid);
}

PeriodicField phi_op_full(const WaveProblem& p, const PeriodicField& phi, double omega) {
    // Recovering every mode of the degree-d nonlinearity needs 2dN+1 points.
    int d = std::max(1, p.material.max_force_degree());
    int grid = std::max(p.grid, 2 * d * p.truncation + 2);
    return phi_op_impl(p, phi, omega, d * p.truncation, grid);
}

PeriodicField phi_op_direct(const WaveProblem& p, const PeriodicField& phi, double omega) {
    int N = p.truncation;
    // Single-component shifted copies, sampled on the dealiasing grid.
    PeriodicField phi_fwd = shift(phi, omega);    // S^w phi
    PeriodicField phi_bwd = shift(phi, -omega);   // S^{-w} phi
    GridData g0 = to_grid(phi, p.grid);
    GridData gf = to_grid(phi_fwd, p.grid);
    GridData gb = to_grid(phi_bwd, p.grid);

    auto minus = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size());
        for (size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
        return r;
    };
    GridData arg;  // c1 = S^w phi2 - phi1, c2 = phi1 - S^{-w} phi2
    arg.c1 = minus(gf.c2, g0.c1);
    arg.c2 = minus(g0.c1, gb.c2);
    GridData arg2;  // c1 = phi2 - S^{-w} phi1, c2 = S^w phi1 - phi2
    arg2.c1 = minus(g0.c2, gb.c1);
    arg2.c2 = minus(gf.c1, g0.c2);

    GridData nl;
    nl.c1.assign(g0.c1.size(), 0.0);
    nl.c2.assign(g0.c1.size(), 0.0);
    accumulate_force_term(nl, 0, arg, 1, p.material.force2, +1.0);   // V2'(phi1 - S^{-w} phi2)
    accumulate_force_term(nl, 0, arg, 0, p.material.force1, -1.0);   // -V1'(S^w phi2 - phi1)
    accumulate_force_term(nl, 1, arg2, 0, p.material.force1, +1.0);  // V1'(phi2 - S^{-w} phi1)
    accumulate_force_term(nl, 1, arg2, 1, p.material.force2, -1.0);  // -V2'(S^w phi1 - phi2)

    PeriodicField kin = apply_symbol(second_derivative_mass_symbol(p.material, p.c, omega), phi);
    return kin + from_grid(nl, N);
}

EnergyBreakdown energy(const WaveProblem& p, const PeriodicField& phi, double omega) {
    EnergyBreakdown e;
    double acc = 0.0;
    for (int k = 1; k <= phi.truncation(); ++k) {
        double k2 = static_cast<double>(k) * k;
        acc += -2.0 * k2 *
               (std::norm(phi.coeff(k)(0)) + p.material.m * std::norm(phi.coeff(k)(1)));
    }
    e.kinetic = 0.5 * omega * omega * acc;
    PeriodicField dp = delta_plus(phi, omega);
    e.potential = mean_of_pointwise(dp, potential(p.material, 1), potential(p.material, 2), p.grid);
    e.total = p.c * p.c * e.kinetic + e.potential;
    return e;
}

FirstIntegralTrace first_integral(const WaveProblem& p, const PeriodicField& phi, double omega) {
    const Material& mat = p.material;
    int N = phi.truncation();
    int d = std::max(1, mat.max_force_degree());
    int band = (d + 1) * N;          // bandwidth of every term below
    int GJ = 2 * band + 2;           // resolves all modes exactly

    PeriodicField dphi = derivative(phi, 1);
    PeriodicField dp = delta_plus(phi, omega);

    GridData g_dp = to_grid(dp, GJ);
    GridData g_dp_shift = to_grid(shift(dp, omega), GJ);     // S^w (D+ phi)
    GridData g_arg_a = to_grid(shift(dp, -omega), GJ);       // S^{-w}(D+ phi)
    GridData g_dphi = to_grid(dphi, GJ);

    Polynomial V1 = potential(mat, 1);
    Polynomial V2 = potential(mat, 2);

    std::vector<double> J(static_cast<size_t>(GJ), 0.0);
    double cw2 = p.c * p.c * omega * omega;
    for (int j = 0; j < GJ; ++j) {
        auto idx = static_cast<size_t>(j);
        double d1 = g_dphi.c1[idx], d2 = g_dphi.c2[idx];
        // kinetic: c^2 w^2 ((phi1')^2 / 2 + (phi2')^2 / (2 w))
        J[idx] = cw2 * (0.5 * d1 * d1 + 0.5 * mat.m * d2 * d2);
        // local potential terms V1(phi2 - S^{-w}phi1) + V2(phi1 - S^{-w}phi2)
        J[idx] += V1(g_arg_a.c1[idx]) + V2(g_dp.c2[idx]);
    }

    // Advance-delay term: for integrand g, int_x^{x-w} g = Gt(x-w) - Gt(x) - w*mean(g),
    // with Gt the spectral antiderivative of g - mean(g).
    auto advance_delay = [&](const std::vector<double>& g_samples) {
        GridData wrap;
        wrap.c1 = g_samples;
        wrap.c2.assign(g_samples.size(), 0.0);
        PeriodicField gc = from_grid(wrap, band);
        double mean = gc.coeff(0)(0).real();
        PeriodicField anti(band);
        for (int k = 1; k <= band; ++k) {
            Vec2c v = gc.coeff(k);
            v(0) /= Complex(0.0, static_cast<double>(k));
            v(1) = 0.0;
            anti.set_coeff(k, v);
        }
        GridData a0 = to_grid(anti, GJ);
        GridData am = to_grid(shift(anti, -omega), GJ);
        std::vector<double> out(static_cast<size_t>(GJ));
        for (int j = 0; j < GJ; ++j) {
            auto idx = static_cast<size_t>(j);
            out[idx] = am.c1[idx] - a0.c1[idx] - omega * mean;
        }
        return out;
    };

    std::vector<double> g1(static_cast<size_t>(GJ)), g2(static_cast<size_t>(GJ));
    for (int j = 0; j < GJ; ++j) {
        auto idx = static_cast<size_t>(j);
        g1[idx] = mat.force1(g_dp.c1[idx]) * g_dphi.c1[idx];        // V1'(S^w phi2 - phi1) phi1'
        g2[idx] = mat.force2(g_dp_shift.c2[idx]) * g_dphi.c2[idx];  // V2'(S^w phi1 - phi2) phi2'
    }
    std::vector<double> I1 = advance_delay(g1);
    std::vector<double> I2 = advance_delay(g2);

    FirstIntegralTrace tr;
    tr.x.resize(static_cast<size_t>(GJ));
    tr.values.resize(static_cast<size_t>(GJ));
    tr.advance_delay.resize(static_cast<size_t>(GJ));
    for (int j = 0; j < GJ; ++j) {
        auto idx = static_cast<size_t>(j);
        tr.x[idx] = 2.0 * std::numbers::pi_v<double> * j / GJ;
        tr.advance_delay[idx] = I1[idx] + I2[idx];
        tr.values[idx] = J[idx] + tr.advance_delay[idx];
    }
    auto [mn, mx] = std::minmax_element(tr.values.begin(), tr.values.end());
    tr.max_variation = *mx - *mn;
    tr.total_variation = 0.0;
    for (int j = 0; j < GJ; ++j) {
        auto idx = static_cast<size_t>(j);
        auto nxt = static_cast<size_t>((j + 1) % GJ);
        tr.total_variation += std::abs(tr.values[nxt] - tr.values[idx]);
    }

    // Pairing identity <Phi, phi'> = quadrature of dJ/dx.
    GridData jw;
    jw.c1 = tr.values;
    jw.c2.assign(tr.values.size(), 0.0);
    PeriodicField Jc = from_grid(jw, band);
    GridData dJ = to_grid(derivative(Jc, 1), GJ);
    double quad = 0.0;
    for (double v : dJ.c1) quad += v;
    quad /= GJ;
    PeriodicField Phi = phi_op(p, phi, omega);
    double lhs = inner_product(Phi, dphi);
    tr.pairing_residual = std::abs(lhs - quad);
    double scale = 1.0 + l2_norm(Phi) * l2_norm(dphi);
    if (tr.pairing_residual > 1e-9 * scale)
        throw InternalError("first_integral: <Phi,phi'> disagrees with the dJ/dx quadrature");

    // Pointwise identity Phi . phi' = dJ/dx (untruncated operator).
    GridData phi_full = to_grid(phi_op_full(p, phi, omega).retruncated(band), GJ);
    tr.pointwise_defect = 0.0;
    for (int j = 0; j < GJ; ++j) {
        auto idx = static_cast<size_t>(j);
        double lhs_pt = phi_full.c1[idx] * g_dphi.c1[idx] + phi_full.c2[idx] * g_dphi.c2[idx];
        tr.pointwise_defect = std::max(tr.pointwise_defect, std::abs(lhs_pt - dJ.c1[idx]));
    }
    return tr;
}

double lattice_residual(const WaveProblem& p, const PeriodicField& phi, double omega,
                        const std::vector<LatticeSample>& samples) {
    const Material& mat = p.material;
    PeriodicField ddphi = derivative(phi, 2);
    double worst = 0.0;
    for (const auto& [j, t] : samples) {
        double X = static_cast<double>(j) - p.c * t;
        auto profile = [&](long long idx) {
            Eigen::Vector2d u = eval_at(phi, omega * (static_cast<double>(idx) - p.c * t));
            return (idx % 2 != 0) ? u(0) : u(1);  // odd -> p1, even -> p2
        };
        double u_m1 = profile(j - 1);
        double u_0 = profile(j);
        double u_p1 = profile(j + 1);
        // u_j''(t) = c^2 p''(j - ct) with p(X) = phi(w X).
        Eigen::Vector2d pdd = eval_at(ddphi, omega * X);
        double accel = p.c * p.c * omega * omega * ((j % 2 != 0) ? pdd(0) : pdd(1));
        double mass = (j % 2 != 0) ? 1.0 : mat.m;
        // Spring j couples particles j and j+1; odd springs are V1.
        const Polynomial& ahead = (j % 2 != 0) ? mat.force1 : mat.force2;
        const Polynomial& behind = (j % 2 != 0) ? mat.force2 : mat.force1;
        double res = mass * accel - ahead(u_p1 - u_0) + behind(u_0 - u_m1);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace dimerwave
