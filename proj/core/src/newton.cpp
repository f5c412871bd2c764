#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "dimerwave/errors.hpp"
#include "dimerwave/solver.hpp"

// Newton oracle on the bordered system
//   Phi(phi, omega) + gamma phi' = 0,  <phi, nu1> = a,  <phi, nu2> = 0,
// with phi constrained to <phi, nu0> = 0.  The mode-0 component equation
// whose sum vanishes identically is replaced by that constraint, which
// makes the system square.  Solutions carry gamma = 0.

namespace dimerwave {

namespace {

// Real packing of a Hermitian coefficient array: per component,
// Re fhat(0), then (Re, Im) fhat(k) for k = 1..N.
int field_dofs(int N) { return 2 * (2 * N + 1); }

int dof_index(int N, int comp, int k, bool imag_part) {
    int base = comp * (2 * N + 1);
    if (k == 0) return base;
    return base + 1 + 2 * (k - 1) + (imag_part ? 1 : 0);
}

PeriodicField unpack_field(const Eigen::VectorXd& u, int N) {
    PeriodicField f(N);
    for (int comp = 0; comp < 2; ++comp) {
        Vec2c v0 = f.coeff(0);
        v0(comp) = Complex(u(dof_index(N, comp, 0, false)), 0.0);
        f.set_coeff(0, v0);
        for (int k = 1; k <= N; ++k) {
            Vec2c v = f.coeff(k);
            v(comp) = Complex(u(dof_index(N, comp, k, false)), u(dof_index(N, comp, k, true)));
            f.set_coeff(k, v);
        }
    }
    return f;
}

void pack_field(const PeriodicField& f, int N, Eigen::VectorXd& u) {
    for (int comp = 0; comp < 2; ++comp) {
        u(dof_index(N, comp, 0, false)) = f.coeff(0)(comp).real();
        for (int k = 1; k <= N; ++k) {
            u(dof_index(N, comp, k, false)) = f.coeff(k)(comp).real();
            u(dof_index(N, comp, k, true)) = f.coeff(k)(comp).imag();
        }
    }
}

struct BorderedSystem {
    const WaveProblem& p;
    const LinearData& data;
    double a;
    int N;
    int n_dofs;  // field dofs + omega + gamma

    BorderedSystem(const WaveProblem& prob, const LinearData& d, double amp)
        : p(prob), data(d), a(amp), N(prob.truncation), n_dofs(field_dofs(prob.truncation) + 2) {}

    int omega_index() const { return field_dofs(N); }
    int gamma_index() const { return field_dofs(N) + 1; }

    // The translation-degenerate mode-0 rows are replaced: component 1 keeps
    // its equation, component 2's row becomes the constraint <phi, nu0> = 0.
    // The constraint rows are linear in phi, so the same packing serves both
    // the residual (with the amplitude offset) and Jacobian columns (without).
    Eigen::VectorXd pack_equations(const PeriodicField& eq, const PeriodicField& phi,
                                   bool with_offset) const {
        Eigen::VectorXd F = Eigen::VectorXd::Zero(n_dofs);
        Eigen::VectorXd packed(field_dofs(N));
        pack_field(eq, N, packed);
        F.head(field_dofs(N)) = packed;
        F(dof_index(N, 1, 0, false)) = inner_product(phi, data.nu0);
        F(omega_index()) = inner_product(phi, data.nu1) - (with_offset ? a : 0.0);
        F(gamma_index()) = inner_product(phi, data.nu2);
        return F;
    }

    PeriodicField general_op(const PeriodicField& phi, double omega, double gamma) const {
        PeriodicField out = phi_op(p, phi, omega);
        out += gamma * derivative(phi, 1);
        return out;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
        PeriodicField phi = unpack_field(u, N);
        double omega = u(omega_index());
        double gamma = u(gamma_index());
        return pack_equations(general_op(phi, omega, gamma), phi, true);
    }

    // Directional derivative of Phi + gamma phi' in phi.
    PeriodicField linearized(const PeriodicField& phi, double omega, double gamma,
                             const PeriodicField& e) const {
        const Material& mat = p.material;
        GridData base = to_grid(delta_plus(phi, omega), p.grid);
        Polynomial d1 = mat.force1.derivative();
        Polynomial d2 = mat.force2.derivative();
        GridData dir = to_grid(delta_plus(e, omega), p.grid);
        for (size_t j = 0; j < dir.c1.size(); ++j) {
            dir.c1[j] *= d1(base.c1[j]);
            dir.c2[j] *= d2(base.c2[j]);
        }
        PeriodicField nl = delta_minus(from_grid(dir, N), omega);
        PeriodicField out(N);
        double cw2 = p.c * p.c * omega * omega;
        for (int k = 0; k <= N; ++k) {
            Vec2c v = e.coeff(k);
            double k2 = static_cast<double>(k) * k;
            v(0) *= -cw2 * k2;
            v(1) *= -cw2 * k2 * mat.m;
            out.set_coeff(k, v);
        }
        out -= nl;
        out += gamma * derivative(e, 1);
        return out;
    }

    // d/domega of Phi + gamma phi' (analytic; shifts differentiate to
    // shifted derivatives).
    PeriodicField omega_derivative(const PeriodicField& phi, double omega) const {
        const Material& mat = p.material;
        PeriodicField dphi = derivative(phi, 1);
        PeriodicField dp = delta_plus(phi, omega);
        GridData base = to_grid(dp, p.grid);
        Polynomial d1 = mat.force1.derivative();
        Polynomial d2 = mat.force2.derivative();

        // D_omega(D+ phi) = (S^w phi2', S^{-w} phi2').
        PeriodicField ddp(N);
        {
            PeriodicField fwd = shift(dphi, omega);
            PeriodicField bwd = shift(dphi, -omega);
            for (int k = 0; k <= N; ++k) {
                Vec2c v;
                v(0) = fwd.coeff(k)(1);
                v(1) = bwd.coeff(k)(1);
                ddp.set_coeff(k, v);
            }
        }
        GridData dirg = to_grid(ddp, p.grid);
        for (size_t j = 0; j < dirg.c1.size(); ++j) {
            dirg.c1[j] *= d1(base.c1[j]);
            dirg.c2[j] *= d2(base.c2[j]);
        }
        PeriodicField chain = delta_minus(from_grid(dirg, N), omega);

        // D_omega(D- w) applied to w = V'(D+ phi): (0, S^{-w} w1' + S^w w2').
        GridData wg = base;
        for (size_t j = 0; j < wg.c1.size(); ++j) {
            wg.c1[j] = mat.force1(wg.c1[j]);
            wg.c2[j] = mat.force2(wg.c2[j]);
        }
        PeriodicField w_field = derivative(from_grid(wg, N), 1);
        PeriodicField stencil_term(N);
        {
            PeriodicField fwd = shift(w_field, omega);
            PeriodicField bwd = shift(w_field, -omega);
            for (int k = 0; k <= N; ++k) {
                Vec2c v;
                v(0) = 0.0;
                v(1) = bwd.coeff(k)(0) + fwd.coeff(k)(1);
                stencil_term.set_coeff(k, v);
            }
        }

        PeriodicField out(N);
        double f = 2.0 * p.c * p.c * omega;
        for (int k = 0; k <= N; ++k) {
            Vec2c v = phi.coeff(k);
            double k2 = static_cast<double>(k) * k;
            v(0) *= -f * k2;
            v(1) *= -f * k2 * mat.m;
            out.set_coeff(k, v);
        }
        out -= stencil_term;
        out -= chain;
        return out;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const {
        PeriodicField phi = unpack_field(u, N);
        double omega = u(omega_index());
        double gamma = u(gamma_index());
        Eigen::MatrixXd J(n_dofs, n_dofs);

        Eigen::VectorXd basis = Eigen::VectorXd::Zero(n_dofs);
        for (int col = 0; col < field_dofs(N); ++col) {
            basis.setZero();
            basis(col) = 1.0;
            PeriodicField e = unpack_field(basis, N);
            J.col(col) = pack_equations(linearized(phi, omega, gamma, e), e, false);
        }
        {
            PeriodicField zero(N);
            Eigen::VectorXd col = pack_equations(omega_derivative(phi, omega), zero, false);
            J.col(omega_index()) = col;
            col = pack_equations(derivative(phi, 1), zero, false);
            J.col(gamma_index()) = col;
        }
        return J;
    }
};

}  // namespace

BranchPoint solve_point_newton(const WaveProblem& p, const LinearData& data, double a,
                               const SolverConfig& config, const BranchPoint* initial) {
    BorderedSystem sys(p, data, a);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.n_dofs);
    if (initial && initial->converged) {
        PeriodicField phi0 = initial->assemble_phi(data).retruncated(p.truncation);
        pack_field(phi0, p.truncation, u);
        u(sys.omega_index()) = initial->omega;
    } else {
        PeriodicField phi0 = a * data.nu1.retruncated(p.truncation);
        pack_field(phi0, p.truncation, u);
        u(sys.omega_index()) = data.omega_c;
    }

    std::vector<double> history;
    bool converged = false;
    int iterations = 0;
    for (int it = 1; it <= config.max_iter; ++it) {
        Eigen::VectorXd F = sys.residual(u);
        double fnorm = F.lpNorm<Eigen::Infinity>();
        history.push_back(fnorm);
        iterations = it;
        if (fnorm < 1e-12) {
            converged = true;
            break;
        }
        Eigen::MatrixXd J = sys.jacobian(u);
        Eigen::VectorXd step = J.partialPivLu().solve(-F);
        if (!step.allFinite())
            throw NonConvergenceError("solve_point_newton: singular Jacobian", history);
        u += step;
    }
    if (!converged)
        throw NonConvergenceError("solve_point_newton: max iterations reached", history);

    BranchPoint out;
    out.a = a;
    out.omega = u(sys.omega_index());
    out.gamma = u(sys.gamma_index());
    out.xi = a != 0.0 ? (out.omega - data.omega_c) / a : 0.0;
    out.iterations = iterations;
    out.converged = true;

    PeriodicField phi = unpack_field(u, p.truncation);
    if (a != 0.0) {
        PeriodicField psi = (1.0 / a) * phi;
        psi -= data.nu1.retruncated(p.truncation);
        out.psi = psi;
    } else {
        out.psi = PeriodicField(p.truncation);
    }
    out.phi_residual = l2_norm(phi_op(p, phi, out.omega));
    out.kernel_ortho_defect = std::max({std::abs(inner_product(out.psi, data.nu0)),
                                        std::abs(inner_product(out.psi, data.nu1)),
                                        std::abs(inner_product(out.psi, data.nu2))});
    out.nu2_pairing = inner_product(phi_op(p, phi, out.omega), data.nu2);
    return out;
}

}  // namespace dimerwave
