#include "dimerwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

namespace {

constexpr double kKernelOrthoTol = 1e-10;
constexpr double kGammaTol = 1e-10;

double transversality_pairing(const LinearData& data) {
    // The discrete pairing <L' nu1, nu1>, consistent with the operators the
    // iteration applies (agrees with the closed form to 1e-8 relative).
    return inner_product(apply_symbol(data.op_L_prime(), data.nu1), data.nu1);
}

struct SchemeContext {
    const WaveProblem& p;
    const LinearData& data;
    double pairing;           // <L' nu1, nu1>
    PeriodicField lp_nu1;     // L' nu1

    SchemeContext(const WaveProblem& prob, const LinearData& d)
        : p(prob), data(d), pairing(transversality_pairing(d)),
          lp_nu1(apply_symbol(d.op_L_prime(), d.nu1)) {}

    double P(const PeriodicField& eta) const { return inner_product(eta, data.nu1) / pairing; }
};

}  // namespace

PeriodicField BranchPoint::assemble_phi(const LinearData& data) const {
    PeriodicField phi = data.nu1.retruncated(psi.truncation());
    phi += psi;
    phi *= a;
    return phi;
}

PeriodicField project_kernel(const LinearData& data, const PeriodicField& eta) {
    PeriodicField out = inner_product(eta, data.nu1) * data.nu1;
    out += inner_product(eta, data.nu2) * data.nu2;
    return out.retruncated(eta.truncation());
}

PeriodicField project_complement(const LinearData& data, const PeriodicField& eta) {
    PeriodicField out = eta;
    out -= project_kernel(data, eta).retruncated(eta.truncation());
    out -= (inner_product(eta, data.nu0) * data.nu0).retruncated(eta.truncation());
    return out;
}

PeriodicField remainder_R(const WaveProblem& p, const LinearData& data, const PeriodicField& psi,
                          double xi, double a) {
    PeriodicField R = apply_symbol(data.op_L(), psi);
    PeriodicField lp_nu1 = apply_symbol(data.op_L_prime(), data.nu1);
    R += xi * lp_nu1.retruncated(psi.truncation());
    if (a != 0.0) {
        PeriodicField phi = data.nu1.retruncated(psi.truncation());
        phi += psi;
        phi *= a;
        R -= (1.0 / a) * phi_op(p, phi, data.omega_c + xi);
    } else {
        // Analytic limit: a^{-1} Phi(a(nu1+psi), omega_c+xi) -> L[omega_c+xi](nu1+psi).
        const Material mat = p.material;
        double c = p.c, w = data.omega_c + xi;
        MultiplierSymbol L_shifted{
            [mat, c, w](double K) { return symbol_L(mat, c, w * K); }};
        PeriodicField sum = data.nu1.retruncated(psi.truncation());
        sum += psi;
        R -= apply_symbol(L_shifted, sum);
    }
    return R;
}

std::pair<PeriodicField, double> fixed_point_step(const WaveProblem& p, const LinearData& data,
                                                  const PeriodicField& psi, double xi, double a) {
    SchemeContext ctx(p, data);
    PeriodicField R = remainder_R(p, data, psi, xi, a);
    PeriodicField rhs = R;
    rhs -= ctx.P(R) * ctx.lp_nu1.retruncated(rhs.truncation());
    PeriodicField psi_next = coercive_solve(data, project_complement(data, rhs));
    double xi_next = ctx.P(remainder_R(p, data, psi_next, xi, a));
    return {psi_next, xi_next};
}

double amplitude_cap(const WaveProblem& p, const LinearData& data) {
    // |Phi(h nu1, omega_c)| / h^2 isolates the quadratic term for small h.
    const double h = 1e-3;
    PeriodicField probe = h * data.nu1.retruncated(p.truncation);
    double quad = l2_norm(phi_op(p, probe, data.omega_c)) / (h * h);
    double pairing = std::abs(transversality_pairing(data));
    return 1e-2 * pairing / std::max(quad, 1e-12);
}

BranchPoint solve_point(const WaveProblem& p, const LinearData& data, double a,
                        const SolverConfig& config, const BranchPoint* warm_start) {
    double cap = config.amplitude_cap > 0.0 ? config.amplitude_cap : amplitude_cap(p, data);
    if (std::abs(a) > cap) {
        std::ostringstream os;
        os << "solve_point: amplitude " << a << " above configured cap " << cap;
        throw DomainError(os.str());
    }

    if (a == 0.0) {
        BranchPoint trivial;
        trivial.a = 0.0;
        trivial.omega = data.omega_c;
        trivial.psi = PeriodicField(p.truncation);
        trivial.iterations = 0;
        trivial.converged = true;
        return trivial;
    }

    SchemeContext ctx(p, data);
    const bool lc = config.mode == SolverMode::lyapunov_center;

    PeriodicField psi(p.truncation);
    double xi = 0.0;
    if (warm_start && warm_start->converged) {
        psi = warm_start->psi.retruncated(p.truncation);
        xi = warm_start->omega - data.omega_c;
    }

    BranchPoint out;
    out.a = a;
    std::vector<double> history;
    double gamma = 0.0;
    double first_increment = -1.0;
    const double theta = config.relaxation;

    for (int it = 1; it <= config.max_iter; ++it) {
        PeriodicField R = remainder_R(p, data, psi, xi, a);
        PeriodicField rhs = R;
        rhs -= ctx.P(R) * ctx.lp_nu1.retruncated(rhs.truncation());
        rhs = project_complement(data, rhs);
        if (lc) {
            gamma = -inner_product(R, data.nu2);
            rhs -= gamma * derivative(psi, 1);
        }
        PeriodicField psi_next = coercive_solve(data, rhs);
        double xi_next = ctx.P(remainder_R(p, data, psi_next, xi, a));

        if (theta != 1.0) {
            psi_next = psi + theta * (psi_next - psi);
            xi_next = xi + theta * (xi_next - xi);
        }
        double inc = sobolev_norm(psi_next - psi, 2.0) + std::abs(xi_next - xi);
        history.push_back(inc);
        psi = psi_next;
        xi = xi_next;
        out.iterations = it;

        if (!std::isfinite(inc))
            throw NonConvergenceError("solve_point: iteration diverged (non-finite increment)",
                                      history);
        if (first_increment < 0.0) first_increment = inc;
        if (it > 5 && inc > 1e3 * (first_increment + 1.0))
            throw NonConvergenceError("solve_point: iteration diverging", history);
        if (inc < config.tol_increment) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged)
        throw NonConvergenceError("solve_point: max iterations reached", history);

    out.psi = psi;
    out.omega = data.omega_c + xi;
    out.xi = a != 0.0 ? xi / a : 0.0;
    out.gamma = lc ? gamma : 0.0;

    PeriodicField phi = out.assemble_phi(data);
    PeriodicField Phi = phi_op(p, phi, out.omega);
    out.phi_residual = l2_norm(Phi);
    out.kernel_ortho_defect = std::max({std::abs(inner_product(psi, data.nu0)),
                                        std::abs(inner_product(psi, data.nu1)),
                                        std::abs(inner_product(psi, data.nu2))});
    out.nu2_pairing = inner_product(Phi, data.nu2);

    if (out.phi_residual > config.residual_tol) {
        std::ostringstream os;
        os << "solve_point: converged iterate fails |Phi| = " << out.phi_residual
           << " <= " << config.residual_tol;
        throw NonConvergenceError(os.str(), history);
    }
    if (out.kernel_ortho_defect > kKernelOrthoTol)
        throw InternalError("solve_point: psi lost kernel orthogonality");
    if (lc && std::abs(out.gamma) > kGammaTol)
        throw InternalError("solve_point: Lyapunov-center multiplier did not vanish");
    return out;
}

Branch solve_branch(const WaveProblem& p, const SolverConfig& config) {
    Branch br;
    br.linear = kernel_basis(p.material, p.c, p.truncation);

    std::vector<double> amps = config.amplitudes;
    std::sort(amps.begin(), amps.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });

    const BranchPoint* prev = nullptr;
    for (double a : amps) {
        bool solved = false;
        try {
            BranchPoint pt = solve_point(p, br.linear, a, config, prev);
            br.points.push_back(std::move(pt));
            solved = true;
        } catch (const NonConvergenceError&) {
            if (prev != nullptr) {
                // Restart from zero before giving up on the branch.
                try {
                    BranchPoint pt = solve_point(p, br.linear, a, config, nullptr);
                    br.points.push_back(std::move(pt));
                    solved = true;
                } catch (const NonConvergenceError&) {
                }
            }
        }
        if (!solved) {
            br.truncated = true;
            break;
        }
        prev = &br.points.back();
    }

    // Warm starting walks outward in |a|; the stored branch is sorted by a.
    std::sort(br.points.begin(), br.points.end(),
              [](const BranchPoint& x, const BranchPoint& y) { return x.a < y.a; });

    for (size_t i = 0; i < br.points.size(); ++i) {
        const BranchPoint& pt = br.points[i];
        br.sup_psi_h2 = std::max(br.sup_psi_h2, sobolev_norm(pt.psi, 2.0));
        br.sup_abs_xi = std::max(br.sup_abs_xi, std::abs(pt.xi));
        if (i > 0) {
            const BranchPoint& q = br.points[i - 1];
            double da = std::abs(pt.a - q.a);
            if (da > 0.0) {
                br.psi_lipschitz =
                    std::max(br.psi_lipschitz, sobolev_norm(pt.psi - q.psi, 2.0) / da);
                br.xi_lipschitz =
                    std::max(br.xi_lipschitz, std::abs(pt.omega - q.omega) / da);
            }
        }
    }
    return br;
}

std::vector<LongWaveBranch> longwave_branches(const Material& mat,
                                              const std::vector<double>& epsilons,
                                              const std::vector<double>& alphas,
                                              const SolverConfig& config) {
    std::vector<LongWaveBranch> out;
    double cs = speed_of_sound(mat);
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps < 1.0))
            throw DomainError("longwave_branches: epsilon must lie in (0, 1)");
        LongWaveBranch lw;
        lw.epsilon = eps;
        double c = std::sqrt(cs * cs + eps * eps);
        WaveProblem p = WaveProblem::make(mat, c, config.truncation, config.grid);
        SolverConfig cfg = config;
        cfg.amplitudes.clear();
        for (double alpha : alphas) cfg.amplitudes.push_back(alpha * eps * eps);
        lw.branch = solve_branch(p, cfg);

        for (const BranchPoint& pt : lw.branch.points) {
            LongWaveParams par;
            par.epsilon = eps;
            par.a = pt.a;
            par.alpha = pt.a / (eps * eps);
            par.c = c;
            par.Omega = pt.omega / eps;
            PeriodicField phi = pt.assemble_phi(lw.branch.linear);
            par.profile_sup = sup_norm(phi, p.grid);
            par.profile_deriv_sup = sup_norm(derivative(phi, 2), p.grid);
            lw.params.push_back(par);
        }
        for (size_t i = 1; i < lw.params.size(); ++i) {
            double dal = std::abs(lw.params[i].alpha - lw.params[i - 1].alpha);
            if (dal > 0.0)
                lw.freq_lipschitz = std::max(
                    lw.freq_lipschitz,
                    std::abs(lw.params[i].Omega - lw.params[i - 1].Omega) / dal);
        }
        out.push_back(std::move(lw));
    }
    return out;
}

}  // namespace dimerwave
