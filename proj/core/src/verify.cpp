#include "dimerwave/verify.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dimerwave/errors.hpp"
#include "dimerwave/linear.hpp"
#include "dimerwave/rng.hpp"
#include "dimerwave/solver.hpp"
#include "dimerwave/symmetry.hpp"
#include "dimerwave/wave_operator.hpp"

namespace dimerwave {

namespace {

const double kPi = std::numbers::pi_v<double>;
const std::vector<double> kSpeedRatios = {1.01, 1.1, 1.5, 2.0, 3.0};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

PeriodicField random_field(Rng& rng, int truncation, double amplitude, double decay = 0.35) {
    PeriodicField f(truncation);
    f.set_coeff(0, Vec2c(Complex(amplitude * rng.normal(), 0.0),
                         Complex(amplitude * rng.normal(), 0.0)));
    for (int k = 1; k <= truncation; ++k) {
        double w = amplitude * std::exp(-decay * k);
        f.set_coeff(k, Vec2c(Complex(w * rng.normal(), w * rng.normal()),
                             Complex(w * rng.normal(), w * rng.normal())));
    }
    return f;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Context {
    VerifySetup setup;
    double c = 0.0;
    WaveProblem p32;
    LinearData d32;
    WaveProblem p64;
    Branch branch32;
    Branch branch64;
    std::vector<double> amps32;
};

CriterionResult make_result(const std::string& name, bool pass, const std::string& detail) {
    return CriterionResult{name, pass, detail};
}

// 1. Closed-form dispersion vs direct eigendecomposition, and the
//    determinant identity lambda+ lambda- = 4 kappa w sin^2 K.
CriterionResult criterion_dispersion(Context& ctx) {
    Rng rng(ctx.setup.seed * 1000 + 1);
    double worst_eig = 0.0, worst_det = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        double kappa = rng.uniform(0.2, 5.0);
        double w = rng.uniform(0.2, 5.0);
        double K = rng.uniform(0.0, 2.0 * kPi);
        Material mat = Material::dimer(1.0 / w, kappa);
        DispersionPoint d = dispersion(mat, K);

        double sw = std::sqrt(w);
        Mat2c D = symbol_D(mat, K);
        Mat2c H;
        H(0, 0) = D(0, 0);
        H(0, 1) = sw * D(0, 1);
        H(1, 0) = sw * D(1, 0);
        H(1, 1) = w * D(1, 1);
        Eigen::SelfAdjointEigenSolver<Mat2c> es(H, Eigen::EigenvaluesOnly);
        double scale = std::max(1.0, std::abs(d.lambda_plus));
        worst_eig = std::max({worst_eig, std::abs(es.eigenvalues()(1) - d.lambda_plus) / scale,
                              std::abs(es.eigenvalues()(0) - d.lambda_minus) / scale});

        double det_expected = 4.0 * kappa * w * std::sin(K) * std::sin(K);
        worst_det = std::max(worst_det, std::abs(d.lambda_plus * d.lambda_minus - det_expected) /
                                            std::max(1.0, std::abs(det_expected)));
    }
    bool pass = worst_eig <= 1e-10 && worst_det <= 1e-10;
    return make_result("dispersion oracle equivalence", pass,
                       "max eigensolve rel err " + fmt(worst_eig) + ", max det identity err " +
                           fmt(worst_det));
}

// 2. Critical frequency: bracket, defining residual, frequency transversality.
CriterionResult criterion_critical_frequency(Context& ctx) {
    const Material& mat = ctx.setup.material;
    double cs = speed_of_sound(mat);
    double worst_res = 0.0, worst_margin = 1e300;
    bool brackets = true;
    for (double ratio : kSpeedRatios) {
        double c = ratio * cs;
        double wc = critical_frequency(mat, c);
        double lo = std::sqrt(dispersion(mat, kPi / 2.0).lambda_plus) / c;
        double hi = std::sqrt((1.0 + mat.kappa) * (1.0 + mat.w)) / c;
        brackets = brackets && (wc >= lo - 1e-12) && (wc <= hi + 1e-12);
        double res = std::abs(c * c * wc * wc - dispersion(mat, wc).lambda_plus);
        worst_res = std::max(worst_res, res);
        DispersionPoint d = dispersion(mat, wc);
        double lpp = -4.0 * mat.kappa * mat.w * std::sin(2.0 * wc) / d.rho;
        worst_margin = std::min(worst_margin, 2.0 * c * c * wc - lpp);
    }
    bool pass = brackets && worst_res < 1e-12 && worst_margin > 0.0;
    return make_result("critical frequency brackets and residual", pass,
                       "max residual " + fmt(worst_res) + ", min 2c^2 w - lambda+' margin " +
                           fmt(worst_margin) + (brackets ? "" : ", bracket violated"));
}

// 3. Kernel and adjoint kernel, plus nonsingularity of the far modes.
CriterionResult criterion_kernel(Context& ctx) {
    const LinearData& d = ctx.d32;
    MultiplierSymbol L = d.op_L();
    MultiplierSymbol Lstar = d.op_L_adjoint();
    double worst_k = 0.0, worst_a = 0.0;
    const PeriodicField* nus[3] = {&d.nu0, &d.nu1, &d.nu2};
    for (const PeriodicField* nu : nus) {
        worst_k = std::max(worst_k, l2_norm(apply_symbol(L, *nu)));
        worst_a = std::max(worst_a, l2_norm(apply_symbol(Lstar, *nu)));
    }
    double worst_ortho = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            worst_ortho = std::max(worst_ortho, std::abs(inner_product(*nus[i], *nus[j]) -
                                                         (i == j ? 1.0 : 0.0)));
    double shift_defect = l2_norm(d.nu2 - shift(d.nu1, -kPi / 2.0));
    double min_sv = 1e300;
    for (int k = 2; k <= ctx.p32.truncation; ++k) {
        Mat2c Lk = symbol_L(d.material, d.c, d.omega_c * k);
        Eigen::JacobiSVD<Mat2c> svd(Lk);
        min_sv = std::min(min_sv, svd.singularValues()(1));
    }
    bool pass = worst_k < 1e-11 && worst_a < 1e-11 && worst_ortho <= 1e-12 &&
                shift_defect < 1e-13 && min_sv > 1e-6;
    return make_result("kernel and adjoint kernel", pass,
                       "|L nu| " + fmt(worst_k) + ", |L* nu| " + fmt(worst_a) + ", ortho " +
                           fmt(worst_ortho) + ", shift " + fmt(shift_defect) + ", min sv " +
                           fmt(min_sv));
}

// 4. Transversality two ways at every sampled speed.
CriterionResult criterion_transversality(Context& ctx) {
    const Material& mat = ctx.setup.material;
    double cs = speed_of_sound(mat);
    double worst_rel = 0.0, worst_cross = 0.0, worst_sym = 0.0;
    int sign_ref = 0;
    bool sign_constant = true;
    for (double ratio : kSpeedRatios) {
        LinearData d = kernel_basis(mat, ratio * cs, ctx.p32.truncation);
        TransversalityCheck tc = transversality(d);
        worst_rel = std::max(worst_rel,
                             std::abs(tc.numeric - tc.closed_form) / std::abs(tc.closed_form));
        worst_cross = std::max(worst_cross, std::abs(tc.cross));
        worst_sym = std::max(worst_sym, std::abs(tc.nu2_nu2 - tc.numeric) /
                                            std::max(1.0, std::abs(tc.numeric)));
        int s = tc.numeric > 0.0 ? 1 : -1;
        if (sign_ref == 0) sign_ref = s;
        sign_constant = sign_constant && (s == sign_ref);
    }
    bool pass = worst_rel <= 1e-8 && worst_cross < 1e-11 && worst_sym <= 1e-10 && sign_constant;
    return make_result("transversality cross-check", pass,
                       "two-route rel err " + fmt(worst_rel) + ", <L'nu1,nu2> " +
                           fmt(worst_cross) + ", nu2 identity rel err " + fmt(worst_sym) +
                           (sign_constant ? "" : ", sign not constant"));
}

// 5. Gradient structure: central differences of G_c converge to <Phi, eta>
//    at order >= 1.9, derivative orthogonality, range orthogonal to nu0.
CriterionResult criterion_gradient(Context& ctx) {
    Rng rng(ctx.setup.seed * 1000 + 5);
    const WaveProblem& p = ctx.p32;
    double worst_order = 3.0, worst_deriv = 0.0, worst_nu0 = 0.0;
    const double hs[3] = {1e-2, 1e-3, 1e-4};
    for (int trial = 0; trial < 20; ++trial) {
        PeriodicField phi = random_field(rng, p.truncation, 0.5);
        PeriodicField eta = random_field(rng, p.truncation, 0.4);
        double omega = ctx.d32.omega_c + rng.uniform(-0.3, 0.3);
        PeriodicField Phi = phi_op(p, phi, omega);
        double pairing = inner_product(Phi, eta);
        double g_scale = 1.0 + std::abs(energy(p, phi, omega).total);

        double err[3];
        for (int i = 0; i < 3; ++i) {
            double h = hs[i];
            PeriodicField plus = phi + h * eta;
            PeriodicField minus = phi - h * eta;
            double fd = (energy(p, plus, omega).total - energy(p, minus, omega).total) / (2.0 * h);
            err[i] = std::abs(fd - pairing);
        }
        for (int i = 0; i < 2; ++i) {
            // Central differences carry eps |G| / h of cancellation noise;
            // once an error sits at that floor the identity already holds to
            // machine precision and the step cannot reduce it further.
            double noise = 1e-16 * g_scale / hs[i + 1];
            double order = (err[i + 1] <= 100.0 * noise) ? 2.0 : std::log10(err[i] / err[i + 1]);
            worst_order = std::min(worst_order, order);
        }

        PeriodicField dphi = derivative(phi, 1);
        double scale = 1.0 + l2_norm(Phi) * l2_norm(dphi);
        worst_deriv = std::max(worst_deriv, std::abs(inner_product(Phi, dphi)) / scale);
        worst_nu0 = std::max(worst_nu0, std::abs(inner_product(Phi, ctx.d32.nu0)));
    }
    bool pass = worst_order >= 1.9 && worst_deriv < 1e-11 && worst_nu0 < 1e-12;
    return make_result("gradient structure", pass,
                       "min FD order " + fmt(worst_order) + ", derivative ortho " +
                           fmt(worst_deriv) + ", <Phi,nu0> " + fmt(worst_nu0));
}

// 6. First integral: pairing identity on random fields, constancy on
//    solved branch points.
CriterionResult criterion_first_integral(Context& ctx) {
    Rng rng(ctx.setup.seed * 1000 + 6);
    const WaveProblem& p = ctx.p32;
    double worst_pair = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        PeriodicField phi = random_field(rng, p.truncation, 0.4);
        double omega = ctx.d32.omega_c + rng.uniform(-0.3, 0.3);
        FirstIntegralTrace tr = first_integral(p, phi, omega);
        worst_pair = std::max(worst_pair, tr.pairing_residual);
    }
    double worst_tv = 0.0;
    auto scan = [&](const Branch& br, const WaveProblem& prob) {
        for (const BranchPoint& pt : br.points) {
            PeriodicField phi = pt.assemble_phi(br.linear);
            FirstIntegralTrace tr = first_integral(prob, phi, pt.omega);
            worst_tv = std::max(worst_tv, tr.total_variation);
        }
    };
    scan(ctx.branch32, ctx.p32);
    scan(ctx.branch64, ctx.p64);
    bool pass = worst_pair <= 1e-9 && worst_tv < 1e-8;
    return make_result("first integral", pass,
                       "pairing residual " + fmt(worst_pair) + ", max J variation on branch " +
                           fmt(worst_tv));
}

// 7. Branch solve at N=64 (and the default truncation): convergence budget,
//    residuals, orthogonality, bounded remainders, Lipschitz uniformity.
CriterionResult criterion_branch(Context& ctx) {
    bool pass = true;
    std::ostringstream detail;
    for (const Branch* brp : {&ctx.branch64, &ctx.branch32}) {
        const Branch& br = *brp;
        bool all_conv = !br.truncated && br.points.size() == ctx.amps32.size();
        int max_iter = 0;
        double worst_res = 0.0, worst_ortho = 0.0;
        for (const BranchPoint& pt : br.points) {
            all_conv = all_conv && pt.converged;
            max_iter = std::max(max_iter, pt.iterations);
            worst_res = std::max(worst_res, pt.phi_residual);
            worst_ortho = std::max(worst_ortho, pt.kernel_ortho_defect);
        }
        std::vector<double> psi_ratios, xi_ratios;
        for (size_t i = 1; i < br.points.size(); ++i) {
            double da = br.points[i].a - br.points[i - 1].a;
            psi_ratios.push_back(sobolev_norm(br.points[i].psi - br.points[i - 1].psi, 2.0) /
                                 da);
            xi_ratios.push_back(std::abs(br.points[i].omega - br.points[i - 1].omega) / da);
        }
        double psi_med = median(psi_ratios), xi_med = median(xi_ratios);
        double psi_max = psi_ratios.empty() ? 0.0 : *std::max_element(psi_ratios.begin(), psi_ratios.end());
        double xi_max = xi_ratios.empty() ? 0.0 : *std::max_element(xi_ratios.begin(), xi_ratios.end());
        bool lipschitz_uniform = psi_max <= 10.0 * (psi_med + 1e-300) &&
                                 xi_max <= 10.0 * (xi_med + 1e-300);
        bool ok = all_conv && max_iter <= 60 && worst_res < 1e-10 && worst_ortho <= 1e-10 &&
                  std::isfinite(br.sup_psi_h2) && std::isfinite(br.sup_abs_xi) &&
                  lipschitz_uniform;
        pass = pass && ok;
        detail << "N=" << (brp == &ctx.branch64 ? ctx.p64.truncation : ctx.p32.truncation)
               << ": iters<=" << max_iter << ", res " << fmt(worst_res) << ", ortho "
               << fmt(worst_ortho) << ", sup|psi|_H2 " << fmt(br.sup_psi_h2) << ", sup|xi| "
               << fmt(br.sup_abs_xi) << ", Lip(psi) " << fmt(psi_max) << ", Lip(xi) "
               << fmt(xi_max) << "; ";
    }
    return make_result("branch solve", pass, detail.str());
}

// 8. Lyapunov-center mode agrees with the fixed-point mode and returns gamma ~ 0.
CriterionResult criterion_lyapunov_center(Context& ctx) {
    SolverConfig cfg;
    cfg.mode = SolverMode::lyapunov_center;
    cfg.truncation = ctx.p32.truncation;
    double worst_phi = 0.0, worst_omega = 0.0, worst_gamma = 0.0;
    bool pass = true;
    size_t idx[3] = {ctx.branch32.points.size() / 4, ctx.branch32.points.size() / 2,
                     ctx.branch32.points.size() - 1};
    for (size_t i : idx) {
        const BranchPoint& fp = ctx.branch32.points[i];
        try {
            BranchPoint lc = solve_point(ctx.p32, ctx.d32, fp.a, cfg);
            worst_phi = std::max(worst_phi, l2_norm(lc.assemble_phi(ctx.d32) -
                                                    fp.assemble_phi(ctx.d32)));
            worst_omega = std::max(worst_omega, std::abs(lc.omega - fp.omega));
            worst_gamma = std::max(worst_gamma, std::abs(lc.gamma));
        } catch (const NonConvergenceError&) {
            pass = false;
        }
    }
    pass = pass && worst_phi <= 1e-9 && worst_omega <= 1e-9 && worst_gamma < 1e-10;
    return make_result("lyapunov-center consistency", pass,
                       "|phi diff| " + fmt(worst_phi) + ", |omega diff| " + fmt(worst_omega) +
                           ", |gamma| " + fmt(worst_gamma));
}

// 9. Independent Newton oracle reproduces the fixed-point solutions.
CriterionResult criterion_newton(Context& ctx) {
    SolverConfig cfg;
    cfg.truncation = ctx.p32.truncation;
    double worst_phi = 0.0, worst_omega = 0.0;
    bool pass = true;
    size_t idx[3] = {ctx.branch32.points.size() / 4, ctx.branch32.points.size() / 2,
                     ctx.branch32.points.size() - 1};
    for (size_t i : idx) {
        const BranchPoint& fp = ctx.branch32.points[i];
        try {
            BranchPoint nw = solve_point_newton(ctx.p32, ctx.d32, fp.a, cfg);
            worst_phi = std::max(worst_phi, l2_norm(nw.assemble_phi(ctx.d32) -
                                                    fp.assemble_phi(ctx.d32)));
            worst_omega = std::max(worst_omega, std::abs(nw.omega - fp.omega));
        } catch (const NonConvergenceError&) {
            pass = false;
        }
    }
    pass = pass && worst_phi <= 1e-9 && worst_omega <= 1e-9;
    return make_result("newton oracle agreement", pass,
                       "|phi diff| " + fmt(worst_phi) + ", |omega diff| " + fmt(worst_omega));
}

// 10. Physical Newton-law residual on the lattice at random (j, t) samples.
CriterionResult criterion_lattice(Context& ctx) {
    Rng rng(ctx.setup.seed * 1000 + 10);
    double worst = 0.0;
    auto scan = [&](const Branch& br, const WaveProblem& prob) {
        for (const BranchPoint& pt : br.points) {
            std::vector<LatticeSample> samples;
            samples.reserve(100);
            for (int s = 0; s < 100; ++s)
                samples.emplace_back(rng.integer(-50, 50), rng.uniform(0.0, 20.0));
            PeriodicField phi = pt.assemble_phi(br.linear);
            worst = std::max(worst, lattice_residual(prob, phi, pt.omega, samples));
        }
    };
    scan(ctx.branch32, ctx.p32);
    scan(ctx.branch64, ctx.p64);
    bool pass = worst < 1e-8;
    return make_result("lattice residual", pass, "max Newton-law residual " + fmt(worst));
}

// 11. Coercivity constants: uniform over the speed grid and random data,
//     and below the closed-form bound.
CriterionResult criterion_coercivity(Context& ctx) {
    Rng rng(ctx.setup.seed * 1000 + 11);
    const Material& mat = ctx.setup.material;
    double cs = speed_of_sound(mat);
    double cmin = 1e300, cmax = 0.0;
    for (double ratio : kSpeedRatios) {
        LinearData d = kernel_basis(mat, ratio * cs, ctx.p32.truncation);
        for (int trial = 0; trial < 50; ++trial) {
            PeriodicField eta = project_complement(d, random_field(rng, ctx.p32.truncation, 1.0));
            double C = 0.0;
            coercive_solve(d, eta, &C);
            cmin = std::min(cmin, C);
            cmax = std::max(cmax, C);
        }
    }
    double bound = coercivity_bound(mat);
    bool pass = cmax < 10.0 * cmin && cmax <= bound;
    return make_result("coercivity uniformity", pass,
                       "C in [" + fmt(cmin) + ", " + fmt(cmax) + "], bound " + fmt(bound));
}

// 12. Symmetry on the pinned dimer pair: the mass dimer (kappa=1, w=2)
//     solved point is symmetric up to phase; the spring dimer (kappa=2, w=1)
//     symmetric basis satisfies its defining identities.
CriterionResult criterion_symmetry(Context& ctx) {
    Material mass_mat = Material::dimer(0.5, 1.0, 1.0);
    WaveProblem mp = WaveProblem::make(mass_mat, std::sqrt(ctx.setup.c2), ctx.p32.truncation);
    LinearData md = kernel_basis(mass_mat, mp.c, mp.truncation);
    SolverConfig cfg;
    cfg.truncation = mp.truncation;
    BranchPoint pt = solve_point(mp, md, 1e-3, cfg);
    AlignedDefect ad =
        check_solution_symmetry(SymmetryOp{SymmetryKind::mass}, pt.assemble_phi(md));

    Material spring_mat = Material::dimer(1.0, 2.0, 1.0);
    LinearData sd = kernel_basis(spring_mat, std::sqrt(ctx.setup.c2), ctx.p32.truncation);
    SymmetryOp spring{SymmetryKind::spring};
    SymmetricBasis sb = symmetric_basis(spring, sd);
    double d_plus = l2_norm(apply_symmetry(spring, sb.nu_plus) - sb.nu_plus);
    double d_minus = l2_norm(apply_symmetry(spring, sb.nu_minus) + sb.nu_minus);
    MultiplierSymbol Lp = sd.op_L_prime();
    double t_plus = inner_product(apply_symbol(Lp, sb.nu_plus), sb.nu_plus);
    double t_one = inner_product(apply_symbol(Lp, sd.nu1), sd.nu1);
    double t_rel = std::abs(t_plus - t_one) / std::max(1.0, std::abs(t_one));

    bool pass = ad.defect < 1e-9 && d_plus <= 1e-12 && d_minus <= 1e-12 && t_rel <= 1e-10;
    return make_result("symmetry", pass,
                       "mass-dimer aligned defect " + fmt(ad.defect) + ", |S nu+ - nu+| " +
                           fmt(d_plus) + ", |S nu- + nu-| " + fmt(d_minus) +
                           ", transversality identity rel err " + fmt(t_rel));
}

// 13. Long-wave scaling: convergence, frequency brackets, and the O(eps)
//     improvement of the frequency Lipschitz ratio.
CriterionResult criterion_longwave(Context& ctx) {
    const Material& mat = ctx.setup.material;
    std::vector<double> epsilons = {0.05, 0.1, 0.2};
    double cs = speed_of_sound(mat);

    // Fixed alpha grid: binding cap is at the largest epsilon.
    double alpha_max = 1e300;
    for (double eps : epsilons) {
        double c = std::sqrt(cs * cs + eps * eps);
        WaveProblem p = WaveProblem::make(mat, c, ctx.p32.truncation);
        LinearData d = kernel_basis(mat, c, p.truncation);
        alpha_max = std::min(alpha_max, amplitude_cap(p, d) / (eps * eps));
    }
    alpha_max *= 0.9;
    std::vector<double> alphas;
    for (int i = 1; i <= 5; ++i) alphas.push_back(alpha_max * i / 5.0);

    SolverConfig cfg;
    cfg.truncation = ctx.p32.truncation;
    std::vector<LongWaveBranch> lw = longwave_branches(mat, epsilons, alphas, cfg);

    bool all_converged = true, in_brackets = true, decreasing = true;
    for (const LongWaveBranch& b : lw) {
        all_converged = all_converged && !b.branch.truncated &&
                        b.branch.points.size() == alphas.size();
        double c = std::sqrt(cs * cs + b.epsilon * b.epsilon);
        double lo = std::sqrt(dispersion(mat, kPi / 2.0).lambda_plus) / c;
        double hi = std::sqrt((1.0 + mat.kappa) * (1.0 + mat.w)) / c;
        for (const LongWaveParams& par : b.params) {
            double w = b.epsilon * par.Omega;
            in_brackets = in_brackets && w >= lo - 1e-12 && w <= hi + 1e-12;
        }
    }
    std::ostringstream ratios;
    for (size_t i = 0; i < lw.size(); ++i) {
        if (i > 0) decreasing = decreasing && lw[i - 1].freq_lipschitz <= lw[i].freq_lipschitz;
        ratios << "eps=" << lw[i].epsilon << ": " << fmt(lw[i].freq_lipschitz) << " ";
    }
    bool pass = all_converged && in_brackets && decreasing;
    return make_result("long wave scaling", pass,
                       "freq Lipschitz " + ratios.str() +
                           (in_brackets ? "" : "(bracket violated) ") +
                           (all_converged ? "" : "(non-convergence) ") +
                           (decreasing ? "" : "(ratio not decreasing in eps)"));
}

}  // namespace

std::vector<CriterionResult> run_verification(const VerifySetup& setup) {
    Context ctx{setup,
                std::sqrt(setup.c2),
                WaveProblem::make(setup.material, std::sqrt(setup.c2), setup.truncation,
                                  setup.grid),
                LinearData{},
                WaveProblem::make(setup.material, std::sqrt(setup.c2), 64),
                Branch{},
                Branch{},
                {}};
    ctx.d32 = kernel_basis(setup.material, ctx.c, ctx.p32.truncation);

    // Shared branches for criteria 6-10: 20 amplitudes up to the cap.
    {
        LinearData d64 = kernel_basis(setup.material, ctx.c, ctx.p64.truncation);
        double cap = std::min(amplitude_cap(ctx.p32, ctx.d32), amplitude_cap(ctx.p64, d64));
        SolverConfig cfg;
        for (int i = 1; i <= 20; ++i) ctx.amps32.push_back(cap * i / 20.0);
        cfg.amplitudes = ctx.amps32;
        cfg.truncation = ctx.p32.truncation;
        ctx.branch32 = solve_branch(ctx.p32, cfg);
        cfg.truncation = ctx.p64.truncation;
        ctx.branch64 = solve_branch(ctx.p64, cfg);
    }

    std::vector<CriterionResult> results;
    auto guard = [&results](const std::string& name, auto&& fn) {
        try {
            results.push_back(fn());
        } catch (const std::exception& e) {
            results.push_back(CriterionResult{name, false, std::string("exception: ") + e.what()});
        }
    };
    guard("dispersion oracle equivalence", [&] { return criterion_dispersion(ctx); });
    guard("critical frequency brackets and residual",
          [&] { return criterion_critical_frequency(ctx); });
    guard("kernel and adjoint kernel", [&] { return criterion_kernel(ctx); });
    guard("transversality cross-check", [&] { return criterion_transversality(ctx); });
    guard("gradient structure", [&] { return criterion_gradient(ctx); });
    guard("first integral", [&] { return criterion_first_integral(ctx); });
    guard("branch solve", [&] { return criterion_branch(ctx); });
    guard("lyapunov-center consistency", [&] { return criterion_lyapunov_center(ctx); });
    guard("newton oracle agreement", [&] { return criterion_newton(ctx); });
    guard("lattice residual", [&] { return criterion_lattice(ctx); });
    guard("coercivity uniformity", [&] { return criterion_coercivity(ctx); });
    guard("symmetry", [&] { return criterion_symmetry(ctx); });
    guard("long wave scaling", [&] { return criterion_longwave(ctx); });
    return results;
}

}  // namespace dimerwave
