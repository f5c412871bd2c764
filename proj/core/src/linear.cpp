#include "dimerwave/linear.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

namespace {

constexpr double kDispersionCheckTol = 1e-10;
constexpr double kRootResidualTol = 1e-13;
constexpr double kKernelResidualTol = 1e-11;
constexpr double kTransversalityAgreeTol = 1e-8;
constexpr double kOrthogonalityTol = 1e-10;

double lambda_plus(const Material& mat, double K) {
    DispersionPoint d = dispersion(mat, K);
    return d.lambda_plus;
}

double lambda_plus_deriv(const Material& mat, double K) {
    DispersionPoint d = dispersion(mat, K);
    return -4.0 * mat.kappa * mat.w * std::sin(2.0 * K) / d.rho;
}

}  // namespace

Mat2c symbol_D(const Material& mat, double K) {
    Complex eiK = std::exp(Complex(0.0, K));
    Complex emiK = std::exp(Complex(0.0, -K));
    Mat2c D;
    D(0, 0) = 1.0 + mat.kappa;
    D(0, 1) = -(eiK + mat.kappa * emiK);
    D(1, 0) = -(mat.kappa * eiK + emiK);
    D(1, 1) = 1.0 + mat.kappa;
    return D;
}

Mat2c symbol_L(const Material& mat, double c, double K) {
    Mat2c L = symbol_D(mat, K);
    double cK2 = c * c * K * K;
    L(0, 0) -= cK2;
    L(1, 1) -= cK2 * mat.m;
    return L;
}

Mat2c symbol_L_prime(const Material& mat, double c, double K) {
    Complex eiK = std::exp(Complex(0.0, K));
    Complex emiK = std::exp(Complex(0.0, -K));
    Mat2c Lp;
    Lp(0, 0) = -2.0 * c * c * K;
    Lp(0, 1) = Complex(0.0, -1.0) * (eiK - mat.kappa * emiK);
    Lp(1, 0) = Complex(0.0, -1.0) * (mat.kappa * eiK - emiK);
    Lp(1, 1) = -2.0 * c * c * K * mat.m;
    return Lp;
}

DispersionPoint dispersion(const Material& mat, double K) {
    double kp = mat.kappa, w = mat.w;
    double cK = std::cos(K);
    DispersionPoint d;
    d.rho = std::sqrt((1.0 + w) * (1.0 + w) * (1.0 - kp) * (1.0 - kp) +
                      4.0 * kp * ((1.0 - w) * (1.0 - w) + 4.0 * w * cK * cK));
    double half_trace = 0.5 * (1.0 + kp) * (1.0 + w);
    d.lambda_plus = half_trace + 0.5 * d.rho;
    d.lambda_minus = half_trace - 0.5 * d.rho;

    // Certify against a direct eigendecomposition of the similar Hermitian
    // matrix M^{-1/2} D(K) M^{-1/2}.
    double sw = std::sqrt(w);
    Mat2c D = symbol_D(mat, K);
    Mat2c H;
    H(0, 0) = D(0, 0);
    H(0, 1) = sw * D(0, 1);
    H(1, 0) = sw * D(1, 0);
    H(1, 1) = w * D(1, 1);
    Eigen::SelfAdjointEigenSolver<Mat2c> es(H, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
    double scale = std::max(1.0, std::abs(d.lambda_plus));
    if (std::abs(hi - d.lambda_plus) > kDispersionCheckTol * scale ||
        std::abs(lo - d.lambda_minus) > kDispersionCheckTol * scale) {
        std::ostringstream os;
        os << "dispersion: closed form disagrees with eigendecomposition at K=" << K;
        throw InternalError(os.str());
    }
    return d;
}

double speed_of_sound(const Material& mat) {
    return std::sqrt(4.0 * mat.kappa * mat.w / ((1.0 + mat.kappa) * (1.0 + mat.w)));
}

double critical_frequency(const Material& mat, double c) {
    double cs = speed_of_sound(mat);
    double ca = std::abs(c);
    if (!(ca > cs)) {
        std::ostringstream os;
        os << "critical_frequency: subsonic speed |c|=" << ca << " <= c_star=" << cs;
        throw DomainError(os.str());
    }
    auto f = [&](double K) { return c * c * K * K - lambda_plus(mat, K); };

    double lo = std::sqrt(lambda_plus(mat, std::numbers::pi / 2.0)) / ca;
    double hi = std::sqrt((1.0 + mat.kappa) * (1.0 + mat.w)) / ca;
    // The root can sit exactly on the upper endpoint (omega_c a multiple of
    // pi); pad it so roundoff cannot flip the endpoint sign.
    hi *= 1.0 + 1e-9;
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw InternalError("critical_frequency: bracket does not change sign");

    // Uniqueness spot check: exactly one sign change on (0, hi].
    {
        int changes = 0;
        const int samples = 512;
        double prev = f(hi / samples);
        for (int i = 2; i <= samples; ++i) {
            double cur = f(hi * i / samples);
            if (prev < 0.0 && cur >= 0.0) ++changes;
            if (prev > 0.0 && cur <= 0.0) ++changes;
            prev = cur;
        }
        if (changes > 1)
            throw InternalError("critical_frequency: multiple sign changes on the bracket");
    }

    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (std::abs(fm) < kRootResidualTol) { lo = hi = mid; break; }
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double K = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) {
        double deriv = 2.0 * c * c * K - lambda_plus_deriv(mat, K);
        if (deriv == 0.0) break;
        K -= f(K) / deriv;
    }
    if (std::abs(f(K)) > kRootResidualTol)
        throw InternalError("critical_frequency: residual above 1e-13 after refinement");
    return K;
}

MultiplierSymbol LinearData::op_L() const {
    Material mat = material;
    double cc = c, wc = omega_c;
    return {[mat, cc, wc](double K) { return symbol_L(mat, cc, wc * K); }};
}

MultiplierSymbol LinearData::op_L_prime() const {
    Material mat = material;
    double cc = c, wc = omega_c;
    return {[mat, cc, wc](double K) { return Mat2c(K * symbol_L_prime(mat, cc, wc * K)); }};
}

MultiplierSymbol LinearData::op_L_adjoint() const {
    Material mat = material;
    double cc = c, wc = omega_c;
    return {[mat, cc, wc](double K) {
        double weight = 1.0 / ((1.0 + K * K) * (1.0 + K * K));
        return Mat2c(weight * symbol_L(mat, cc, wc * K).adjoint());
    }};
}

LinearData kernel_basis(const Material& mat, double c, int truncation) {
    LinearData d;
    d.material = mat;
    d.c = c;
    d.c_star = speed_of_sound(mat);
    d.omega_c = critical_frequency(mat, c);

    Complex ei = std::exp(Complex(0.0, d.omega_c));
    Complex emi = std::exp(Complex(0.0, -d.omega_c));
    d.v1 = ei + mat.kappa * emi;
    d.v2 = 1.0 + mat.kappa - c * c * d.omega_c * d.omega_c;
    d.z1 = -2.0 * c * c * d.omega_c;
    d.z2 = ei - mat.kappa * emi;
    d.mu = Vec2c(d.v1, Complex(d.v2, 0.0));
    d.normalizer = std::sqrt(2.0) * d.mu.norm();

    d.nu0 = PeriodicField(truncation);
    d.nu0.set_coeff(0, Vec2c(Complex(1.0 / std::sqrt(2.0), 0.0),
                             Complex(1.0 / std::sqrt(2.0), 0.0)));
    d.nu1 = PeriodicField(truncation);
    d.nu1.set_coeff(1, d.mu / d.normalizer);
    d.nu2 = shift(d.nu1, -std::numbers::pi / 2.0);

    d.lambda_plus_prime = lambda_plus_deriv(mat, d.omega_c);
    DispersionPoint disp = dispersion(mat, d.omega_c);
    d.transversality = (2.0 * disp.rho * d.v2 / (mat.w * d.normalizer * d.normalizer)) *
                       (2.0 * c * c * d.omega_c - d.lambda_plus_prime);

    // c-independent nondegeneracy guarantees behind the mode-1 reductions.
    double v2_floor = (mat.w > 1.0) ? 0.5 * (1.0 + mat.kappa) * (mat.w - 1.0) : mat.kappa - 1.0;
    if (mat.w > 1.0 && mat.kappa > 1.0) v2_floor = std::max(v2_floor, mat.kappa - 1.0);
    if (std::abs(d.v2) < v2_floor * (1.0 - 1e-12))
        throw InternalError("kernel_basis: |1 + kappa - c^2 omega_c^2| below its uniform bound");
    if (!(2.0 * c * c * d.omega_c - d.lambda_plus_prime > 0.0))
        throw InternalError("kernel_basis: frequency transversality margin not positive");
    if (d.transversality == 0.0)
        throw InternalError("kernel_basis: transversality pairing vanished");

    // Certify the construction.
    MultiplierSymbol L = d.op_L();
    const PeriodicField* nus[3] = {&d.nu0, &d.nu1, &d.nu2};
    for (int i = 0; i < 3; ++i) {
        double res = l2_norm(apply_symbol(L, *nus[i]));
        if (res > kKernelResidualTol) {
            std::ostringstream os;
            os << "kernel_basis: |L nu" << i << "| = " << res << " exceeds " << kKernelResidualTol;
            throw InternalError(os.str());
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) {
            double ip = inner_product(*nus[i], *nus[j]);
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - expect) > 1e-12)
                throw InternalError("kernel_basis: basis not orthonormal");
        }
    // Orthogonality equivalence at mode 1: projecting off nu1, nu2 must zero
    // the complex pairing fhat(1) . conj(nu1hat(1)) and vice versa.
    {
        PeriodicField probe(truncation);
        probe.set_coeff(1, Vec2c(Complex(0.7, -0.3), Complex(-0.2, 0.5)));
        PeriodicField proj = probe;
        proj -= inner_product(probe, d.nu1) * d.nu1;
        proj -= inner_product(probe, d.nu2) * d.nu2;
        Complex pairing = (proj.coeff(1).cwiseProduct(d.nu1.coeff(1).conjugate())).sum();
        if (std::abs(pairing) > 1e-12)
            throw InternalError("kernel_basis: mode-1 orthogonality equivalence failed");
    }
    // Two-route transversality check.
    TransversalityCheck tc = transversality(d);
    (void)tc;
    return d;
}

TransversalityCheck transversality(const LinearData& data) {
    TransversalityCheck tc;
    MultiplierSymbol Lp = data.op_L_prime();
    PeriodicField Lp_nu1 = apply_symbol(Lp, data.nu1);
    tc.numeric = inner_product(Lp_nu1, data.nu1);
    tc.cross = inner_product(Lp_nu1, data.nu2);
    tc.nu2_nu2 = inner_product(apply_symbol(Lp, data.nu2), data.nu2);
    tc.closed_form = data.transversality;

    double scale = std::max(1e-300, std::abs(tc.closed_form));
    if (std::abs(tc.numeric - tc.closed_form) > kTransversalityAgreeTol * scale)
        throw InternalError("transversality: numeric and closed-form values disagree");
    if (std::abs(tc.cross) > kKernelResidualTol)
        throw InternalError("transversality: <L' nu1, nu2> does not vanish");
    return tc;
}

PeriodicField coercive_solve(const LinearData& data, const PeriodicField& eta,
                             double* coercivity_out) {
    const Material& mat = data.material;
    double eta_norm = l2_norm(eta);

    // Orthogonality precondition, then exact re-projection.
    PeriodicField rhs = eta;
    double defect = 0.0;
    {
        double p0 = inner_product(rhs, data.nu0);
        double p1 = inner_product(rhs, data.nu1);
        double p2 = inner_product(rhs, data.nu2);
        defect = std::max({std::abs(p0), std::abs(p1), std::abs(p2)});
        if (defect > kOrthogonalityTol * (1.0 + eta_norm)) {
            std::ostringstream os;
            os << "coercive_solve: right-hand side not orthogonal to the kernel (defect "
               << defect << ")";
            throw DomainError(os.str());
        }
        rhs -= p0 * data.nu0;
        rhs -= p1 * data.nu1;
        rhs -= p2 * data.nu2;
    }

    int N = rhs.truncation();
    PeriodicField psi(N);

    // k = 0: first component plus the translation constraint psi2 = -psi1.
    {
        Complex e1 = rhs.coeff(0)(0);
        Complex p1 = e1 / (2.0 * (1.0 + mat.kappa));
        psi.set_coeff(0, Vec2c(p1, -p1));
    }
    // |k| = 1: reduced scalar equation on the first component plus the
    // kernel-orthogonality relation psi2 = -conj(v1)/v2 psi1.
    if (N >= 1) {
        Complex e1 = rhs.coeff(1)(0);
        double denom = data.v2 * data.v2 + std::norm(data.v1);
        Complex p1 = data.v2 * e1 / denom;
        Complex p2 = -std::conj(data.v1) / data.v2 * p1;
        psi.set_coeff(1, Vec2c(p1, p2));
    }
    // |k| >= 2: direct 2x2 solves; the blocks are certified nonsingular.
    for (int k = 2; k <= N; ++k) {
        Mat2c L = symbol_L(mat, data.c, data.omega_c * k);
        Complex det = L(0, 0) * L(1, 1) - L(0, 1) * L(1, 0);
        double scale = L.cwiseAbs().maxCoeff();
        if (std::abs(det) < 1e-12 * scale * scale) {
            std::ostringstream os;
            os << "coercive_solve: singular mode block at k=" << k;
            throw InternalError(os.str());
        }
        Vec2c e = rhs.coeff(k);
        Vec2c p;
        p(0) = (L(1, 1) * e(0) - L(0, 1) * e(1)) / det;
        p(1) = (L(0, 0) * e(1) - L(1, 0) * e(0)) / det;
        psi.set_coeff(k, p);
    }

    // Certify the solve: residual and recorded coercivity constant.
    double res = l2_norm(apply_symbol(data.op_L(), psi) - rhs);
    double rhs_norm = l2_norm(rhs);
    if (res > 1e-10 * std::max(1e-300, rhs_norm))
        throw InternalError("coercive_solve: residual above 1e-10 relative");
    if (coercivity_out)
        *coercivity_out = rhs_norm > 0.0 ? sobolev_norm(psi, 2.0) / rhs_norm : 0.0;
    return psi;
}

double coercivity_bound(const Material& mat) {
    double kp = mat.kappa, w = mat.w;
    // Uniform-in-c lower bound on |v2| = |1 + kappa - c^2 omega_c^2|.
    double v2min = (w > 1.0) ? 0.5 * (1.0 + kp) * (w - 1.0) : (kp - 1.0);
    if (w > 1.0 && kp > 1.0) v2min = std::max(v2min, kp - 1.0);
    double c0 = std::sqrt(2.0) / (2.0 * (1.0 + kp));
    double v1max_sq = (1.0 + kp) * (1.0 + kp);
    double c1 = 2.0 * std::sqrt(1.0 + v1max_sq / (v2min * v2min)) / v2min;
    double c2 = 5.0 * w / (1.0 + kp);
    return 2.0 * std::max({c0, c1, c2});
}

}  // namespace dimerwave
