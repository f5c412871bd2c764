#pragma once

#include <string>
#include <vector>

namespace dimerwave {

/// Dense polynomial p(r) = sum_i coeff[i] r^i, evaluated by Horner's scheme.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    double operator()(double r) const;
    Polynomial derivative() const;
    /// Antiderivative with P(0) = 0.
    Polynomial antiderivative() const;

    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    double coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0.0;
    }
    const std::vector<double>& coeffs() const { return c_; }

private:
    void trim();
    std::vector<double> c_;
};

/// Material data of a dimer lattice: odd-indexed particles have mass 1,
/// even-indexed mass m, and the two alternating spring forces are
/// polynomials V1'(r) = r + a_{1,2} r^2 + ... and V2'(r) = kappa r + beta r^2 + ...
/// The linear coefficients are pinned exactly (1 and kappa).
struct Material {
    double m = 1.0;      // even-particle mass
    double w = 1.0;      // 1/m
    double kappa = 1.0;  // linear coefficient of the second spring
    double beta = 1.0;   // quadratic coefficient of the second spring
    Polynomial force1;   // V1' with zero constant term
    Polynomial force2;   // V2' with zero constant term

    /// Default dimer: V1'(r) = r + r^2, V2'(r) = kappa r + beta r^2.
    static Material dimer(double m, double kappa, double beta = 1.0);
    /// Dimer with explicit force tails: lists are coefficients of r, r^2, ...
    static Material dimer_with_forces(double m, std::vector<double> force1,
                                      std::vector<double> force2);

    int max_force_degree() const { return std::max(force1.degree(), force2.degree()); }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks the standing hypotheses: heterogeneity at the linear level
/// (w > 1 or kappa > 1), exact linear coefficients, finite coefficients,
/// degree cap.  Total function: never throws.
ValidationReport validate(const Material& mat, int max_degree = 3);

/// Evaluates V_j' at r (which = 1 or 2).
double force(const Material& mat, int which, double r);
/// Evaluates d^order/dr^order V_j' at r for order in {1, 2}.
double force_deriv(const Material& mat, int which, int order, double r);
/// The spring potential V_j: antiderivative of V_j' with V_j(0) = 0.
Polynomial potential(const Material& mat, int which);

}  // namespace dimerwave
