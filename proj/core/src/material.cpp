#include "dimerwave/material.hpp"

#include <cmath>
#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

double Polynomial::operator()(double r) const {
    double acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * r + c_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

namespace {
Polynomial from_force_list(const std::vector<double>& list) {
    // Force lists are coefficients of r, r^2, ...; the constant term is 0.
    std::vector<double> full(list.size() + 1, 0.0);
    for (size_t i = 0; i < list.size(); ++i) full[i + 1] = list[i];
    return Polynomial(std::move(full));
}
}  // namespace

Material Material::dimer(double m, double kappa, double beta) {
    Material mat;
    mat.m = m;
    mat.w = 1.0 / m;
    mat.kappa = kappa;
    mat.beta = beta;
    mat.force1 = from_force_list({1.0, 1.0});
    mat.force2 = from_force_list({kappa, beta});
    return mat;
}

Material Material::dimer_with_forces(double m, std::vector<double> f1, std::vector<double> f2) {
    Material mat;
    mat.m = m;
    mat.w = 1.0 / m;
    mat.kappa = f2.empty() ? 0.0 : f2[0];
    mat.beta = f2.size() > 1 ? f2[1] : 0.0;
    mat.force1 = from_force_list(f1);
    mat.force2 = from_force_list(f2);
    return mat;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

ValidationReport validate(const Material& mat, int max_degree) {
    ValidationReport rep;
    auto bad = [&rep](const std::string& s) { rep.violations.push_back(s); };

    if (!(mat.m > 0.0) || !std::isfinite(mat.m)) bad("mass m must be positive and finite");
    if (!(mat.kappa > 0.0) || !std::isfinite(mat.kappa)) bad("kappa must be positive and finite");
    if (std::isfinite(mat.m) && mat.m > 0.0 && std::abs(mat.w * mat.m - 1.0) > 1e-15)
        bad("w must equal 1/m");

    if (!(mat.w > 1.0 || mat.kappa > 1.0)) bad("w>1 or kappa>1 fails (no heterogeneity at the linear level)");

    if (mat.force1.coeff(0) != 0.0) bad("force1 constant term must be 0");
    if (mat.force2.coeff(0) != 0.0) bad("force2 constant term must be 0");
    if (mat.force1.coeff(1) != 1.0) bad("force1 linear coefficient must equal 1 exactly");
    if (mat.force2.coeff(1) != mat.kappa) bad("force2 linear coefficient must equal kappa exactly");

    for (double c : mat.force1.coeffs())
        if (!std::isfinite(c)) { bad("force1 has a non-finite coefficient"); break; }
    for (double c : mat.force2.coeffs())
        if (!std::isfinite(c)) { bad("force2 has a non-finite coefficient"); break; }

    if (mat.force1.degree() > max_degree || mat.force2.degree() > max_degree) {
        std::ostringstream os;
        os << "force degree exceeds configured maximum " << max_degree;
        bad(os.str());
    }
    return rep;
}

double force(const Material& mat, int which, double r) {
    if (which != 1 && which != 2) throw DomainError("force: which must be 1 or 2");
    return which == 1 ? mat.force1(r) : mat.force2(r);
}

double force_deriv(const Material& mat, int which, int order, double r) {
    if (which != 1 && which != 2) throw DomainError("force_deriv: which must be 1 or 2");
    if (order != 1 && order != 2) throw DomainError("force_deriv: order must be 1 or 2");
    Polynomial p = (which == 1 ? mat.force1 : mat.force2).derivative();
    if (order == 2) p = p.derivative();
    return p(r);
}

Polynomial potential(const Material& mat, int which) {
    if (which != 1 && which != 2) throw DomainError("potential: which must be 1 or 2");
    return (which == 1 ? mat.force1 : mat.force2).antiderivative();
}

}  // namespace dimerwave
