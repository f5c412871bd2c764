#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <vector>

#include "dimerwave/material.hpp"

namespace dimerwave {

using Complex = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

/// Two-component real 2pi-periodic function stored as truncated Fourier
/// coefficients under the synthesis convention
///
///   f(x) = sum_{|k| <= N} fhat(k) e^{ikx},   fhat(-k) = conj(fhat(k)).
///
/// Only k = 0..N is stored; negative modes are implied by Hermitian
/// symmetry, so the represented function is real by construction.
class PeriodicField {
public:
    PeriodicField() = default;
    explicit PeriodicField(int truncation)
        : n_(truncation), c_(static_cast<size_t>(truncation) + 1, Vec2c::Zero()) {}

    int truncation() const { return n_; }

    /// Coefficient at any integer mode; negative modes conjugated, |k| > N zero.
    Vec2c coeff(int k) const {
        int a = k < 0 ? -k : k;
        if (a > n_) return Vec2c::Zero();
        return k < 0 ? c_[static_cast<size_t>(a)].conjugate() : c_[static_cast<size_t>(a)];
    }
    /// Sets mode k >= 0 (mode -k follows by symmetry).
    void set_coeff(int k, const Vec2c& v) { c_[static_cast<size_t>(k)] = v; }

    PeriodicField& operator+=(const PeriodicField& o);
    PeriodicField& operator-=(const PeriodicField& o);
    PeriodicField& operator*=(double s);
    friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
    friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
    friend PeriodicField operator*(double s, PeriodicField f) { return f *= s; }

    /// Copy re-truncated to a new N (pad with zeros or drop high modes).
    PeriodicField retruncated(int truncation) const;

private:
    int n_ = 0;
    std::vector<Vec2c> c_;
};

/// Matrix Fourier multiplier: mode k of the input is multiplied by the
/// 2x2 matrix symbol(k).  Symbols with symbol(-K) = conj(symbol(K)) map
/// real fields to real fields; apply_symbol verifies this per mode.
struct MultiplierSymbol {
    std::function<Mat2c(double)> at;
};

/// Equal-area grid x_j = 2 pi j / G, j = 0..G-1, holding both components.
struct GridData {
    std::vector<double> c1, c2;
    int size() const { return static_cast<int>(c1.size()); }
};

/// <f,g> = sum_k fhat(k) . conj(ghat(k)) over both components
/// (equals (1/2pi) integral of f.g for real fields).
double inner_product(const PeriodicField& f, const PeriodicField& g);
/// H^r norm: (sum_k (1+k^2)^r |fhat(k)|^2)^{1/2}; r = 0 is the L^2 norm.
double sobolev_norm(const PeriodicField& f, double r);
inline double l2_norm(const PeriodicField& f) { return sobolev_norm(f, 0.0); }

/// (S^theta f)(x) = f(x + theta): mode k picks up e^{ik theta}.
PeriodicField shift(const PeriodicField& f, double theta);
/// d^order/dx^order: mode k multiplied by (ik)^order.
PeriodicField derivative(const PeriodicField& f, int order = 1);
/// fhat(k) <- symbol(k) fhat(k).  Throws InternalError naming the first
/// mode at which the symbol breaks Hermitian symmetry.
PeriodicField apply_symbol(const MultiplierSymbol& sym, const PeriodicField& f);

/// Synthesis onto G grid points (exact for G >= 2N+1).
GridData to_grid(const PeriodicField& f, int grid_size);
/// Analysis of grid samples, truncated to N (exact if the samples come
/// from a field of bandwidth B with G >= N + B + 1).
PeriodicField from_grid(const GridData& g, int truncation);

/// Pointwise evaluation at arbitrary x by direct synthesis.
Eigen::Vector2d eval_at(const PeriodicField& f, double x);
/// Sup norm over a sampling grid of both components.
double sup_norm(const PeriodicField& f, int grid_size);

/// Applies polynomial maps componentwise on the grid and truncates back:
/// exact dealiasing requires grid >= (deg+1)*N + 1, else ConfigError.
PeriodicField apply_pointwise(const PeriodicField& f, const Polynomial& map1,
                              const Polynomial& map2, int grid_size);

/// Mean (mode-0 coefficient) of map1(f1) + map2(f2) over the period,
/// computed on the grid; exact under the same dealiasing bound.
double mean_of_pointwise(const PeriodicField& f, const Polynomial& map1,
                         const Polynomial& map2, int grid_size);

namespace fields {
/// alpha * (cos(k x + phase), 0) or second component; helper for tests/tools.
PeriodicField cosine(int truncation, int k, int component, double amplitude = 1.0,
                     double phase = 0.0);
/// Constant field (a, b).
PeriodicField constant(int truncation, double a, double b);
}  // namespace fields

}  // namespace dimerwave
