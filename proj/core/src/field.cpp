#include "dimerwave/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

namespace {

constexpr double kSymbolSymmetryTol = 1e-12;

// FFTW planning mutates global state; executions reuse per-size cached
// buffers, so the whole transform is serialized per process.  Transform
// sizes here are small enough that this is not a bottleneck.
struct FftCache {
    std::mutex mutex;
    struct Entry {
        fftw_plan r2c = nullptr;
        fftw_plan c2r = nullptr;
        double* real = nullptr;
        fftw_complex* cplx = nullptr;
    };
    std::map<int, Entry> entries;

    Entry& get(int n) {
        auto it = entries.find(n);
        if (it != entries.end()) return it->second;
        Entry e;
        e.real = fftw_alloc_real(static_cast<size_t>(n));
        e.cplx = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
        e.r2c = fftw_plan_dft_r2c_1d(n, e.real, e.cplx, FFTW_ESTIMATE);
        e.c2r = fftw_plan_dft_c2r_1d(n, e.cplx, e.real, FFTW_ESTIMATE);
        return entries.emplace(n, e).first->second;
    }

    ~FftCache() {
        for (auto& [n, e] : entries) {
            fftw_destroy_plan(e.r2c);
            fftw_destroy_plan(e.c2r);
            fftw_free(e.real);
            fftw_free(e.cplx);
        }
        fftw_cleanup();
    }
};

FftCache& cache() {
    static FftCache c;
    return c;
}

// One real-valued component: coefficients (k = 0..N) -> G samples.
void synth_component(const PeriodicField& f, int comp, int G, double* out) {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mutex);
    auto& e = c.get(G);
    int half = G / 2;
    for (int k = 0; k <= half; ++k) {
        Complex v = (k <= f.truncation()) ? f.coeff(k)(comp) : Complex(0.0, 0.0);
        e.cplx[k][0] = v.real();
        e.cplx[k][1] = v.imag();
    }
    fftw_execute(e.c2r);
    for (int j = 0; j < G; ++j) out[j] = e.real[j];
}

// One component: G samples -> coefficients 0..N (divides by G).
void analyze_component(const double* in, int G, int N, int comp, PeriodicField& out) {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mutex);
    auto& e = c.get(G);
    for (int j = 0; j < G; ++j) e.real[j] = in[j];
    fftw_execute(e.r2c);
    for (int k = 0; k <= N; ++k) {
        Vec2c v = out.coeff(k);
        v(comp) = Complex(e.cplx[k][0], e.cplx[k][1]) / static_cast<double>(G);
        out.set_coeff(k, v);
    }
}

}  // namespace

PeriodicField& PeriodicField::operator+=(const PeriodicField& o) {
    if (o.n_ > n_) *this = retruncated(o.n_);
    for (int k = 0; k <= o.n_; ++k) c_[static_cast<size_t>(k)] += o.c_[static_cast<size_t>(k)];
    return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& o) {
    if (o.n_ > n_) *this = retruncated(o.n_);
    for (int k = 0; k <= o.n_; ++k) c_[static_cast<size_t>(k)] -= o.c_[static_cast<size_t>(k)];
    return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

PeriodicField PeriodicField::retruncated(int truncation) const {
    PeriodicField out(truncation);
    int keep = std::min(truncation, n_);
    for (int k = 0; k <= keep; ++k) out.c_[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)];
    return out;
}

double inner_product(const PeriodicField& f, const PeriodicField& g) {
    int N = std::min(f.truncation(), g.truncation());
    double acc = (f.coeff(0).cwiseProduct(g.coeff(0).conjugate())).sum().real();
    for (int k = 1; k <= N; ++k)
        acc += 2.0 * (f.coeff(k).cwiseProduct(g.coeff(k).conjugate())).sum().real();
    return acc;
}

double sobolev_norm(const PeriodicField& f, double r) {
    double acc = f.coeff(0).squaredNorm();
    for (int k = 1; k <= f.truncation(); ++k) {
        double w = std::pow(1.0 + static_cast<double>(k) * k, r);
        acc += 2.0 * w * f.coeff(k).squaredNorm();
    }
    return std::sqrt(acc);
}

PeriodicField shift(const PeriodicField& f, double theta) {
    PeriodicField out(f.truncation());
    for (int k = 0; k <= f.truncation(); ++k)
        out.set_coeff(k, std::exp(Complex(0.0, k * theta)) * f.coeff(k));
    return out;
}

PeriodicField derivative(const PeriodicField& f, int order) {
    PeriodicField out(f.truncation());
    for (int k = 0; k <= f.truncation(); ++k) {
        Complex ik(0.0, static_cast<double>(k));
        Complex factor = std::pow(ik, order);
        out.set_coeff(k, factor * f.coeff(k));
    }
    return out;
}

PeriodicField apply_symbol(const MultiplierSymbol& sym, const PeriodicField& f) {
    PeriodicField out(f.truncation());
    for (int k = 0; k <= f.truncation(); ++k) {
        Mat2c pos = sym.at(static_cast<double>(k));
        Mat2c neg = sym.at(static_cast<double>(-k));
        double scale = std::max(1.0, pos.cwiseAbs().maxCoeff());
        if ((neg - pos.conjugate()).cwiseAbs().maxCoeff() > kSymbolSymmetryTol * scale) {
            std::ostringstream os;
            os << "apply_symbol: symbol breaks Hermitian symmetry at mode " << k;
            throw InternalError(os.str());
        }
        out.set_coeff(k, pos * f.coeff(k));
    }
    return out;
}

GridData to_grid(const PeriodicField& f, int grid_size) {
    if (grid_size < 2 * f.truncation() + 1)
        throw ConfigError("to_grid: grid smaller than 2N+1 cannot represent the field");
    GridData g;
    g.c1.resize(static_cast<size_t>(grid_size));
    g.c2.resize(static_cast<size_t>(grid_size));
    synth_component(f, 0, grid_size, g.c1.data());
    synth_component(f, 1, grid_size, g.c2.data());
    return g;
}

PeriodicField from_grid(const GridData& g, int truncation) {
    int G = g.size();
    if (G < 2 * truncation + 1)
        throw ConfigError("from_grid: grid smaller than 2N+1 cannot resolve the truncation");
    PeriodicField out(truncation);
    analyze_component(g.c1.data(), G, truncation, 0, out);
    analyze_component(g.c2.data(), G, truncation, 1, out);
    return out;
}

Eigen::Vector2d eval_at(const PeriodicField& f, double x) {
    Eigen::Vector2d acc = f.coeff(0).real();
    for (int k = 1; k <= f.truncation(); ++k) {
        Vec2c term = std::exp(Complex(0.0, k * x)) * f.coeff(k);
        acc += 2.0 * term.real();
    }
    return acc;
}

double sup_norm(const PeriodicField& f, int grid_size) {
    GridData g = to_grid(f, grid_size);
    double s = 0.0;
    for (int j = 0; j < g.size(); ++j)
        s = std::max({s, std::abs(g.c1[static_cast<size_t>(j)]),
                      std::abs(g.c2[static_cast<size_t>(j)])});
    return s;
}

PeriodicField apply_pointwise(const PeriodicField& f, const Polynomial& map1,
                              const Polynomial& map2, int grid_size) {
    int d = std::max(map1.degree(), map2.degree());
    if (grid_size < (d + 1) * f.truncation() + 1) {
        std::ostringstream os;
        os << "apply_pointwise: grid " << grid_size << " too small for exact dealiasing of degree "
           << d << " at truncation " << f.truncation() << " (need >= "
           << (d + 1) * f.truncation() + 1 << ")";
        throw ConfigError(os.str());
    }
    GridData g = to_grid(f, grid_size);
    for (auto& v : g.c1) v = map1(v);
    for (auto& v : g.c2) v = map2(v);
    return from_grid(g, f.truncation());
}

double mean_of_pointwise(const PeriodicField& f, const Polynomial& map1, const Polynomial& map2,
                         int grid_size) {
    // Only the zero mode is needed, so aliasing is harmless as long as no
    // true mode of the composed function reaches |k| = G.
    int d = std::max(map1.degree(), map2.degree());
    if (grid_size < d * f.truncation() + 1) {
        std::ostringstream os;
        os << "mean_of_pointwise: grid " << grid_size << " aliases the mean of a degree-" << d
           << " map at truncation " << f.truncation();
        throw ConfigError(os.str());
    }
    GridData g = to_grid(f, grid_size);
    double acc = 0.0;
    for (int j = 0; j < g.size(); ++j)
        acc += map1(g.c1[static_cast<size_t>(j)]) + map2(g.c2[static_cast<size_t>(j)]);
    return acc / grid_size;
}

namespace fields {

PeriodicField cosine(int truncation, int k, int component, double amplitude, double phase) {
    PeriodicField f(truncation);
    Vec2c v = Vec2c::Zero();
    // amplitude*cos(kx + phase) = (A/2) e^{i phase} e^{ikx} + c.c.
    v(component) = 0.5 * amplitude * std::exp(Complex(0.0, phase));
    f.set_coeff(k, v);
    return f;
}

PeriodicField constant(int truncation, double a, double b) {
    PeriodicField f(truncation);
    f.set_coeff(0, Vec2c(Complex(a, 0.0), Complex(b, 0.0)));
    return f;
}

}  // namespace fields

}  // namespace dimerwave
