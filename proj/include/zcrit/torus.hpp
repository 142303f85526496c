#ifndef ZCRIT_TORUS_HPP
#define ZCRIT_TORUS_HPP

// Periodic grids on the flat torus C^2/(Z^2 + iZ^2), spectral dd^c, and
// pointwise algebra of Hermitian (1,1)-forms.
//
// Coordinates (x1, y1, x2, y2), period 1 each, z_j = x_j + i y_j. Flat index
// ((ix1 N + iy1) N + ix2) N + iy2. A (1,1)-form i a_{jk} dz_j ^ dzbar_k is
// stored by its Hermitian matrix; 4-form densities are relative to
// dV0 = (i dz1 ^ dzbar1) ^ (i dz2 ^ dzbar2), which has total mass 4.

#include "rational.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace zcrit {

using cplx = std::complex<double>;

/// Hermitian 2x2 matrix [[a11, a12], [conj a12, a22]].
struct Herm2 {
    double a11 = 0;
    double a22 = 0;
    cplx a12 = 0;

    static Herm2 identity() { return {1, 1, 0}; }
    static Herm2 diag(double d1, double d2) { return {d1, d2, 0}; }

    [[nodiscard]] double det() const { return a11 * a22 - std::norm(a12); }
    [[nodiscard]] double trace() const { return a11 + a22; }
    [[nodiscard]] std::array<double, 2> eigenvalues() const
    {
        double m = trace() / 2;
        double d = std::sqrt(std::max(0.0, (a11 - a22) * (a11 - a22) / 4 + std::norm(a12)));
        return {m - d, m + d};
    }
    [[nodiscard]] double min_eigenvalue() const { return eigenvalues()[0]; }

    Herm2& operator+=(const Herm2& o)
    {
        a11 += o.a11;
        a22 += o.a22;
        a12 += o.a12;
        return *this;
    }
    Herm2& operator*=(double s)
    {
        a11 *= s;
        a22 *= s;
        a12 *= s;
        return *this;
    }
    friend Herm2 operator+(Herm2 a, const Herm2& b) { return a += b; }
    friend Herm2 operator-(Herm2 a, const Herm2& b) { return a += b * -1.0; }
    friend Herm2 operator*(Herm2 a, double s) { return a *= s; }
    friend Herm2 operator*(double s, Herm2 a) { return a *= s; }
};

/// Density of a ^ b relative to dV0 (the mixed discriminant); a ^ a = 2 det a.
inline double wedge(const Herm2& a, const Herm2& b)
{
    return a.a11 * b.a22 + a.a22 * b.a11 - 2 * (std::conj(a.a12) * b.a12).real();
}

/// FFTW plans for one grid size; owns its scratch buffers.
class TorusGrid {
public:
    explicit TorusGrid(int n) : n_(n)
    {
        if (n < 8 || (n & (n - 1)) != 0)
            throw Error("grid size N must be a power of two >= 8");
        rbuf_ = fftw_alloc_real(size());
        cbuf_ = fftw_alloc_complex(spectral_size());
        const int dims[4] = {n, n, n, n};
        r2c_ = fftw_plan_dft_r2c(4, dims, rbuf_, cbuf_, FFTW_ESTIMATE);
        c2r_ = fftw_plan_dft_c2r(4, dims, cbuf_, rbuf_, FFTW_ESTIMATE);
    }
    ~TorusGrid()
    {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
        fftw_free(rbuf_);
        fftw_free(cbuf_);
    }
    TorusGrid(const TorusGrid&) = delete;
    TorusGrid& operator=(const TorusGrid&) = delete;

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] std::size_t size() const
    {
        auto m = static_cast<std::size_t>(n_);
        return m * m * m * m;
    }
    [[nodiscard]] std::size_t spectral_size() const
    {
        auto m = static_cast<std::size_t>(n_);
        return m * m * m * (m / 2 + 1);
    }

    void forward(const std::vector<double>& in, std::vector<cplx>& out)
    {
        std::copy(in.begin(), in.end(), rbuf_);
        fftw_execute(r2c_);
        out.resize(spectral_size());
        auto* c = reinterpret_cast<cplx*>(cbuf_);
        std::copy(c, c + spectral_size(), out.begin());
    }

    /// Inverse transform including the 1/N^4 normalisation.
    void backward(const std::vector<cplx>& in, std::vector<double>& out)
    {
        auto* c = reinterpret_cast<cplx*>(cbuf_);
        std::copy(in.begin(), in.end(), c);
        fftw_execute(c2r_);
        out.resize(size());
        double s = 1.0 / static_cast<double>(size());
        for (std::size_t i = 0; i < size(); ++i)
            out[i] = rbuf_[i] * s;
    }

    /// Calls f(index, k) with signed wavenumbers k = (x1, y1, x2, y2) over the half spectrum.
    template <typename F>
    void for_each_mode(F&& f) const
    {
        std::size_t idx = 0;
        int h = n_ / 2;
        auto wave = [this](int j) { return j <= n_ / 2 ? j : j - n_; };
        for (int j1 = 0; j1 < n_; ++j1)
            for (int j2 = 0; j2 < n_; ++j2)
                for (int j3 = 0; j3 < n_; ++j3)
                    for (int j4 = 0; j4 <= h; ++j4)
                        f(idx++, std::array<int, 4>{wave(j1), wave(j2), wave(j3), j4});
    }

private:
    int n_;
    double* rbuf_ = nullptr;
    fftw_complex* cbuf_ = nullptr;
    fftw_plan r2c_ = nullptr;
    fftw_plan c2r_ = nullptr;
};

struct ScalarField {
    int n = 0;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(int grid, double value = 0)
        : n(grid), v(static_cast<std::size_t>(grid) * grid * grid * grid, value)
    {
    }
    [[nodiscard]] std::size_t size() const { return v.size(); }
    [[nodiscard]] double mean() const
    {
        double s = 0;
        for (double x : v)
            s += x;
        return s / static_cast<double>(v.size());
    }
    [[nodiscard]] double sup() const
    {
        double s = 0;
        for (double x : v)
            s = std::max(s, std::fabs(x));
        return s;
    }
    [[nodiscard]] double min() const { return *std::min_element(v.begin(), v.end()); }
    void remove_mean()
    {
        double m = mean();
        for (auto& x : v)
            x -= m;
    }
};

struct FormField {
    int n = 0;
    std::vector<double> a11, a22;
    std::vector<cplx> a12;

    FormField() = default;
    explicit FormField(int grid, const Herm2& c = {})
    {
        n = grid;
        std::size_t s = static_cast<std::size_t>(grid) * grid * grid * grid;
        a11.assign(s, c.a11);
        a22.assign(s, c.a22);
        a12.assign(s, c.a12);
    }
    [[nodiscard]] std::size_t size() const { return a11.size(); }
    [[nodiscard]] Herm2 at(std::size_t i) const { return {a11[i], a22[i], a12[i]}; }
    void set(std::size_t i, const Herm2& h)
    {
        a11[i] = h.a11;
        a22[i] = h.a22;
        a12[i] = h.a12;
    }
    [[nodiscard]] Herm2 mean() const
    {
        Herm2 s;
        for (std::size_t i = 0; i < size(); ++i)
            s += at(i);
        return s * (1.0 / static_cast<double>(size()));
    }
    FormField& operator+=(const FormField& o)
    {
        for (std::size_t i = 0; i < size(); ++i) {
            a11[i] += o.a11[i];
            a22[i] += o.a22[i];
            a12[i] += o.a12[i];
        }
        return *this;
    }
    FormField& operator+=(const Herm2& c)
    {
        for (std::size_t i = 0; i < size(); ++i) {
            a11[i] += c.a11;
            a22[i] += c.a22;
            a12[i] += c.a12;
        }
        return *this;
    }
    FormField& operator*=(double s)
    {
        for (std::size_t i = 0; i < size(); ++i) {
            a11[i] *= s;
            a22[i] *= s;
            a12[i] *= s;
        }
        return *this;
    }
    friend FormField operator+(FormField a, const FormField& b) { return a += b; }
    friend FormField operator+(FormField a, const Herm2& c) { return a += c; }
    friend FormField operator*(FormField a, double s) { return a *= s; }
};

/// Real coordinates of grid point i.
inline std::array<double, 4> grid_point(int n, std::size_t i)
{
    std::array<double, 4> x{};
    auto m = static_cast<std::size_t>(n);
    for (int d = 3; d >= 0; --d) {
        x[static_cast<std::size_t>(d)] = static_cast<double>(i % m) / n;
        i /= m;
    }
    return x;
}

inline std::array<int, 4> grid_location(int n, std::size_t i)
{
    std::array<int, 4> x{};
    auto m = static_cast<std::size_t>(n);
    for (int d = 3; d >= 0; --d) {
        x[static_cast<std::size_t>(d)] = static_cast<int>(i % m);
        i /= m;
    }
    return x;
}

template <typename F>
ScalarField sample(int n, F&& f)
{
    ScalarField s(n);
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto x = grid_point(n, i);
        s.v[i] = f(x[0], x[1], x[2], x[3]);
    }
    return s;
}

/// Fourier symbols of u -> u_{jk} for one mode (k = wavenumbers, N = grid).
/// Cross terms drop the Nyquist component of each first derivative.
struct DdcSymbol {
    double s11, s22, re12, im12;
};

inline DdcSymbol ddc_symbol(const std::array<int, 4>& k, int n)
{
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    auto odd = [n](int j) { return (j == n / 2 || j == -n / 2) ? 0 : j; };
    double x1 = odd(k[0]), y1 = odd(k[1]), x2 = odd(k[2]), y2 = odd(k[3]);
    DdcSymbol s{};
    s.s11 = -pi2 * (double(k[0]) * k[0] + double(k[1]) * k[1]);
    s.s22 = -pi2 * (double(k[2]) * k[2] + double(k[3]) * k[3]);
    s.re12 = -pi2 * (x1 * x2 + y1 * y2);
    s.im12 = -pi2 * (x1 * y2 - y1 * x2);
    return s;
}

/// dd^c u = i d dbar u, componentwise u_{jk} with d_z = (d_x - i d_y)/2.
inline FormField ddc(TorusGrid& grid, const ScalarField& u)
{
    if (u.n != grid.n())
        throw Error("ddc: grid size mismatch");
    std::vector<cplx> uh, tmp(grid.spectral_size());
    grid.forward(u.v, uh);
    FormField out(grid.n());
    std::vector<double> re, im;
    auto apply = [&](auto pick, std::vector<double>& dst) {
        grid.for_each_mode([&](std::size_t i, const std::array<int, 4>& k) { tmp[i] = uh[i] * pick(ddc_symbol(k, grid.n())); });
        grid.backward(tmp, dst);
    };
    apply([](const DdcSymbol& s) { return s.s11; }, out.a11);
    apply([](const DdcSymbol& s) { return s.s22; }, out.a22);
    apply([](const DdcSymbol& s) { return s.re12; }, re);
    apply([](const DdcSymbol& s) { return s.im12; }, im);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.a12[i] = {re[i], im[i]};
    return out;
}

} // namespace zcrit

#endif // ZCRIT_TORUS_HPP
