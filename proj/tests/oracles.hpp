#pragma once
// Test-side reference computations. Nothing here calls into the library's
// quadrature or special-function code.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// Composite Simpson on [a,b] with n (even) panels.
template <typename T>
T simpson(const std::function<T(double)>& f, double a, double b, int n = 2000)
{
    if (n % 2) ++n;
    double h = (b - a) / n;
    T s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * (h / 3.0);
}

inline double simpson2(const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
                       int nx = 400, int ny = 400)
{
    return simpson<double>([&](double x) { return simpson<double>([&](double y) { return f(x, y); }, ay, by, ny); },
                           ax, bx, nx);
}

// Physicists' Hermite polynomials by the three-term recurrence, normalized to
// the orthonormal Hermite functions.
inline cplx hermite_fn(int k, cplx x)
{
    cplx h0 = 1.0, h1 = 2.0 * x;
    cplx hk = k == 0 ? h0 : h1;
    for (int j = 2; j <= k; ++j) {
        cplx h2 = 2.0 * x * h1 - 2.0 * double(j - 1) * h0;
        h0 = h1;
        h1 = h2;
        hk = h2;
    }
    double fact = std::tgamma(k + 1.0);
    return hk * std::exp(-x * x / 2.0) / std::sqrt(std::pow(2.0, k) * fact * std::sqrt(pi));
}

// Gaussian density of variance v, continued to complex arguments.
inline cplx gauss(double v, cplx z) { return std::exp(-z * z / (2 * v)) / std::sqrt(2 * pi * v); }

// Heat kernel on S^3 at angle theta by the method of images.
inline double s3_kernel_images(double t, double theta)
{
    double s = 0.0;
    for (int k = -20; k <= 20; ++k) {
        double a = theta + 2 * pi * k;
        s += a * std::exp(-a * a / (2 * t));
    }
    double sn = std::sin(theta);
    if (std::abs(sn) < 1e-12) {
        // theta -> 0: the odd periodic sum over sin(theta) tends to its derivative
        s = 0.0;
        for (int k = -20; k <= 20; ++k) {
            double a = 2 * pi * k;
            s += (1.0 - a * a / t) * std::exp(-a * a / (2 * t));
        }
        return std::exp(t / 2) * std::pow(2 * pi * t, -1.5) * s;
    }
    return std::exp(t / 2) * std::pow(2 * pi * t, -1.5) * s / sn;
}

// H^3 heat kernel continued in r (even in r, so branch-free in r^2).
inline cplx h3_kernel(double t, cplx r)
{
    cplx ratio = std::abs(r) < 1e-8 ? cplx(1.0) : r / std::sinh(r);
    return std::exp(-t / 2) * std::exp(-r * r / (2 * t)) * std::pow(2 * pi * t, -1.5) * ratio;
}

// Radial profile of spectral_gaussian(w): inverse transform of e^{-lambda^2/2w^2}
// in closed form.
inline double spectral_gaussian_profile(double w, double r)
{
    double a = 1.0 / (2 * w * w);
    double ratio = r < 1e-8 ? 1.0 : r / std::sinh(r);
    // int_0^inf e^{-a l^2} l sin(l r)/r dl = sqrt(pi)/(4 a^{3/2}) e^{-r^2/4a}
    return ratio * std::sqrt(pi) / (4 * std::pow(a, 1.5)) * std::exp(-r * r / (4 * a)) / (2 * pi * pi);
}

// The same profile after heat time t: spectral Gaussian e^{-(a + t/2) l^2} times e^{-t/2}.
inline double heated_spectral_gaussian_profile(double w, double t, double r)
{
    double a = 1.0 / (2 * w * w) + t / 2;
    double ratio = r < 1e-8 ? 1.0 : r / std::sinh(r);
    return std::exp(-t / 2) * ratio * std::sqrt(pi) / (4 * std::pow(a, 1.5)) * std::exp(-r * r / (4 * a)) /
           (2 * pi * pi);
}

}  // namespace oracle
