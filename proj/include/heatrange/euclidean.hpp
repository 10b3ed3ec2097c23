#pragma once

#include "heatrange/numerics.hpp"
#include "heatrange/report.hpp"
#include "heatrange/testfns.hpp"

#include <functional>
#include <vector>

namespace heatrange {

struct EuclideanParams {
    int d = 1;
    double t = 1.0;
    void validate() const;
};

struct ComplexVector {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<cplx> z() const;
};

struct GaussianMeasureSpec {
    double s = 1.0;
    double r(double t) const { return 2.0 * s - t; }
};

// h_{n,t}(y) = 4^{-n} e^{|y|^2/t} Delta^n e^{-|y|^2/t}, stored as a polynomial in u = |y|^2.
struct WickPolynomial {
    int n = 0;
    double t = 1.0;
    int d = 1;
    std::vector<double> coef;  // coef[m] multiplies u^m

    double operator()(double u) const;
    double at(const std::vector<double>& y) const;
    // Minimum over u >= 0, located by sampling and Newton polishing.
    double min_value() const;
};

struct EuclidOptions {
    int nodes = 64;                // Gauss-Hermite nodes per axis
    double tol = 1e-6;
    // Negative control: the y-weight becomes e^{-|y|^2/(k t)} / (pi k t)^{d/2}.
    // k = 2 turns the isometry weight into the inversion weight.
    double variance_factor = 1.0;
};

double heat_kernel(const EuclideanParams& p, const std::vector<double>& x);
cplx heat_kernel_c(const EuclideanParams& p, const ComplexVector& z);

// Applies e^{t Delta/2}: the returned representation carries the accumulated time.
SpectralRep heat_transform(const TestFunction& f, const EuclideanParams& p);
SpectralRep heat_transform(const SpectralRep& F, const EuclideanParams& p);

// Entire continuation of a heat-transformed catalog function, evaluated from
// the closed forms of the evolved atoms. Throws NumericalError if |y| is so
// large that the value overflows.
cplx analytic_continue(const SpectralRep& F, const ComplexVector& z);

CheckReport isometry_check_lebesgue(const TestFunction& f, const EuclideanParams& p,
                                    const EuclidOptions& opt = {});
CheckReport isometry_check_gaussian(const TestFunction& f, const GaussianMeasureSpec& spec,
                                    const EuclideanParams& p, const EuclidOptions& opt = {});

// Grid of complex points in the (x_1, y_j) planes, |x|,|y| <= L.
std::vector<ComplexVector> default_grid(int d, double L, int n);

// |F(x+iy)| <= ||f|| (4 pi t)^{-d/4} e^{|y|^2/2t}; lhs is the largest ratio.
CheckReport pointwise_bound_check(const TestFunction& f, const EuclideanParams& p,
                                  const std::vector<ComplexVector>& grid);

// Ball-truncated inversion with the weight e^{-|y|^2/2t}/(2 pi t)^{d/2}.
cplx invert_ball(const SpectralRep& F, const std::vector<double>& x, double R, int nodes = 128);
// Full-space inversion with variance s < t.
cplx invert_smoothed(const SpectralRep& F, const std::vector<double>& x, double s, int nodes = 64);
// Adjoint inversion: conj(rho_t(z - x)) F(z) against e^{-|Im z|^2/t}/(pi t)^{d/2},
// with each |y_j| <= R.
cplx invert_adjoint(const SpectralRep& F, const std::vector<double>& x, double R, int nodes = 96);

// Decides whether int |Fhat|^2 e^{t|xi|^2} is finite by growing the window.
CheckReport fourier_range_test(const SpectralRep& F, double t);

WickPolynomial wick_polynomial(int n, const EuclideanParams& p);

CheckReport sobolev_norm_check(const TestFunction& f, int n, const EuclideanParams& p, double c_n,
                               const EuclidOptions& opt = {});
double default_sobolev_constant(int n, const EuclideanParams& p);
CheckReport sobolev_image_check(const TestFunction& f, int n, const EuclideanParams& p);
CheckReport smooth_pointwise_inversion(const TestFunction& f, const EuclideanParams& p,
                                       const std::vector<double>& x);

enum class BargmannMode { schwartz, tempered };
CheckReport bargmann_bound_scan(const TestFunction& f, const EuclideanParams& p, BargmannMode mode,
                                int n_max = 4);

CheckReport lp_pointwise_bound_check(const TestFunction& f, double p_exp, const EuclideanParams& p,
                                     const std::vector<ComplexVector>& grid);
// ||rho_t(z - .)||_q at y = 0 by quadrature; q may be infinity.
double heat_kernel_lq_norm(const EuclideanParams& p, double q);

// One-dimensional spectral measure: a density plus point masses.
struct Spectrum1D {
    std::function<cplx(double)> density;
    double extent = 0.0;  // density negligible beyond |xi| > extent
    std::vector<std::pair<double, cplx>> lines;
};

Spectrum1D spectrum_of(const SpectralRep& F);
Spectrum1D spectrum_product(const Spectrum1D& a, const Spectrum1D& b, int nodes = 200);

struct MultiplyResult {
    double r = 0.0;
    double window = 0.0;  // spectral truncation |xi| <= window
    Spectrum1D g;         // spectrum of F1 F2
    Spectrum1D f;         // spectrum of the recovered f
    cplx recovered(double x) const;           // f(x)
    cplx reheated(double x) const;            // (e^{r Delta/2} f)(x)
    double norm_squared(double window) const; // L^2 norm (mean square for lines) within a window
};

MultiplyResult multiply_recover(const TestFunction& f1, double t, const TestFunction& f2, double s);
CheckReport multiply_in_range(const TestFunction& f1, double t, const TestFunction& f2, double s);

}  // namespace heatrange
