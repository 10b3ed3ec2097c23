#pragma once

#include "heatrange/fiber.hpp"
#include "heatrange/numerics.hpp"
#include "heatrange/report.hpp"
#include "heatrange/testfns.hpp"

#include <vector>

namespace heatrange {

// Points on S^1 are unit 2-vectors, points on S^3 unit 4-vectors. A tangent
// vector Y at p satisfies Y.p = 0.

std::vector<double> sphere_exp(const std::vector<double>& p, const std::vector<double>& Y);
// exp_p(iY) = cosh|Y| p + i sinh|Y|/|Y| Y, a point of the complex sphere z.z = 1.
std::vector<cplx> phi_map(const std::vector<double>& p, const std::vector<double>& Y);
// Bilinear (unconjugated) product.
cplx bilinear(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Heat kernel of hyperbolic d-space, d = 1 or 3, as a function of distance.
struct NuKernel {
    int d = 3;
    double t = 1.0;
};

double nu_kernel(const NuKernel& k, double R);
// d/dt nu - (1/2)(nu'' + (d-1) coth R nu') by fourth-order central differences.
double nu_pde_residual(const NuKernel& k, double R, double h = 5e-4);
// c_d int_0^inf nu(R) sinh^{d-1} R dR, with c_1 = 2, c_3 = 4 pi.
double nu_normalization(const NuKernel& k);

// Multiplies each spectral line by e^{-t l(l+d-1)/2}; lines then hold the
// time-t coefficients.
SpectralRep sphere_heat_transform(const TestFunction& f, double t);

// F(exp_p(iY)).
cplx continue_sphere(const SpectralRep& F, const std::vector<double>& p, const std::vector<double>& Y);
// Value of a zonal S^3 representation where (complexified point).pole = w.
cplx zonal_value(const SpectralRep& F, cplx w);

struct SphereOptions {
    int nodes = 96;          // radial fiber nodes; angular rules scale with the spectral degree
    double tol = -1.0;       // negative: 1e-8 on S^1, 1e-4 on S^3
    bool swap_fiber = false; // negative control
};

CheckReport isometry_check_sphere(const TestFunction& f, double t, const SphereOptions& opt = {});
// Fiber integral over |Y| <= R; R = infinity integrates the whole fiber.
cplx inversion_sphere(const SpectralRep& F, const std::vector<double>& p, double R,
                      const SphereOptions& opt = {});

// rho_t on S^3 at cos(angle) = w, continued to complex w by its eigen-series.
cplx s3_heat_kernel(double t, cplx w);
double s3_heat_kernel_angle(double t, double theta);
// Degree at which the series for s3_heat_kernel(t, w) is truncated.
int s3_heat_kernel_lmax(double t, cplx w);

struct SphereGridPoint {
    std::vector<double> p;
    std::vector<double> Y;
};

// n_p base points along a great circle through the pole, times n_y fiber
// radii up to y_max in a direction mixing the pole and a transverse axis.
std::vector<SphereGridPoint> default_sphere_grid(const std::vector<double>& pole, int n_p, int n_y,
                                                 double y_max);

// |F(exp_x(iY))| <= ||f|| sqrt(rho_{2t}(cosh 2|Y|)); lhs is the largest ratio.
CheckReport pointwise_bound_sdbnd(const TestFunction& f, double t, const std::vector<SphereGridPoint>& grid);

// rho_t(cosh|Y|) nu_t(|Y|) (sinh|Y|/|Y|)^2 (2 pi t)^3 over the grid of |Y|.
CheckReport duality_probe(double t, const std::vector<double>& radii);

// Weighted fiber integral with (1 + |Y|^{2n}) and a fitted pointwise constant.
CheckReport sobolev_s3_check(const TestFunction& f, int n, double t, const SphereOptions& opt = {});

CheckReport multiply_sphere(const TestFunction& f1, double t, const TestFunction& f2, double s);

}  // namespace heatrange
