#pragma once

#include "heatrange/fiber.hpp"
#include "heatrange/numerics.hpp"
#include "heatrange/report.hpp"
#include "heatrange/testfns.hpp"

#include <functional>
#include <vector>

namespace heatrange {

// Hyperboloid model: Q(v,w) = v0 w0 - v1 w1 - v2 w2 - v3 w3, H^3 = {Q(v,v) = 1, v0 > 0}.
double minkowski(const std::vector<double>& a, const std::vector<double>& b);
cplx minkowski(const std::vector<cplx>& a, const std::vector<cplx>& b);

const std::vector<double>& h3_basepoint();

// cosh|Y| x + sinh|Y|/|Y| Y, with |Y| = sqrt(-Q(Y,Y)).
std::vector<double> h3_exp(const std::vector<double>& x, const std::vector<double>& Y);
// cos|Y| x + i sin|Y|/|Y| Y.
std::vector<cplx> h3_exp_i(const std::vector<double>& x, const std::vector<double>& Y);
// Tangent vector at x of length len pointing along the unit direction d
// (d is projected onto the tangent space first).
std::vector<double> h3_tangent(const std::vector<double>& x, const std::vector<double>& d, double len);

struct ComplexRadius {
    cplx r;
    bool near_branch = false;  // cosh r within 1e-10 of +-1
};

// Principal arccosh of Q(w, x0).
ComplexRadius complex_distance(const std::vector<cplx>& w, const std::vector<double>& x0);

// sin(lambda r)/(lambda sinh r); throws NumericalError at the poles r = i pi k, k != 0.
cplx spherical_fn(double lambda, cplx r);

// A radial function about x0 described by its spherical transform at time 0,
// with the heat multiplier e^{-t(lambda^2+1)/2} applied on evaluation.
struct RadialSpectralFn {
    enum class Kind { spectral, constant };
    Kind kind = Kind::spectral;
    std::function<double(double)> ghat;
    // ghat(lambda) <= C e^{-decay lambda^2/2}; 0 when there is no Gaussian decay.
    double decay = 0.0;
    double lambda_cap = 0.0;  // hard cutoff, 0 for none
    int nodes = 128;          // lambda nodes for the spectral integrals
    double t = 0.0;
    double constant = 0.0;    // Kind::constant
    std::vector<double> x0{1, 0, 0, 0};

    double multiplier(double lambda) const { return std::exp(-0.5 * t * (lambda * lambda + 1.0)); }
    double value(double lambda) const { return ghat(lambda) * multiplier(lambda); }
    // Cutoff for integrands that grow like e^{s lambda}.
    double lambda_max(double s = 0.0) const;
};

// Forward transform 4 pi int f(r) phi_lambda(r) sinh^2 r dr by quadrature.
double h3_forward_transform(const TestFunction& f, double lambda);
RadialSpectralFn h3_spherical_transform(const TestFunction& f);
// (2 pi^2)^{-1} int ghat(lambda) e^{-t(lambda^2+1)/2} phi_lambda(r) lambda^2 dlambda.
double h3_inverse_transform(const RadialSpectralFn& F, double r);
// (2 pi^2)^{-1} int |ghat|^2 lambda^2 dlambda.
double h3_plancherel_norm(const RadialSpectralFn& F);

RadialSpectralFn point_mass();
RadialSpectralFn h3_constant(double c);
RadialSpectralFn h3_heat_transform(const RadialSpectralFn& F, double t);
// nu_{x,t} at distance r: e^{-t/2} e^{-r^2/2t} (2 pi t)^{-3/2} r/sinh r.
double h3_heat_kernel(double t, double r);

cplx evaluate_crown(const RadialSpectralFn& F, const std::vector<double>& x, const std::vector<double>& Y);
// Same, at a precomputed complex radius about x0.
cplx evaluate_at_radius(const RadialSpectralFn& F, cplx r);
// F(exp_{x0}(iY)) sin|Y|/|Y| at |Y| = rho, through the entire integrand sinh(lambda rho)/(lambda rho).
double factored_radial(const RadialSpectralFn& F, double rho);

// int_0^R 4 pi rho^2 e^{t/2} e^{-rho^2/2t} (2 pi t)^{-3/2} factored_radial(rho) drho;
// R = infinity integrates to where the Gaussian is negligible.
double inversion_L(const RadialSpectralFn& F, double R);
// The same integral through the unfactored crown values, valid for R < pi.
double inversion_L_direct(const RadialSpectralFn& F, double R);

// sin(2 rho)/(2 rho) int_{H^3} int_{|Y| = rho} |F(exp_x(iY))|^2 dY dx.
double ring_integral(const RadialSpectralFn& F, double rho, int r_nodes = 48, int beta_nodes = 24);

struct MProbeOptions {
    double t = 1.0;
    std::vector<double> R_grid;  // empty: 8 points on [0.2, pi/2 - 0.05]
    double R_max = 0.0;          // continuation target; 0 means 12 sqrt(t)
    int degree = 8;
    int samples = 24;
};

CheckReport isometry_M_probe(const TestFunction& f, const MProbeOptions& opt = {});
CheckReport ring_growth_probe(const TestFunction& f, double t, const std::vector<double>& radii);

// Spherical average of F(exp_x(iY)) over |Y| = rho, product rule with n_beta x 2 n_beta nodes.
std::vector<cplx> radialize(const RadialSpectralFn& F, const std::vector<double>& x,
                            const std::vector<double>& radii, int n_beta = 16);

CheckReport multiplication_failure_demo(const TestFunction& f1, const TestFunction& f2, double t, double s);

}  // namespace heatrange
