#pragma once

#include "heatrange/numerics.hpp"

#include <map>
#include <string>
#include <vector>

namespace heatrange {

enum class Geometry { euclidean, circle, sphere3, hyperbolic3_radial };

std::string to_string(Geometry g);
Geometry parse_geometry(const std::string& s);

enum class AtomKind { gaussian, hermite, fourier_mode, constant, zonal_eigen, spectral_gaussian, bump };

// One coordinate of a separable Euclidean term.
struct Factor1D {
    AtomKind kind = AtomKind::constant;
    double center = 0.0;
    double variance = 1.0;
    int k = 0;
    double xi = 0.0;
};

struct Term {
    cplx coef{1.0, 0.0};
    AtomKind kind = AtomKind::constant;
    std::vector<Factor1D> factors;  // euclidean: one per coordinate
    int ell = 0;                    // circle mode index or S^3 zonal degree
    double width = 1.0;             // spectral_gaussian width or bump radius
};

// A finite sum of catalog atoms on one geometry. Circle modes are the
// unnormalized e^{i l theta}; S^3 zonal atoms are normalized in L^2(S^3)
// and share the pole of the function.
struct TestFunction {
    Geometry geometry = Geometry::euclidean;
    int dim = 1;
    std::vector<Term> terms;
    std::vector<double> pole;

    bool is_zero() const { return terms.empty(); }
};

TestFunction operator+(TestFunction a, const TestFunction& b);
TestFunction operator*(cplx c, TestFunction f);

TestFunction zero_function(Geometry g, int dim = 1);

// Euclidean catalog.
TestFunction gaussian(const std::vector<double>& center, double variance);
TestFunction gaussian(double center, double variance);
TestFunction hermite(const std::vector<int>& k);
TestFunction hermite(int k, int dim = 1);
TestFunction fourier_mode(const std::vector<double>& xi);
TestFunction fourier_mode(double xi);
TestFunction constant(double c, int dim = 1);

// Circle and S^3.
TestFunction circle_mode(int ell);
TestFunction circle_constant(double c);
TestFunction circle_cos(int ell = 1);
TestFunction zonal_eigen(int ell, const std::vector<double>& pole = {1, 0, 0, 0});
TestFunction sphere_constant(double c, const std::vector<double>& pole = {1, 0, 0, 0});

// Radial functions on H^3 about the base point (1,0,0,0).
TestFunction spectral_gaussian(double width);
TestFunction h3_bump(double radius);

// Orthonormal Hermite function psi_k on the real line.
double hermite_function(int k, double x);
// Chebyshev polynomial of the second kind, U_l(w) = sin((l+1)th)/sin th.
cplx chebyshev_u(int ell, cplx w);

// Point conventions: euclidean x in R^d; circle {theta} or a unit 2-vector;
// sphere3 a unit 4-vector; hyperbolic3 {r} or a hyperboloid 4-vector.
cplx evaluate(const TestFunction& f, const std::vector<double>& p);
double h3_radial_value(const TestFunction& f, double r);

// Fourier transform of a factor with f(x) = int e^{i xi x} fhat(xi) dxi.
// Fourier modes and constants have no density and return 0 here.
cplx factor_fourier(const Factor1D& a, double xi);
bool factor_is_line(const Factor1D& a);

struct SpectralLine {
    std::vector<double> xi;  // frequency vector (euclidean) or {l} (circle, S^3)
    cplx coef;
};

struct SpectralRep {
    Geometry geometry = Geometry::euclidean;
    int dim = 1;
    double t = 0.0;            // heat time already applied
    TestFunction source;       // closed-form atoms (euclidean, H^3)
    std::map<int, cplx> lines; // circle: coefficient of e^{i l th}; S^3: of the normalized zonal
    std::vector<double> pole;
    bool by_quadrature = false;
};

SpectralRep exact_transform(const TestFunction& f);

// Euclidean: continuous part of the transform at xi, including e^{-t|xi|^2/2}.
cplx spectral_density(const SpectralRep& F, const std::vector<double>& xi);
// Euclidean: delta lines from modes and constants.
std::vector<SpectralLine> spectral_lines(const SpectralRep& F);
// H^3: spherical transform at lambda, without the heat multiplier.
double h3_transform_value(const SpectralRep& F, double lambda);

struct NormValue {
    double value = 0.0;
    std::string provenance;  // "closed_form" or "quadrature"
};

NormValue exact_l2_norm(const TestFunction& f);

// Config-format descriptors, e.g. "hermite(0)+0.5*hermite(3)".
std::string to_string(const TestFunction& f);
TestFunction parse_test_function(const std::string& text, Geometry g, int dim = 1);

}  // namespace heatrange
