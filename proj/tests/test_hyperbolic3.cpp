#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatrange/hyperbolic3.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <string>

using namespace heatrange;

namespace {

const std::vector<double> x0{1, 0, 0, 0};

// Heated spectral_gaussian(w) profile continued to the complex radius r.
cplx heated_profile(double w, double t, cplx r)
{
    double a = 1.0 / (2 * w * w) + t / 2;
    cplx ratio = std::abs(r) < 1e-8 ? cplx(1.0) : r / std::sinh(r);
    return std::exp(-t / 2) * ratio * std::sqrt(oracle::pi) / (4 * std::pow(a, 1.5)) * std::exp(-r * r / (4 * a)) /
           (2 * oracle::pi * oracle::pi);
}

// F(exp_{x0}(i rho e)) as the heat convolution of f with the kernel at complex distance.
cplx crown_by_convolution(const std::function<double(double)>& f, double t, double rho)
{
    auto inner = [&](double s, bool im) {
        return oracle::simpson<double>(
            [&](double beta) {
                cplx q = std::cos(rho) * std::cosh(s) - cplx(0, 1) * std::sin(rho) * std::sinh(s) * std::cos(beta);
                cplx v = oracle::h3_kernel(t, std::acosh(q)) * 2.0 * oracle::pi * std::sin(beta);
                return im ? v.imag() : v.real();
            },
            0, oracle::pi, 200);
    };
    auto outer = [&](bool im) {
        return oracle::simpson<double>(
            [&](double s) { return f(s) * std::pow(std::sinh(s), 2) * inner(s, im); }, 0, 10, 600);
    };
    return {outer(false), outer(true)};
}

}  // namespace

TEST_CASE("hyperboloid maps")
{
    auto p = h3_exp(x0, {0, 1, 0, 0});
    CHECK(p[0] == doctest::Approx(1.5430806348).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(1.1752011936).epsilon(1e-10));
    CHECK(h3_exp(x0, {0, 0, 0, 0}) == x0);
    auto w = h3_exp_i(x0, {0, oracle::pi / 2, 0, 0});
    CHECK(std::abs(w[0]) < 1e-15);
    CHECK(std::abs(w[1] - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(minkowski(w, w) - 1.0) < 1e-15);

    std::mt19937 gen(11);
    std::normal_distribution<double> nd;
    double worst_real = 0, worst_cplx = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> x = h3_exp(x0, {0, 0.5 * nd(gen), 0.5 * nd(gen), 0.5 * nd(gen)});
        std::vector<double> Y = h3_tangent(x, {nd(gen), nd(gen), nd(gen), nd(gen)}, std::abs(nd(gen)));
        auto q = h3_exp(x, Y);
        auto z = h3_exp_i(x, Y);
        double scale = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        worst_real = std::max(worst_real, std::abs(minkowski(q, q) - 1.0) / (q[0] * q[0]));
        worst_cplx = std::max(worst_cplx, std::abs(minkowski(z, z) - 1.0) / scale);
    }
    CHECK(worst_real < 1e-12);
    CHECK(worst_cplx < 1e-12);
    CHECK_THROWS_AS(h3_exp(x0, {1, 0, 0, 0}), DomainError);
}

TEST_CASE("complex distance")
{
    ComplexRadius c = complex_distance(h3_exp_i(x0, {0, 0, 1, 0}), x0);
    CHECK(std::abs(c.r - cplx(0, 1)) < 1e-12);
    std::vector<double> q = h3_exp(x0, {0, 0, 0, 2});
    ComplexRadius d = complex_distance({q.begin(), q.end()}, x0);
    CHECK(std::abs(d.r - 2.0) < 1e-12);
    ComplexRadius z = complex_distance({1, 0, 0, 0}, x0);
    CHECK(std::abs(z.r) < 1e-12);
    CHECK(z.near_branch);
}

TEST_CASE("spherical functions")
{
    CHECK(std::abs(spherical_fn(0.7, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(spherical_fn(1.0, cplx(0, oracle::pi / 2)) - 2.3012989023) < 1e-10);
    CHECK(std::abs(spherical_fn(0.0, 1.0) - 0.8509181282) < 1e-10);
    CHECK(std::abs(spherical_fn(1e-9, 1.0) - 0.8509181282) < 1e-10);
    CHECK_THROWS_AS(spherical_fn(1.0, cplx(0, oracle::pi)), NumericalError);
    // (d^2/dr^2 + 2 coth r d/dr) phi = -(lambda^2 + 1) phi
    double h = 1e-3, worst = 0;
    for (double lam : {0.0, 0.5, 2.0})
        for (double r = 0.2; r <= 3.0; r += 0.2) {
            auto p = [&](double x) { return spherical_fn(lam, x).real(); };
            double d2 = (-p(r + 2 * h) + 16 * p(r + h) - 30 * p(r) + 16 * p(r - h) - p(r - 2 * h)) / (12 * h * h);
            double d1 = (-p(r + 2 * h) + 8 * p(r + h) - 8 * p(r - h) + p(r - 2 * h)) / (12 * h);
            worst = std::max(worst, std::abs(d2 + 2 / std::tanh(r) * d1 + (lam * lam + 1) * p(r)));
        }
    CHECK(worst < 1e-6);
}

TEST_CASE("heat kernel keystone")
{
    CHECK(h3_heat_kernel(1.0, 1.0) == doctest::Approx(0.0198757485).epsilon(1e-9));
    RadialSpectralFn K = h3_heat_transform(point_mass(), 1.0);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        double r = 0.1 + 4.9 * i / 49;
        worst = std::max(worst, std::abs(h3_inverse_transform(K, r) - oracle::h3_kernel(1.0, r).real()));
    }
    CHECK(worst < 1e-8);
    RadialSpectralFn K2 = h3_heat_transform(point_mass(), 0.4);
    CHECK(h3_inverse_transform(K2, 0.8) == doctest::Approx(oracle::h3_kernel(0.4, 0.8).real()).epsilon(1e-8));
}

TEST_CASE("spherical transform, round trip and Plancherel")
{
    for (double lam : {0.0, 0.9, 2.5})
        CHECK(h3_forward_transform(spectral_gaussian(1.3), lam) ==
              doctest::Approx(std::exp(-lam * lam / (2 * 1.69))).epsilon(1e-9));
    RadialSpectralFn B = h3_spherical_transform(h3_bump(1.0));
    double worst = 0;
    for (int i = 0; i <= 30; ++i) {
        double r = 3.0 * i / 30;
        worst = std::max(worst, std::abs(h3_inverse_transform(B, r) - h3_radial_value(h3_bump(1.0), r)));
    }
    CHECK(worst < 1e-8);
    RadialSpectralFn G = h3_spherical_transform(spectral_gaussian(1.0));
    double norm = oracle::simpson<double>(
        [](double r) { return 4 * oracle::pi * std::pow(oracle::spectral_gaussian_profile(1.0, r) * std::sinh(r), 2); }, 0,
        14, 4000);
    CHECK(h3_plancherel_norm(G) == doctest::Approx(norm).epsilon(1e-8));
    double bnorm = oracle::simpson<double>(
        [](double r) { return 4 * oracle::pi * std::pow(h3_radial_value(h3_bump(1.0), r) * std::sinh(r), 2); }, 0, 1,
        4000);
    CHECK(std::abs(h3_plancherel_norm(B) - bnorm) < 1e-8);
}

TEST_CASE("crown evaluation")
{
    double t = 1.0;
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(spectral_gaussian(1.0)), t);
    for (double rho : {0.0, 0.25, 0.5}) {
        cplx conv = crown_by_convolution([](double s) { return oracle::spectral_gaussian_profile(1.0, s); }, t, rho);
        cplx v = evaluate_crown(F, x0, {0, rho, 0, 0});
        CHECK(std::abs(v - conv) < 1e-6);
        CHECK(std::abs(v - heated_profile(1.0, t, cplx(0, rho))) < 1e-10);
    }
    CHECK(std::abs(evaluate_crown(F, x0, {0, 0, 0, 0}) - h3_inverse_transform(F, 0.0)) < 1e-14);
    // the heat kernel itself blows up like 1/sin|Y| toward pi
    RadialSpectralFn K = h3_heat_transform(point_mass(), t);
    for (double gap : {0.1, 0.01, 0.001}) {
        cplx r(0, oracle::pi - gap);
        cplx v = evaluate_at_radius(K, r);
        CHECK(std::abs(v - oracle::h3_kernel(t, r)) < 1e-8 * std::abs(oracle::h3_kernel(t, r)));
    }
}

TEST_CASE("factored radial extension")
{
    double t = 1.0;
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(spectral_gaussian(1.0)), t);
    CHECK(factored_radial(F, 0.0) == doctest::Approx(h3_inverse_transform(F, 0.0)).epsilon(1e-14));
    double rho = 2.0;
    cplx crown = evaluate_at_radius(F, cplx(0, rho));
    CHECK(std::abs(factored_radial(F, rho) - crown.real() * std::sin(rho) / rho) < 1e-8);
    // closed form: the ratio cancels and the Gaussian grows like e^{rho^2/4a}
    auto closed = [&](double r) {
        double aa = 0.5 + t / 2;
        return std::exp(-t / 2) * std::sqrt(oracle::pi) / (4 * std::pow(aa, 1.5)) * std::exp(r * r / (4 * aa)) /
               (2 * oracle::pi * oracle::pi);
    };
    double at_pi = factored_radial(F, oracle::pi);
    CHECK(std::isfinite(at_pi));
    CHECK(at_pi == doctest::Approx(closed(oracle::pi)).epsilon(1e-9));
    RadialSpectralFn fine = F;
    fine.nodes *= 2;
    CHECK(std::abs(factored_radial(fine, oracle::pi) - at_pi) < 1e-7);
}

TEST_CASE("inversion formula")
{
    double t = 1.0;
    RadialSpectralFn C = h3_heat_transform(h3_constant(1.0), t);
    CHECK(inversion_L(C, INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inversion_L(C, 0.0) == 0.0);
    // closed-form Gaussian-sine integral for the constant
    double ref = 4 * oracle::pi * std::pow(2 * oracle::pi * t, -1.5) * std::exp(t / 2) *
                 oracle::simpson<double>([&](double r) { return r * std::sin(r) * std::exp(-r * r / (2 * t)); }, 0, 2.0, 2000);
    CHECK(inversion_L(C, 2.0) == doctest::Approx(ref).epsilon(1e-10));

    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(spectral_gaussian(1.0)), t);
    CHECK(std::abs(inversion_L(F, 8.0) - oracle::spectral_gaussian_profile(1.0, 0.0)) < 1e-4);
    for (double R : {0.3, 0.8, 1.5})
        CHECK(std::abs(inversion_L(F, R) - inversion_L_direct(F, R)) < 1e-8);
    CHECK_THROWS_AS(inversion_L_direct(F, 3.5), DomainError);
}

TEST_CASE("radialization")
{
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(spectral_gaussian(1.0)), 1.0);
    std::vector<double> radii{0.0, 0.3, 0.7};
    auto at_center = radialize(F, x0, radii);
    for (std::size_t i = 0; i < radii.size(); ++i)
        CHECK(std::abs(at_center[i] - evaluate_at_radius(F, cplx(0, radii[i]))) < 1e-12);
    std::vector<double> x = h3_exp(x0, {0, 0.4, 0.2, 0});
    auto coarse = radialize(F, x, radii, 16);
    auto fine = radialize(F, x, radii, 32);
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(coarse[i] - fine[i]) < 1e-8);
    auto flat = radialize(h3_constant(2.0), x, radii);
    for (cplx v : flat) CHECK(std::abs(v - 2.0) < 1e-12);
}

TEST_CASE("ring integral and growth probes")
{
    RadialSpectralFn Z = h3_heat_transform(h3_spherical_transform(zero_function(Geometry::hyperbolic3_radial)), 1.0);
    CHECK(ring_integral(Z, 0.5) == 0.0);
    CheckReport m = isometry_M_probe(zero_function(Geometry::hyperbolic3_radial));
    CHECK(m.values["M_extrapolated"] == 0.0);
    CheckReport g = ring_growth_probe(spectral_gaussian(1.0), 1.0, {0.2, 0.5, 0.8, 1.2});
    CHECK(g.pass);
    for (int i = 0; i < 4; ++i) {
        double R = std::vector<double>{0.2, 0.5, 0.8, 1.2}[i];
        std::string k = std::to_string(i);
        CHECK(g.values["envelope_ratio_" + k] == doctest::Approx(g.values["ring_" + k] * std::exp(-R * R)).epsilon(1e-14));
    }
    // the |Y| = R sphere contributes R^2, so the ratio rises but more slowly than the ring
    CHECK(g.values["envelope_ratio_3"] / g.values["envelope_ratio_0"] < g.values["ring_3"] / g.values["ring_0"]);
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(spectral_gaussian(1.0)), 1.0);
    double near = ring_integral(F, oracle::pi / 2 - 0.02);
    CHECK(std::isfinite(near));
}

TEST_CASE("multiplication failure")
{
    CheckReport r = multiplication_failure_demo(spectral_gaussian(1.0), spectral_gaussian(1.0), 1.0, 1.0);
    CHECK(r.pass);
    CHECK(r.values["alpha"] >= 0.9);
    CHECK(r.values["alpha"] <= 1.1);
    CheckReport z = multiplication_failure_demo(zero_function(Geometry::hyperbolic3_radial), spectral_gaussian(1.0), 1.0, 1.0);
    CHECK(z.pass);
}
