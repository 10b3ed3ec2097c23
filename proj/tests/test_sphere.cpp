#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatrange/sphere.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace heatrange;

namespace {

const std::vector<double> e1{1, 0, 0, 0};
const double zonal_norm = oracle::pi * std::sqrt(2.0);

std::vector<double> unit(std::vector<double> v)
{
    double n = 0;
    for (double x : v) n += x * x;
    for (double& x : v) x /= std::sqrt(n);
    return v;
}

}  // namespace

TEST_CASE("exp and phi maps")
{
    auto q = sphere_exp(e1, {0, oracle::pi / 2, 0, 0});
    CHECK(std::abs(q[0]) < 1e-15);
    CHECK(q[1] == doctest::Approx(1.0).epsilon(1e-15));
    auto m = sphere_exp(e1, {0, oracle::pi, 0, 0});
    CHECK(m[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sphere_exp(e1, {0, 0, 0, 0}) == e1);

    auto z = phi_map(e1, {0, oracle::pi / 2, 0, 0});
    CHECK(z[0].real() == doctest::Approx(2.5091784787).epsilon(1e-10));
    CHECK(z[1].imag() == doctest::Approx(2.3012989023).epsilon(1e-10));
    CHECK(std::abs(bilinear(z, z) - 1.0) < 1e-12);

    std::mt19937 gen(7);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> p = unit({nd(gen), nd(gen), nd(gen), nd(gen)});
        std::vector<double> Y{nd(gen), nd(gen), nd(gen), nd(gen)};
        double d = 0;
        for (int k = 0; k < 4; ++k) d += Y[k] * p[k];
        for (int k = 0; k < 4; ++k) Y[k] = 1.5 * (Y[k] - d * p[k]);
        auto w = phi_map(p, Y);
        // cosh^2 - sinh^2 cancels, so the residual is measured against |z|^2
        double scale = 0;
        for (cplx c : w) scale += std::norm(c);
        worst = std::max(worst, std::abs(bilinear(w, w) - 1.0) / scale);
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(phi_map(e1, {1, 0, 0, 0}), DomainError);
}

TEST_CASE("hyperbolic fiber kernels")
{
    // e^{-1/2}(2 pi)^{-3/2}
    CHECK(nu_kernel({3, 1.0}, 0.0) == doctest::Approx(0.0385108369).epsilon(1e-10));
    CHECK(nu_kernel({1, 1.0}, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
    for (double R : {0.5, 2.0, 4.0})
        CHECK(nu_kernel({3, 0.7}, R) == doctest::Approx(oracle::h3_kernel(0.7, R).real()).epsilon(1e-13));
    CHECK(nu_normalization({3, 1.0}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(nu_normalization({1, 0.4}) == doctest::Approx(1.0).epsilon(1e-8));
    double worst = 0;
    for (double t : {0.2, 0.8, 2.0})
        for (double R : {0.1, 1.0, 2.5, 5.0}) worst = std::max(worst, std::abs(nu_pde_residual({3, t}, R)));
    CHECK(worst <= 1e-8);
    CHECK_THROWS_AS(nu_kernel({2, 1.0}, 1.0), DomainError);
}

TEST_CASE("heat transform multipliers and continuation")
{
    SpectralRep Z = sphere_heat_transform(zonal_eigen(1), 0.5);
    CHECK(std::abs(Z.lines.at(1)) == doctest::Approx(0.4723665527).epsilon(1e-10));
    SpectralRep C = sphere_heat_transform(circle_mode(2), 1.0);
    CHECK(std::abs(C.lines.at(2)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    SpectralRep K = sphere_heat_transform(sphere_constant(3.0), 2.0);
    CHECK(std::abs(zonal_value(K, 0.3) - 3.0) < 1e-14);

    // zonal_eigen(1) continued: e^{-3t/2} 2 w/(pi sqrt 2), w = phi.pole
    std::vector<double> p = unit({0.6, 0.8, 0, 0});
    std::vector<double> Y = {-0.8 * 0.6, 0.6 * 0.6, 0.8, 0};
    auto z = phi_map(p, Y);
    cplx expect = std::exp(-0.75) * 2.0 * z[0] / zonal_norm;
    CHECK(std::abs(continue_sphere(Z, p, Y) - expect) < 1e-13);
    CHECK(std::abs(continue_sphere(Z, p, {0, 0, 0, 0}) - std::exp(-0.75) * 2.0 * 0.6 / zonal_norm) < 1e-14);

    // circle mode 1 along the fiber: |F(th + i y)| = e^{-t/2} e^{-y}
    SpectralRep M = sphere_heat_transform(circle_mode(1), 0.8);
    double th = 0.4;
    for (double y : {0.5, 2.0, -1.0}) {
        cplx v = continue_sphere(M, {std::cos(th), std::sin(th)}, {-y * std::sin(th), y * std::cos(th)});
        CHECK(std::abs(v) == doctest::Approx(std::exp(-0.4 - y)).epsilon(1e-13));
    }
}

TEST_CASE("S^3 heat kernel")
{
    for (double t : {0.1, 0.5, 2.0})
        for (double th : {0.0, 0.3, 1.5, 3.0})
            CHECK(s3_heat_kernel_angle(t, th) == doctest::Approx(oracle::s3_kernel_images(t, th)).epsilon(1e-10));
    double mass = 4 * oracle::pi *
                  oracle::simpson<double>([](double th) { return s3_heat_kernel_angle(0.3, th) * std::pow(std::sin(th), 2); },
                                          0, oracle::pi, 4000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s3_heat_kernel_lmax(0.1, 1.0) > s3_heat_kernel_lmax(1.0, 1.0));
    CHECK(std::abs(s3_heat_kernel(0.5, std::cos(1.1)) - s3_heat_kernel_angle(0.5, 1.1)) < 1e-13);
    // continued kernel at cos(angle) = cosh(y) against the images sum at angle i y
    double y = 0.7, t = 0.6;
    cplx ref = 0.0;
    for (int k = -20; k <= 20; ++k) {
        cplx a = cplx(0, y) + 2 * oracle::pi * k;
        ref += a * std::exp(-a * a / (2 * t));
    }
    ref *= std::exp(t / 2) * std::pow(2 * oracle::pi * t, -1.5) / std::sin(cplx(0, y));
    CHECK(std::abs(s3_heat_kernel(t, std::cosh(y)) - ref) < 1e-10 * std::abs(ref));
}

TEST_CASE("isometry")
{
    for (double t : {0.3, 1.0, 2.5}) {
        CheckReport c = isometry_check_sphere(circle_cos(1), t);
        CHECK(c.pass);
        CHECK(c.lhs == doctest::Approx(oracle::pi).epsilon(1e-8));
    }
    CHECK(isometry_check_sphere(zero_function(Geometry::sphere3), 1.0).lhs == 0.0);

    // zonal_eigen(1), t = 0.5: base and direction averages of |w|^2 give 2 pi^3 cosh 2 rho
    double t = 0.5;
    double lhs = std::exp(-3 * t) * 4 / (2 * oracle::pi * oracle::pi) *
                 oracle::simpson<double>(
                     [&](double r) {
                         double sh = r < 1e-12 ? 1.0 : std::sinh(2 * r) / (2 * r);
                         return r * r * 2 * std::pow(oracle::pi, 3) * std::cosh(2 * r) * std::exp(-t) *
                                std::pow(oracle::pi * t, -1.5) * std::exp(-r * r / t) * sh;
                     },
                     0, 12, 6000);
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-9));
    CheckReport z = isometry_check_sphere(zonal_eigen(1), t);
    CHECK(z.pass);
    CHECK(z.lhs == doctest::Approx(lhs).epsilon(1e-4));
    CHECK(isometry_check_sphere(zonal_eigen(3) + zonal_eigen(0), 1.0).pass);
}

TEST_CASE("swapped fiber kernels fail")
{
    SphereOptions bad;
    bad.swap_fiber = true;
    CHECK_FALSE(isometry_check_sphere(zonal_eigen(1), 0.5, bad).pass);
    CHECK_FALSE(isometry_check_sphere(circle_cos(1), 1.0, bad).pass);
}

TEST_CASE("inversion")
{
    double t = 0.5;
    SpectralRep Z = sphere_heat_transform(zonal_eigen(1), t);
    CHECK(std::abs(inversion_sphere(Z, e1, 8 * std::sqrt(t)) - 2.0 / zonal_norm) < 1e-4);
    SpectralRep K = sphere_heat_transform(sphere_constant(2.5), 1.0);
    CHECK(std::abs(inversion_sphere(K, e1, INFINITY) - 2.5) < 1e-8);
    SpectralRep M = sphere_heat_transform(circle_mode(2), 1.0);
    double th = 0.9;
    CHECK(std::abs(inversion_sphere(M, {std::cos(th), std::sin(th)}, INFINITY) - std::exp(cplx(0, 2 * th))) < 1e-6);
    // five base points on S^3
    SpectralRep W = sphere_heat_transform(zonal_eigen(2) + zonal_eigen(0), 0.4);
    for (double a : {0.0, 0.7, 1.4, 2.2, 3.0}) {
        std::vector<double> p{std::cos(a), 0, std::sin(a), 0};
        cplx f = evaluate(zonal_eigen(2) + zonal_eigen(0), p);
        CHECK(std::abs(inversion_sphere(W, p, INFINITY) - f) < 1e-4);
    }
}

TEST_CASE("reproducing kernel bound")
{
    auto grid = default_sphere_grid(e1, 5, 16, 1.5);
    CheckReport r = pointwise_bound_sdbnd(zonal_eigen(1), 0.5, grid);
    CHECK(r.pass);
    CHECK(r.lhs <= 1 + 1e-9);
    CHECK(pointwise_bound_sdbnd(zero_function(Geometry::sphere3), 0.5, grid).pass);
    // Y = 0: |F(x)|^2 <= ||f||^2 rho_{2t}(x, x)
    SpectralRep Z = sphere_heat_transform(zonal_eigen(1), 0.5);
    double lhs = std::norm(continue_sphere(Z, e1, {0, 0, 0, 0}));
    CHECK(lhs <= oracle::s3_kernel_images(1.0, 0.0));
}

TEST_CASE("duality probe")
{
    CheckReport r = duality_probe(0.05, {0.0, 0.3, 0.6});
    CHECK(r.values["a_t"] <= r.values["b_t"]);
    CheckReport small = duality_probe(0.01, {0.0});
    CHECK(small.values["a_t"] >= 0.9);
    CHECK(small.values["b_t"] <= 1.1);
    // at Y = 0 the product is rho_t(1) nu_t(0) (2 pi t)^3
    double t = 0.2;
    double ref = oracle::s3_kernel_images(t, 0.0) * oracle::h3_kernel(t, 0.0).real() * std::pow(2 * oracle::pi * t, 3);
    CHECK(duality_probe(t, {0.0}).values["a_t"] == doctest::Approx(ref).epsilon(1e-10));
    CHECK_THROWS_AS(duality_probe(0.5, {}), DomainError);
}

TEST_CASE("sobolev weights")
{
    CheckReport r = sobolev_s3_check(zonal_eigen(1), 1, 1.0);
    CHECK(r.pass);
    CHECK(std::isfinite(r.values["C"]));
    CheckReport z = sobolev_s3_check(zonal_eigen(1), 0, 1.0);
    // (1 + |Y|^0) doubles the isometry integrand
    CHECK(z.lhs == doctest::Approx(2 * z.values["isometry_lhs"]).epsilon(1e-12));
    CHECK(z.values["isometry_lhs"] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(sobolev_s3_check(zero_function(Geometry::sphere3), 1, 1.0).lhs == 0.0);
}

TEST_CASE("multiplication")
{
    CheckReport c = multiply_sphere(sphere_constant(1.0), 1.0, sphere_constant(1.0), 1.0);
    CHECK(c.pass);
    CheckReport r = multiply_sphere(zonal_eigen(1), 1.0, zonal_eigen(1), 1.0);
    CHECK(r.pass);
    CHECK(r.values["r"] == doctest::Approx(0.5));
    // U_1 U_1 = U_0 + U_2; each factor carries e^{-3/2}
    double c0 = std::exp(-3.0) / zonal_norm;
    CHECK(r.values["f_line_0"] == doctest::Approx(c0).epsilon(1e-12));
    CHECK(r.values["f_line_2"] == doctest::Approx(c0 * std::exp(2.0)).epsilon(1e-12));
    CHECK(r.values.count("f_line_1") == 0);
    CHECK(r.values["max_degree"] == 2);
    CHECK(r.values["residual_abs"] <= 1e-8);
}
