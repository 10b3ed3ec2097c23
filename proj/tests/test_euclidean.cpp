#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatrange/euclidean.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace heatrange;

namespace {

// (e^{t Delta/2} f)(z) for a 1-d function by direct convolution with the continued kernel.
cplx convolve(const std::function<double(double)>& f, double t, cplx z)
{
    double re = oracle::simpson<double>([&](double y) { return (oracle::gauss(t, z - y) * f(y)).real(); }, -14, 14, 4000);
    double im = oracle::simpson<double>([&](double y) { return (oracle::gauss(t, z - y) * f(y)).imag(); }, -14, 14, 4000);
    return {re, im};
}

double h(int k, double x) { return oracle::hermite_fn(k, x).real(); }

}  // namespace

TEST_CASE("heat kernel values")
{
    CHECK(heat_kernel({1, 1.0}, {0.0}) == doctest::Approx(0.3989422804).epsilon(1e-10));
    CHECK(heat_kernel({2, 0.5}, {0.0, 0.0}) == doctest::Approx(1 / oracle::pi).epsilon(1e-12));
    double mass = oracle::simpson<double>([](double x) { return heat_kernel({1, 0.7}, {x}); }, -10, 10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    // |rho_1(i)| = e^{1/2}/sqrt(2 pi)
    CHECK(std::abs(heat_kernel_c({1, 1.0}, {{0.0}, {1.0}})) == doctest::Approx(0.6577446235).epsilon(1e-10));
    CHECK(std::abs(heat_kernel_c({1, 1.0}, {{1.0}, {1.0}})) == doctest::Approx(0.3989422804).epsilon(1e-10));
    // modulus law |rho_t(x+iy)| e^{-y^2/2t} = rho_t(x)
    for (double x : {-1.5, 0.2, 2.0})
        for (double y : {-2.0, 0.5, 3.0}) {
            double lhs = std::abs(heat_kernel_c({1, 0.8}, {{x}, {y}})) * std::exp(-y * y / 1.6);
            CHECK(lhs == doctest::Approx(heat_kernel({1, 0.8}, {x})).epsilon(1e-13));
        }
    CHECK_THROWS_AS(heat_kernel({1, -1.0}, {0.0}), DomainError);
}

TEST_CASE("heat transform against direct convolution")
{
    SpectralRep F = heat_transform(hermite(2), {1, 0.5});
    cplx ref = convolve([](double y) { return h(2, y); }, 0.5, 0.0);
    CHECK(std::abs(analytic_continue(F, {{0.0}, {0.0}}) - ref) < 1e-10);
    // continued values at complex points
    for (double y : {0.5, 1.5}) {
        cplx z(0.3, y);
        cplx r = convolve([](double s) { return h(3, s); }, 1.0, z);
        CHECK(std::abs(analytic_continue(heat_transform(hermite(3), {1, 1.0}), {{0.3}, {y}}) - r) < 1e-9);
    }
    // mode eigenvalue and Gaussian semigroup
    SpectralRep M = heat_transform(fourier_mode(1.0), {1, 1.0});
    cplx v = analytic_continue(M, {{0.0}, {0.0}});
    CHECK(v.real() == doctest::Approx(0.6065306597).epsilon(1e-10));
    SpectralRep G = heat_transform(gaussian(0.0, 1.0), {1, 1.0});
    CHECK(std::abs(analytic_continue(G, {{0.0}, {1.0}}) - oracle::gauss(2.0, cplx(0, 1))) < 1e-14);
    SpectralRep twice = heat_transform(heat_transform(hermite(4), {1, 0.3}), {1, 0.4});
    SpectralRep once = heat_transform(hermite(4), {1, 0.7});
    for (double x : {-1.0, 0.4})
        CHECK(std::abs(analytic_continue(twice, {{x}, {0.6}}) - analytic_continue(once, {{x}, {0.6}})) < 1e-12);
    cplx mode = analytic_continue(M, {{0.0}, {1.2}});
    CHECK(std::abs(mode) == doctest::Approx(std::exp(-0.5 - 1.2)).epsilon(1e-13));
}

TEST_CASE("isometry on Lebesgue measure")
{
    CheckReport r = isometry_check_lebesgue(hermite(0), {1, 1.0});
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-8));
    CheckReport z = isometry_check_lebesgue(zero_function(Geometry::euclidean), {1, 1.0});
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CheckReport two = isometry_check_lebesgue(hermite(0) + hermite(3), {1, 0.5});
    CHECK(two.lhs == doctest::Approx(2.0).epsilon(1e-7));
    // independent 2-d quadrature of the left side for gaussian(0,1), t = 0.5
    double t = 0.5;
    double lhs = oracle::simpson2(
        [&](double x, double y) {
            return std::norm(oracle::gauss(1 + t, cplx(x, y))) * std::exp(-y * y / t) / std::sqrt(oracle::pi * t);
        },
        -12, 12, -6, 6);
    CheckReport g = isometry_check_lebesgue(gaussian(0.0, 1.0), {1, t});
    CHECK(g.lhs == doctest::Approx(lhs).epsilon(1e-9));
    CHECK(g.rhs == doctest::Approx(0.2820947918).epsilon(1e-10));
    // d = 2 and 3 at the default budget
    CHECK(isometry_check_lebesgue(hermite({1, 2}), {2, 0.5}).rel_err < 1e-4);
    CHECK(isometry_check_lebesgue(hermite({0, 1, 0}), {3, 1.0}).rel_err < 1e-4);
}

TEST_CASE("wrong variance negative control fails")
{
    EuclidOptions bad;
    bad.variance_factor = 2.0;
    CHECK_FALSE(isometry_check_lebesgue(hermite(0), {1, 0.5}, bad).pass);
    CHECK_FALSE(isometry_check_lebesgue(hermite(2), {1, 1.0}, bad).pass);
}

TEST_CASE("isometry on Gaussian measure")
{
    CheckReport c = isometry_check_gaussian(constant(1.0), {1.0}, {1, 1.0});
    CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(isometry_check_gaussian(gaussian(0.0, 1.0), {1.0}, {1, 1.0}).rel_err < 1e-8);
    CheckReport m = isometry_check_gaussian(fourier_mode(1.0), {2.0}, {1, 1.0});
    CHECK(m.rel_err < 1e-7);
    CHECK_THROWS_AS(isometry_check_gaussian(hermite(0), {0.4}, {1, 1.0}), DomainError);
}

TEST_CASE("pointwise bounds")
{
    auto grid = default_grid(1, 3.0, 21);
    CheckReport r = pointwise_bound_check(hermite(0), {1, 1.0}, grid);
    CHECK(r.pass);
    CHECK(r.lhs <= 1.0);
    CHECK(pointwise_bound_check(gaussian(0.0, 1.0), {1, 0.5}, grid).lhs <= 1.0);
    CHECK(pointwise_bound_check(zero_function(Geometry::euclidean), {1, 1.0}, grid).pass);
    CHECK(lp_pointwise_bound_check(gaussian(0.0, 1.0), 1.0, {1, 1.0}, grid).lhs <= 1.0);
    CheckReport l2 = lp_pointwise_bound_check(hermite(0), 2.0, {1, 1.0}, grid);
    CHECK(l2.lhs == doctest::Approx(r.lhs).epsilon(1e-10));
    // ||rho_t||_q closed form at y = 0: (2 pi t)^{-1/2} (2 pi t/q)^{1/2q}
    double q = 3.0, t = 0.7;
    double ref = std::pow(oracle::simpson<double>([&](double x) { return std::pow(oracle::gauss(t, x).real(), q); }, -12, 12), 1 / q);
    CHECK(heat_kernel_lq_norm({1, t}, q) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("inversion")
{
    SpectralRep G = heat_transform(gaussian(0.0, 1.0), {1, 1.0});
    CHECK(invert_ball(G, {0.0}, 8.0).real() == doctest::Approx(0.3989422804).epsilon(1e-6));
    CHECK(std::abs(invert_ball(heat_transform(hermite(1), {1, 1.0}), {0.0}, 3.0)) < 1e-14);
    CHECK(invert_adjoint(G, {0.0}, 8.0).real() == doctest::Approx(0.3989422804).epsilon(1e-5));
    SpectralRep H = heat_transform(hermite(2), {1, 0.5});
    CHECK(std::abs(invert_adjoint(H, {0.3}, 8 * std::sqrt(0.5)) - invert_ball(H, {0.3}, 8 * std::sqrt(0.5))) < 2e-5);
    CHECK(std::abs(invert_smoothed(G, {0.0}, 0.999) - 0.3989422804) < 1e-3);
    SpectralRep M = heat_transform(fourier_mode(1.0), {1, 1.0});
    cplx sm = invert_smoothed(M, {0.4}, 0.5);
    CHECK(std::abs(sm - std::exp(-0.25) * std::exp(cplx(0, 0.4))) < 1e-10);
    CHECK(std::abs(invert_ball(heat_transform(zero_function(Geometry::euclidean), {1, 1.0}), {0.0}, 4.0)) == 0.0);
    // error shrinks with R beyond 4 sqrt(t) for a low-order function
    double prev = INFINITY;
    for (double k : {4.0, 6.0, 8.0}) {
        double e = std::abs(invert_ball(H, {0.5}, k * std::sqrt(0.5)) - h(2, 0.5));
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("fourier range criterion")
{
    CHECK(fourier_range_test(exact_transform(gaussian(0.0, 2.0)), 1.0).pass);
    CHECK_FALSE(fourier_range_test(exact_transform(gaussian(0.0, 1.0)), 2.0).pass);
    CHECK(fourier_range_test(heat_transform(hermite(3), {1, 0.8}), 0.8).pass);
}

TEST_CASE("wick polynomials and sobolev identities")
{
    WickPolynomial w = wick_polynomial(1, {1, 1.0});
    CHECK(w(0.0) == -0.5);
    CHECK(w(2.0) == doctest::Approx(1.5).epsilon(1e-15));
    WickPolynomial w2 = wick_polynomial(2, {1, 1.0});
    CHECK(w2.coef.back() == doctest::Approx(1.0).epsilon(1e-15));
    WickPolynomial w3 = wick_polynomial(1, {3, 0.5});
    // |y|^2/t^2 - d/(2t)
    CHECK(w3.coef[1] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(w3.coef[0] == doctest::Approx(-3.0).epsilon(1e-14));

    CheckReport s = sobolev_norm_check(hermite(0), 1, {1, 1.0}, 1.0);
    CHECK(s.rhs == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.rel_err < 1e-7);
    CHECK(sobolev_norm_check(gaussian(0.0, 1.0), 2, {1, 0.5}, default_sobolev_constant(2, {1, 0.5})).rel_err < 1e-6);
    CheckReport z = sobolev_norm_check(zero_function(Geometry::euclidean), 1, {1, 1.0}, 1.0);
    CHECK(z.lhs == 0.0);
    CheckReport img = sobolev_image_check(hermite(0), 3, {1, 1.0});
    CHECK(std::isfinite(img.lhs));
    CHECK(std::isfinite(img.values["C"]));
}

TEST_CASE("smooth recovery and bargmann scans")
{
    CheckReport a = smooth_pointwise_inversion(gaussian(0.0, 1.0), {1, 1.0}, {0.0});
    CHECK(a.pass);
    CHECK(a.lhs == doctest::Approx(0.3989422804).epsilon(1e-6));
    CheckReport b = smooth_pointwise_inversion(hermite(2), {1, 1.0}, {1.0});
    CHECK(std::abs(b.lhs - h(2, 1.0)) < 1e-6);
    CheckReport s = bargmann_bound_scan(gaussian(0.0, 1.0), {1, 1.0}, BargmannMode::schwartz, 4);
    CHECK(s.pass);
    CheckReport z = bargmann_bound_scan(zero_function(Geometry::euclidean), {1, 1.0}, BargmannMode::schwartz, 2);
    CHECK(z.lhs == 0.0);
}

TEST_CASE("multiplication recovers the heat-range preimage")
{
    CheckReport g = multiply_in_range(gaussian(0.0, 1.0), 1.0, gaussian(0.0, 1.0), 1.0);
    CHECK(g.pass);
    CHECK(g.values["r"] == doctest::Approx(0.5));
    CHECK(g.values["residual_abs"] <= 1e-8);
    MultiplyResult m = multiply_recover(fourier_mode(1.0), 1.0, fourier_mode(2.0), 1.0);
    REQUIRE(m.f.lines.size() == 1);
    CHECK(m.f.lines[0].first == doctest::Approx(3.0));
    CHECK(std::abs(m.f.lines[0].second - std::exp(-0.25)) < 1e-12);
    CheckReport z = multiply_in_range(zero_function(Geometry::euclidean), 1.0, gaussian(0.0, 1.0), 1.0);
    CHECK(z.pass);
}
