#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heatrange {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Bad arguments: geometry mismatch, violated preconditions, unknown names.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The arguments were fine but the computation could not be carried out
// reliably (overflow, rank deficiency, divergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RuleKind { gauss_hermite, gauss_legendre, trapezoid_periodic };

struct QuadratureRule {
    RuleKind kind = RuleKind::gauss_legendre;
    std::vector<double> nodes;
    std::vector<double> weights;
    // Interval for Legendre and trapezoid rules; unused for Hermite.
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return nodes.size(); }
    std::string domain() const;

    // Sum of w_i g(x_i). For gauss_hermite the weight e^{-x^2} is implied.
    double integrate(const std::function<double(double)>& g) const;
    cplx integrate_c(const std::function<cplx(double)>& g) const;
};

QuadratureRule gauss_hermite(int n);
QuadratureRule gauss_legendre(int n, double a, double b);
QuadratureRule trapezoid_periodic(int n, double a, double b);

// Integral of g over the real line against an envelope e^{-P (x-c)^2 / 2},
// using an n-point Hermite rule rescaled to the envelope. The envelope is
// divided back out, so g is the full integrand.
double integrate_envelope(const QuadratureRule& gh, double P, double c,
                          const std::function<double(double)>& g);
cplx integrate_envelope_c(const QuadratureRule& gh, double P, double c,
                          const std::function<cplx(double)>& g);

double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

double sin_over_x(double x);
cplx sin_over_x(cplx x);
double sinh_over_x(double x);
cplx sinh_over_x(cplx x);

struct ChebApprox {
    double a = -1.0;
    double b = 1.0;
    std::vector<double> coefficients;
    double fit_residual = 0.0;
    double condition = 1.0;

    double operator()(double x) const;
    bool extrapolating(double x) const { return x < a || x > b; }
    std::vector<double> magnitudes() const;
    // Geometric decay rate of |c_k| from a log-linear fit; 0 when the
    // coefficients vanish beyond the leading ones.
    double decay_rate() const;
    bool decay_gate(double threshold = 0.9) const { return decay_rate() < threshold; }
};

// Least-squares Chebyshev fit of the given degree. Throws NumericalError
// when the design matrix is numerically rank deficient.
ChebApprox cheb_fit(const std::vector<std::pair<double, double>>& samples,
                    double a, double b, int degree);

// Chebyshev points of the first kind mapped to [a,b], ascending.
std::vector<double> chebyshev_nodes(int n, double a, double b);

}  // namespace heatrange
