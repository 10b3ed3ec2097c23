#include "heatrange/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatrange {

namespace {

template <typename T>
T pairwise_impl(const T* p, std::size_t n)
{
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_impl(p, h) + pairwise_impl(p + h, n - h);
}

std::vector<double> tridiag_eigenvalues(const std::vector<double>& off, int n)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 0; k + 1 < n; ++k) sub(k) = off[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolve failed");
    std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(x.begin(), x.end());
    return x;
}

// Orthonormal Hermite polynomials for the weight e^{-x^2}: returns p_n(x),
// p_{n-1}(x) and sum_{k<n} p_k(x)^2.
struct HermiteEval {
    double pn, pn1, christoffel;
};

HermiteEval hermite_orthonormal(int n, double x)
{
    double p0 = std::pow(kPi, -0.25);
    double prev = 0.0, cur = p0, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += cur * cur;
        double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev, sum};
}

struct LegendreEval {
    double pn, pn1, christoffel;
};

// Classical Legendre P_n, P_{n-1} and sum of squares of the orthonormal ones.
LegendreEval legendre(int n, double x)
{
    double prev = 0.0, cur = 1.0, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += (2.0 * k + 1.0) / 2.0 * cur * cur;
        double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return {cur, prev, sum};
}

}  // namespace

std::string QuadratureRule::domain() const
{
    std::ostringstream os;
    switch (kind) {
    case RuleKind::gauss_hermite: return "real line with weight e^{-x^2}";
    case RuleKind::gauss_legendre: os << "[" << a << ", " << b << "]"; break;
    case RuleKind::trapezoid_periodic: os << "periodic [" << a << ", " << b << ")"; break;
    }
    return os.str();
}

double QuadratureRule::integrate(const std::function<double(double)>& g) const
{
    std::vector<double> t(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) t[i] = weights[i] * g(nodes[i]);
    return pairwise_sum(t);
}

cplx QuadratureRule::integrate_c(const std::function<cplx(double)>& g) const
{
    std::vector<cplx> t(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) t[i] = weights[i] * g(nodes[i]);
    return pairwise_sum(t);
}

QuadratureRule gauss_hermite(int n)
{
    if (n < 1) throw DomainError("gauss_hermite: n must be at least 1");
    std::vector<double> off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    std::vector<double> x = tridiag_eigenvalues(off, n);

    QuadratureRule r;
    r.kind = RuleKind::gauss_hermite;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = x[i];
        for (int it = 0; it < 3; ++it) {
            HermiteEval e = hermite_orthonormal(n, xi);
            double d = std::sqrt(2.0 * n) * e.pn1;
            if (d == 0.0) break;
            double step = e.pn / d;
            xi -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(xi))) break;
        }
        r.nodes[i] = xi;
        r.weights[i] = 1.0 / hermite_orthonormal(n, xi).christoffel;
    }
    // Exact symmetry about the origin.
    for (int i = 0; i < n / 2; ++i) {
        double xs = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
        double ws = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
        r.nodes[i] = -xs;
        r.nodes[n - 1 - i] = xs;
        r.weights[i] = r.weights[n - 1 - i] = ws;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

QuadratureRule gauss_legendre(int n, double a, double b)
{
    if (n < 1) throw DomainError("gauss_legendre: n must be at least 1");
    if (!(a < b)) throw DomainError("gauss_legendre: degenerate interval");
    std::vector<double> off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    std::vector<double> x = tridiag_eigenvalues(off, n);

    std::vector<double> xs(n), ws(n);
    for (int i = 0; i < n; ++i) {
        double xi = x[i];
        for (int it = 0; it < 3; ++it) {
            LegendreEval e = legendre(n, xi);
            double d = n * (xi * e.pn - e.pn1) / (xi * xi - 1.0);
            if (d == 0.0 || !std::isfinite(d)) break;
            double step = e.pn / d;
            xi -= step;
            if (std::abs(step) < 1e-16) break;
        }
        xs[i] = xi;
        ws[i] = 1.0 / legendre(n, xi).christoffel;
    }
    for (int i = 0; i < n / 2; ++i) {
        double s = 0.5 * (xs[n - 1 - i] - xs[i]);
        double w = 0.5 * (ws[n - 1 - i] + ws[i]);
        xs[i] = -s;
        xs[n - 1 - i] = s;
        ws[i] = ws[n - 1 - i] = w;
    }
    if (n % 2 == 1) xs[n / 2] = 0.0;

    QuadratureRule r;
    r.kind = RuleKind::gauss_legendre;
    r.a = a;
    r.b = b;
    r.nodes.resize(n);
    r.weights.resize(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = c + h * xs[i];
        r.weights[i] = h * ws[i];
    }
    return r;
}

QuadratureRule trapezoid_periodic(int n, double a, double b)
{
    if (n < 1) throw DomainError("trapezoid_periodic: n must be at least 1");
    if (!(a < b)) throw DomainError("trapezoid_periodic: degenerate interval");
    QuadratureRule r;
    r.kind = RuleKind::trapezoid_periodic;
    r.a = a;
    r.b = b;
    double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(a + h * i);
        r.weights.push_back(h);
    }
    return r;
}

double integrate_envelope(const QuadratureRule& gh, double P, double c,
                          const std::function<double(double)>& g)
{
    if (!(P > 0.0)) throw NumericalError("integrate_envelope: nonpositive envelope (divergent integral)");
    double s = std::sqrt(2.0 / P);
    std::vector<double> t(gh.size());
    for (std::size_t j = 0; j < gh.size(); ++j) {
        double u = gh.nodes[j];
        t[j] = gh.weights[j] * std::exp(u * u) * g(c + s * u);
    }
    return s * pairwise_sum(t);
}

cplx integrate_envelope_c(const QuadratureRule& gh, double P, double c,
                          const std::function<cplx(double)>& g)
{
    if (!(P > 0.0)) throw NumericalError("integrate_envelope: nonpositive envelope (divergent integral)");
    double s = std::sqrt(2.0 / P);
    std::vector<cplx> t(gh.size());
    for (std::size_t j = 0; j < gh.size(); ++j) {
        double u = gh.nodes[j];
        t[j] = gh.weights[j] * std::exp(u * u) * g(c + s * u);
    }
    return s * pairwise_sum(t);
}

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v.data(), v.size()); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise_impl(v.data(), v.size()); }

namespace {
template <typename T>
T series_sin(T x)
{
    T x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
}
template <typename T>
T series_sinh(T x)
{
    T x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
}
}  // namespace

double sin_over_x(double x) { return std::abs(x) < 1e-2 ? series_sin(x) : std::sin(x) / x; }
cplx sin_over_x(cplx x) { return std::abs(x) < 1e-2 ? series_sin(x) : std::sin(x) / x; }
double sinh_over_x(double x) { return std::abs(x) < 1e-2 ? series_sinh(x) : std::sinh(x) / x; }
cplx sinh_over_x(cplx x) { return std::abs(x) < 1e-2 ? series_sinh(x) : std::sinh(x) / x; }

double ChebApprox::operator()(double x) const
{
    if (coefficients.empty()) return 0.0;
    double s = (2.0 * x - a - b) / (b - a);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 1;) {
        double t = 2.0 * s * b1 - b2 + coefficients[k];
        b2 = b1;
        b1 = t;
    }
    return s * b1 - b2 + coefficients[0];
}

std::vector<double> ChebApprox::magnitudes() const
{
    std::vector<double> m;
    for (double c : coefficients) m.push_back(std::abs(c));
    return m;
}

double ChebApprox::decay_rate() const
{
    std::vector<double> m = magnitudes();
    double top = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
    if (top == 0.0 || m.size() < 2) return 0.0;
    double floor = 1e-15 * top;
    // Skip the leading run before the largest coefficient.
    std::size_t k0 = std::max_element(m.begin(), m.end()) - m.begin();
    if (m.size() - k0 < 2) return 1.0;
    double sk = 0, sl = 0, skk = 0, skl = 0;
    double cnt = 0;
    for (std::size_t k = k0; k < m.size(); ++k) {
        double l = std::log(std::max(m[k], floor));
        sk += k;
        sl += l;
        skk += double(k) * k;
        skl += k * l;
        cnt += 1;
    }
    double slope = (cnt * skl - sk * sl) / (cnt * skk - sk * sk);
    return std::exp(slope);
}

ChebApprox cheb_fit(const std::vector<std::pair<double, double>>& samples,
                    double a, double b, int degree)
{
    if (!(a < b)) throw DomainError("cheb_fit: degenerate interval");
    if (samples.size() < 8) throw DomainError("cheb_fit: need at least 8 samples");
    if (degree < 0 || degree + 1 > int(samples.size()))
        throw DomainError("cheb_fit: degree must be below the sample count");
    for (const auto& s : samples)
        if (s.first < a - 1e-12 * (b - a) || s.first > b + 1e-12 * (b - a))
            throw DomainError("cheb_fit: sample outside the fit interval");

    const int m = int(samples.size()), n = degree + 1;
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        double s = (2.0 * samples[i].first - a - b) / (b - a);
        double t0 = 1.0, t1 = s;
        for (int k = 0; k < n; ++k) {
            if (k == 0) A(i, k) = 1.0;
            else if (k == 1) A(i, k) = s;
            else {
                double t2 = 2.0 * s * t1 - t0;
                t0 = t1;
                t1 = t2;
                A(i, k) = t2;
            }
        }
        y(i) = samples[i].second;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cond = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;
    if (!(cond < 1e12)) {
        std::ostringstream os;
        os << "cheb_fit: rank-deficient design, condition estimate " << cond;
        throw NumericalError(os.str());
    }
    Eigen::VectorXd c = svd.solve(y);

    ChebApprox out;
    out.a = a;
    out.b = b;
    out.coefficients.assign(c.data(), c.data() + n);
    out.condition = cond;
    double res = 0.0;
    for (int i = 0; i < m; ++i) res = std::max(res, std::abs(out(samples[i].first) - samples[i].second));
    out.fit_residual = res;
    return out;
}

std::vector<double> chebyshev_nodes(int n, double a, double b)
{
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k)
        x[k] = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(kPi * (k + 0.5) / n);
    return x;
}

}  // namespace heatrange
