#include "heatrange/hyperbolic3.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

namespace heatrange {

namespace {

const QuadratureRule& gl_rule(int n)
{
    static thread_local std::map<int, QuadratureRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n, -1.0, 1.0)).first;
    return it->second;
}

template <typename T, typename F>
T gl_integrate(int n, double a, double b, F&& g)
{
    const QuadratureRule& q = gl_rule(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<T> v(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) v[i] = q.weights[i] * h * g(c + h * q.nodes[i]);
    return pairwise_sum(std::span<const T>(v));
}

template <typename T, typename F>
T panel_integrate(int panels, int per, double a, double b, F&& g)
{
    panels = std::max(1, panels);
    double h = (b - a) / panels;
    std::vector<T> v(panels);
    for (int k = 0; k < panels; ++k) v[k] = gl_integrate<T>(per, a + k * h, a + (k + 1) * h, g);
    return pairwise_sum(std::span<const T>(v));
}

constexpr int kPanelNodes = 32;

// Integral over the lambda range of F, for an integrand oscillating like e^{i lambda re}.
template <typename T, typename G>
T lambda_integrate(const RadialSpectralFn& F, double lm, double re, G&& g)
{
    int panels = std::max(F.nodes / kPanelNodes, int(std::ceil(lm * (std::abs(re) + 1.0) / 10.0)));
    return panel_integrate<T>(panels, kPanelNodes, 0.0, lm, g);
}

void check_point(const std::vector<double>& x)
{
    if (x.size() != 4) throw DomainError("H^3 points are 4-vectors");
    if (std::abs(minkowski(x, x) - 1.0) > 1e-10 * std::max(1.0, x[0] * x[0]) || !(x[0] > 0))
        throw DomainError("point is not on the upper hyperboloid Q(x,x) = 1");
}

double tangent_length(const std::vector<double>& x, const std::vector<double>& Y)
{
    check_point(x);
    if (Y.size() != 4) throw DomainError("tangent vectors are 4-vectors");
    double scale = 1.0 + std::abs(x[0]) * (std::abs(Y[0]) + std::abs(Y[1]) + std::abs(Y[2]) + std::abs(Y[3]));
    if (std::abs(minkowski(x, Y)) > 1e-10 * scale) throw DomainError("Y is not tangent at x (Q(Y,x) != 0)");
    return std::sqrt(std::max(0.0, -minkowski(Y, Y)));
}

double inv_2pi2() { return 1.0 / (2 * kPi * kPi); }

bool is_zero(const RadialSpectralFn& F)
{
    return F.kind == RadialSpectralFn::Kind::constant ? F.constant == 0.0 : !F.ghat;
}

// Orthonormal tangent frame at x.
std::vector<std::vector<double>> tangent_frame(const std::vector<double>& x)
{
    std::vector<std::vector<double>> frame;
    std::vector<std::vector<double>> cand{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}};
    for (auto v : cand) {
        if (frame.size() == 3) break;
        double q = minkowski(v, x);
        for (int i = 0; i < 4; ++i) v[i] -= q * x[i];
        for (const auto& e : frame) {
            double c = minkowski(v, e);
            for (int i = 0; i < 4; ++i) v[i] += c * e[i];
        }
        double n2 = -minkowski(v, v);
        if (n2 < 1e-8) continue;
        double n = std::sqrt(n2);
        for (auto& c : v) c /= n;
        frame.push_back(v);
    }
    return frame;
}

// (rho^2) int_{H^3} int_{S^2} |F(exp_x(i rho omega))|^2 domega dx, reduced to the
// distance r from x0 and u = cos of the angle between Y and the radial direction.
double ring_raw(const RadialSpectralFn& F, double rho, int r_nodes, int beta_nodes)
{
    double a = F.decay + F.t;
    if (F.kind == RadialSpectralFn::Kind::constant) throw DomainError("ring_integral: constant F is not square-integrable on H^3");
    if (!(F.decay > 0)) throw DomainError("ring_integral: requires Gaussian spectral decay");
    double rmax = a + std::sqrt(a * a + 50 * a) + 1.0;
    int panels = std::max(1, int(std::ceil(rmax / 1.5)));
    int per = std::max(8, r_nodes / 3);
    double cr = std::cos(rho), sr = std::sin(rho);
    double radial = panel_integrate<double>(panels, per, 0.0, rmax, [&](double r) {
        double ch = std::cosh(r), sh = std::sinh(r);
        // |F|^2 is even in u, so integrate u in [0,1] and double.
        double fib = gl_integrate<double>(beta_nodes, 0.0, 1.0, [&](double u) {
            cplx q(cr * ch, sr * sh * u);
            return std::norm(evaluate_at_radius(F, std::acosh(q)));
        });
        return 4 * kPi * sh * sh * 2 * kPi * 2 * fib;
    });
    return rho * rho * radial;
}

}  // namespace

double minkowski(const std::vector<double>& a, const std::vector<double>& b)
{
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

cplx minkowski(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

const std::vector<double>& h3_basepoint()
{
    static const std::vector<double> x0{1, 0, 0, 0};
    return x0;
}

std::vector<double> h3_exp(const std::vector<double>& x, const std::vector<double>& Y)
{
    double n = tangent_length(x, Y);
    std::vector<double> out(4);
    for (int i = 0; i < 4; ++i) out[i] = std::cosh(n) * x[i] + sinh_over_x(n) * Y[i];
    return out;
}

std::vector<cplx> h3_exp_i(const std::vector<double>& x, const std::vector<double>& Y)
{
    double n = tangent_length(x, Y);
    std::vector<cplx> out(4);
    for (int i = 0; i < 4; ++i) out[i] = cplx(std::cos(n) * x[i], sin_over_x(n) * Y[i]);
    return out;
}

std::vector<double> h3_tangent(const std::vector<double>& x, const std::vector<double>& d, double len)
{
    check_point(x);
    std::vector<double> v = d;
    double q = minkowski(v, x);
    for (int i = 0; i < 4; ++i) v[i] -= q * x[i];
    double n2 = -minkowski(v, v);
    if (!(n2 > 1e-24)) throw DomainError("h3_tangent: direction has no tangential component");
    double n = std::sqrt(n2);
    for (auto& c : v) c *= len / n;
    return v;
}

ComplexRadius complex_distance(const std::vector<cplx>& w, const std::vector<double>& x0)
{
    if (w.size() != 4 || x0.size() != 4) throw DomainError("complex_distance: expected 4-vectors");
    std::vector<cplx> xc(x0.begin(), x0.end());
    cplx q = minkowski(w, xc);
    ComplexRadius cr;
    cr.r = std::acosh(q);
    cr.near_branch = std::abs(q - 1.0) < 1e-10 || std::abs(q + 1.0) < 1e-10;
    return cr;
}

cplx spherical_fn(double lambda, cplx r)
{
    if (std::abs(r) > 1e-6 && std::abs(std::sinh(r)) < 1e-13)
        throw NumericalError("spherical_fn: pole at r = i pi k");
    return sin_over_x(lambda * r) / sinh_over_x(r);
}

double RadialSpectralFn::lambda_max(double s) const
{
    double a = decay + t;
    double lm = INFINITY;
    if (a > 0) lm = (std::abs(s) + std::sqrt(s * s + 80.0 * a)) / a;
    if (lambda_cap > 0) lm = std::min(lm, lambda_cap);
    if (!std::isfinite(lm)) throw DomainError("spectral integral does not converge: no decay and no cutoff");
    return lm;
}

double h3_forward_transform(const TestFunction& f, double lambda)
{
    if (f.geometry != Geometry::hyperbolic3_radial) throw DomainError("h3_forward_transform: expected a radial H^3 function");
    double top = 0.0;
    for (const auto& t : f.terms) {
        if (t.kind == AtomKind::bump) top = std::max(top, t.width);
        else if (t.kind == AtomKind::spectral_gaussian) top = std::max(top, 12.0 / t.width + 2.0);
        else throw DomainError("h3_forward_transform: atom is not a radial H^3 function");
    }
    if (f.terms.empty()) return 0.0;
    // 4 pi int f(r) r sin(lambda r)/(lambda r) sinh r dr
    return 4 * kPi * panel_integrate<double>(40, 50, 0.0, top, [&](double r) {
               return h3_radial_value(f, r) * r * sin_over_x(lambda * r) * std::sinh(r);
           });
}

RadialSpectralFn h3_spherical_transform(const TestFunction& f)
{
    if (f.geometry != Geometry::hyperbolic3_radial) throw DomainError("h3_spherical_transform: expected a radial H^3 function");
    RadialSpectralFn F;
    if (f.terms.empty()) return F;
    TestFunction gauss = zero_function(Geometry::hyperbolic3_radial), bumps = gauss;
    double decay = INFINITY, min_radius = 1.0;
    for (const auto& t : f.terms) {
        if (t.kind == AtomKind::spectral_gaussian) {
            gauss.terms.push_back(t);
            decay = std::min(decay, 1.0 / (t.width * t.width));
        } else if (t.kind == AtomKind::bump) {
            bumps.terms.push_back(t);
            min_radius = std::min(min_radius, t.width);
        } else {
            throw DomainError("h3_spherical_transform: atom is not a radial H^3 function");
        }
    }
    SpectralRep closed = exact_transform(gauss);
    if (bumps.terms.empty()) {
        F.ghat = [closed](double l) { return h3_transform_value(closed, l); };
        F.decay = decay;
        return F;
    }
    auto memo = std::make_shared<std::unordered_map<double, double>>();
    F.ghat = [closed, bumps, memo](double l) {
        auto it = memo->find(l);
        double b;
        if (it != memo->end()) b = it->second;
        else b = (*memo)[l] = h3_forward_transform(bumps, l);
        return b + (closed.source.terms.empty() ? 0.0 : h3_transform_value(closed, l));
    };
    // A compactly supported f has only root-exponential spectral decay.
    F.decay = 0.0;
    F.lambda_cap = 600.0 / min_radius;
    F.nodes = int(20 * F.lambda_cap);
    return F;
}

double h3_inverse_transform(const RadialSpectralFn& F, double r)
{
    if (F.kind == RadialSpectralFn::Kind::constant) return F.constant;
    if (is_zero(F)) return 0.0;
    double lm = F.lambda_max(0.0);
    return inv_2pi2() * lambda_integrate<double>(F, lm, r, [&](double l) {
               return F.value(l) * (sin_over_x(l * r) / sinh_over_x(r)) * l * l;
           });
}

double h3_plancherel_norm(const RadialSpectralFn& F)
{
    if (F.kind == RadialSpectralFn::Kind::constant) throw DomainError("h3_plancherel_norm: constants are not in L^2(H^3)");
    if (is_zero(F)) return 0.0;
    RadialSpectralFn G = F;
    G.decay = 2 * F.decay;
    G.t = 2 * F.t;
    double lm = G.lambda_max(0.0);
    return inv_2pi2() * lambda_integrate<double>(F, lm, 0.0, [&](double l) {
               double v = F.value(l);
               return v * v * l * l;
           });
}

RadialSpectralFn point_mass()
{
    RadialSpectralFn F;
    F.ghat = [](double) { return 1.0; };
    return F;
}

RadialSpectralFn h3_constant(double c)
{
    RadialSpectralFn F;
    F.kind = RadialSpectralFn::Kind::constant;
    F.constant = c;
    return F;
}

RadialSpectralFn h3_heat_transform(const RadialSpectralFn& F, double t)
{
    if (!(t > 0)) throw DomainError("h3_heat_transform: t must be positive");
    RadialSpectralFn G = F;
    // Constants are harmonic (multiplier 1 at lambda = i); t is still recorded for the fiber.
    G.t += t;
    return G;
}

double h3_heat_kernel(double t, double r)
{
    if (!(t > 0)) throw DomainError("h3_heat_kernel: t must be positive");
    return fiber_gaussian(Duality::compact, t, r) / fiber_jacobian(Duality::compact, r);
}

cplx evaluate_at_radius(const RadialSpectralFn& F, cplx r)
{
    if (F.kind == RadialSpectralFn::Kind::constant) return F.constant;
    if (is_zero(F)) return 0.0;
    if (std::abs(r) > 1e-6 && std::abs(std::sinh(r)) < 1e-13)
        throw NumericalError("evaluate_crown: pole of the continued spherical functions");
    double lm = F.lambda_max(std::abs(r.imag()));
    cplx den = sinh_over_x(r);
    return inv_2pi2() * lambda_integrate<cplx>(F, lm, r.real(), [&](double l) {
               return F.value(l) * sin_over_x(l * r) * l * l;
           }) / den;
}

cplx evaluate_crown(const RadialSpectralFn& F, const std::vector<double>& x, const std::vector<double>& Y)
{
    ComplexRadius cr = complex_distance(h3_exp_i(x, Y), F.x0);
    return evaluate_at_radius(F, cr.r);
}

double factored_radial(const RadialSpectralFn& F, double rho)
{
    if (F.kind == RadialSpectralFn::Kind::constant) return F.constant * sin_over_x(rho);
    if (is_zero(F)) return 0.0;
    double lm = F.lambda_max(std::abs(rho));
    return inv_2pi2() * lambda_integrate<double>(F, lm, 0.0, [&](double l) {
               return F.value(l) * sinh_over_x(l * rho) * l * l;
           });
}

namespace {

double inversion_extent(const RadialSpectralFn& F, double R)
{
    if (std::isfinite(R)) return R;
    double t = F.t;
    if (!(t > 0)) throw DomainError("inversion_L: F carries no heat time");
    double b = 0.5 / t;
    if (F.kind == RadialSpectralFn::Kind::spectral) {
        if (!(F.decay > 0)) throw DomainError("inversion_L with R = infinity requires Gaussian spectral decay");
        b -= 0.5 / (F.decay + t);
    }
    return std::sqrt(45.0 / b);
}

}  // namespace

double inversion_L(const RadialSpectralFn& F, double R)
{
    if (!(R >= 0)) throw DomainError("inversion_L: R must be nonnegative");
    if (R == 0.0) return 0.0;
    double top = inversion_extent(F, R);
    int panels = int(std::ceil(top / std::sqrt(std::max(F.t, 1e-3)))) + 1;
    return panel_integrate<double>(panels, 16, 0.0, top, [&](double rho) {
        return 4 * kPi * rho * rho * fiber_gaussian(Duality::noncompact, F.t, rho) * factored_radial(F, rho);
    });
}

double inversion_L_direct(const RadialSpectralFn& F, double R)
{
    if (!(R >= 0) || !(R < kPi)) throw DomainError("inversion_L_direct: requires 0 <= R < pi");
    if (R == 0.0) return 0.0;
    return panel_integrate<double>(4, 16, 0.0, R, [&](double rho) {
        cplx v = evaluate_at_radius(F, cplx(0.0, rho));
        return 4 * kPi * rho * rho * inversion_density(Duality::noncompact, F.t, rho) * v.real();
    });
}

double ring_integral(const RadialSpectralFn& F, double rho, int r_nodes, int beta_nodes)
{
    if (!(rho > 0) || !(rho < kPi / 2)) throw DomainError("ring_integral: requires 0 < R < pi/2");
    if (is_zero(F)) return 0.0;
    return sin_over_x(2 * rho) * ring_raw(F, rho, r_nodes, beta_nodes);
}

CheckReport isometry_M_probe(const TestFunction& f, const MProbeOptions& opt)
{
    if (!(opt.t > 0)) throw DomainError("isometry_M_probe: t must be positive");
    const double hi = kPi / 2 - 0.05, lo = 0.1;
    std::vector<double> grid = opt.R_grid;
    if (grid.empty())
        for (int i = 0; i < 8; ++i) grid.push_back(0.2 + (hi - 0.2) * i / 7.0);
    for (double R : grid)
        if (!(R > 0) || R > hi + 1e-12) throw DomainError("isometry_M_probe: R grid must lie in (0, pi/2 - 0.05]");
    const double t = opt.t;
    const double Rmax = opt.R_max > 0 ? opt.R_max : 12 * std::sqrt(t);

    CheckReport r;
    r.id = "h3.isometry_M";
    r.kind = CheckKind::probe;
    r.values["t"] = t;
    r.values["R_max"] = Rmax;
    r.flags["extrapolated"] = true;
    double norm2 = exact_l2_norm(f).value;
    r.rhs = norm2;
    if (f.terms.empty()) {
        for (std::size_t i = 0; i < grid.size(); ++i) r.values["M_" + std::to_string(i)] = 0.0;
        r.lhs = 0.0;
        r.note = "zero function";
        r.finish(0.0);
        return r;
    }
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(f), t);

    // M(R) on the grid by direct quadrature in rho.
    std::vector<double> M;
    bool finite = true, increasing = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double R = grid[i];
        double m = gl_integrate<double>(12, 0.0, R, [&](double rho) {
            return isometry_density(Duality::noncompact, t, rho) * ring_raw(F, rho, 48, 24);
        });
        finite = finite && std::isfinite(m);
        if (i > 0) increasing = increasing && m > M.back();
        M.push_back(m);
        r.values["R_" + std::to_string(i)] = R;
        r.values["M_" + std::to_string(i)] = m;
    }

    // Continuation: K(rho) = ring(rho)/rho^2 is even and entire-looking; fit it in u = rho^2.
    std::vector<std::pair<double, double>> samples;
    for (double u : chebyshev_nodes(opt.samples, lo * lo, hi * hi)) {
        double rho = std::sqrt(u);
        samples.push_back({u, sin_over_x(2 * rho) * ring_raw(F, rho, 48, 24) / (rho * rho)});
    }
    ChebApprox fit = cheb_fit(samples, lo * lo, hi * hi, opt.degree);
    double ext = panel_integrate<double>(int(std::ceil(Rmax / std::sqrt(t))) + 1, 16, 0.0, Rmax, [&](double rho) {
        return std::exp(t - rho * rho / t) * std::pow(kPi * t, -1.5) * rho * rho * fit(rho * rho);
    });
    r.lhs = ext;
    r.nodes = long(opt.samples);
    r.values["M_extrapolated"] = ext;
    r.values["norm_squared"] = norm2;
    r.values["decay_rate"] = fit.decay_rate();
    r.values["fit_residual"] = fit.fit_residual;
    r.values["fit_condition"] = fit.condition;
    r.values["relative_gap"] = std::abs(ext - norm2) / norm2;
    r.gates["finite"] = finite && std::isfinite(ext);
    r.gates["increasing"] = increasing;
    r.gates["chebyshev_trust"] = fit.decay_gate(0.9);
    r.flags["within_10pct"] = std::abs(ext - norm2) <= 0.1 * norm2;
    r.note = "exploratory continuation; within_10pct is informational";
    r.finish(0.0);
    return r;
}

CheckReport ring_growth_probe(const TestFunction& f, double t, const std::vector<double>& radii)
{
    RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(f), t);
    CheckReport r;
    r.id = "h3.ring_growth";
    r.kind = CheckKind::probe;
    bool finite = true, raw_increasing = true, ratio_nonincreasing = true;
    double prev_raw = -INFINITY, prev_ratio = INFINITY;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double R = radii[i];
        double raw = is_zero(F) ? 0.0 : ring_raw(F, R, 48, 24);
        double ring = sin_over_x(2 * R) * raw;
        double ratio = ring * std::exp(-R * R / t);
        finite = finite && std::isfinite(ring);
        raw_increasing = raw_increasing && raw >= prev_raw;
        ratio_nonincreasing = ratio_nonincreasing && ratio <= prev_ratio * (1 + 1e-12);
        prev_raw = raw;
        prev_ratio = ratio;
        r.values["ring_" + std::to_string(i)] = ring;
        r.values["envelope_ratio_" + std::to_string(i)] = ratio;
    }
    r.gates["finite"] = finite;
    r.gates["raw_increasing"] = raw_increasing;
    r.flags["envelope_ratio_nonincreasing"] = ratio_nonincreasing;
    r.nodes = long(radii.size());
    r.finish(0.0);
    return r;
}

std::vector<cplx> radialize(const RadialSpectralFn& F, const std::vector<double>& x, const std::vector<double>& radii,
                            int n_beta)
{
    check_point(x);
    auto frame = tangent_frame(x);
    const QuadratureRule& q = gl_rule(n_beta);
    const int n_phi = 2 * n_beta;
    std::vector<cplx> out;
    for (double rho : radii) {
        std::vector<cplx> acc;
        for (std::size_t i = 0; i < q.size(); ++i) {
            double u = q.nodes[i], s = std::sqrt(std::max(0.0, 1 - u * u));
            for (int k = 0; k < n_phi; ++k) {
                double ph = 2 * kPi * k / n_phi;
                std::vector<double> Y(4);
                for (int j = 0; j < 4; ++j)
                    Y[j] = rho * (u * frame[0][j] + s * (std::cos(ph) * frame[1][j] + std::sin(ph) * frame[2][j]));
                acc.push_back(q.weights[i] * 0.5 / n_phi * evaluate_crown(F, x, Y));
            }
        }
        out.push_back(pairwise_sum(std::span<const cplx>(acc)));
    }
    return out;
}

CheckReport multiplication_failure_demo(const TestFunction& f1, const TestFunction& f2, double t, double s)
{
    if (!(t > 0) || !(s > 0)) throw DomainError("multiplication_failure_demo: t and s must be positive");
    CheckReport r;
    r.id = "h3.multiplication_failure";
    r.kind = CheckKind::probe;
    r.rhs = 1.0;
    if (f1.terms.empty() || f2.terms.empty()) {
        r.lhs = 0.0;
        r.note = "product is identically zero; no divergence";
        r.values["alpha"] = 0.0;
        r.finish(0.0);
        return r;
    }
    RadialSpectralFn F1 = h3_heat_transform(h3_spherical_transform(f1), t);
    RadialSpectralFn F2 = h3_heat_transform(h3_spherical_transform(f2), s);
    const auto& x0 = h3_basepoint();
    auto crown = [&](const RadialSpectralFn& F, double rho) {
        return evaluate_crown(F, x0, std::vector<double>{0, rho, 0, 0});
    };
    // log|G| = c0 + c1 (rho - pi) + c2 log|sin rho|, G = F1 F2 sin(rho)/rho.
    const int n = 24;
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double rho = (kPi - 0.3) + (0.28) * i / (n - 1);
        cplx g = crown(F1, rho) * crown(F2, rho) * sin_over_x(rho);
        A(i, 0) = 1.0;
        A(i, 1) = rho - kPi;
        A(i, 2) = std::log(std::abs(std::sin(rho)));
        b(i) = std::log(std::abs(g));
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    double alpha = -c(2);
    double control = factored_radial(F1, kPi);
    double ratio = std::abs(crown(F1, kPi - 1e-3)) / std::abs(crown(F1, kPi - 0.3));
    r.lhs = alpha;
    r.values["alpha"] = alpha;
    r.values["factored_at_pi"] = control;
    r.values["single_factor_ratio"] = ratio;
    r.nodes = n;
    r.gates["alpha_in_band"] = alpha >= 0.9 && alpha <= 1.1;
    r.gates["control_finite"] = std::isfinite(control);
    r.gates["single_factor_diverges"] = ratio > 100.0;
    r.note = "fit window rho in (pi - 0.3, pi - 0.02)";
    r.finish(0.0);
    return r;
}

}  // namespace heatrange
