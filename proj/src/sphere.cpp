#include "heatrange/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

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

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_tangent(const std::vector<double>& p, const std::vector<double>& Y)
{
    if (p.size() != Y.size()) throw DomainError("tangent vector and base point differ in dimension");
    if (std::abs(dot(p, p) - 1.0) > 1e-10) throw DomainError("base point is not on the unit sphere");
    if (std::abs(dot(p, Y)) > 1e-10 * (1.0 + std::sqrt(dot(Y, Y))))
        throw DomainError("Y is not tangent at p (Y.p != 0)");
}

// Gauss-Legendre on panels of width about `width`, `per` nodes each.
template <typename T, typename F>
T panel_integrate(int per, double a, double b, double width, F&& g)
{
    int panels = std::max(1, int(std::ceil((b - a) / width)));
    double h = (b - a) / panels;
    std::vector<T> v(panels);
    for (int k = 0; k < panels; ++k) v[k] = gl_integrate<T>(per, a + k * h, a + (k + 1) * h, g);
    return pairwise_sum(std::span<const T>(v));
}

int per_panel(int nodes) { return std::max(4, nodes / 4); }

bool is_sphere(const SpectralRep& F) { return F.geometry == Geometry::circle || F.geometry == Geometry::sphere3; }

int eigen_dim(Geometry g) { return g == Geometry::circle ? 1 : 3; }

double eigenvalue(Geometry g, int ell)
{
    return g == Geometry::circle ? double(ell) * ell : double(ell) * (ell + 2);
}

int max_degree(const SpectralRep& F)
{
    int L = 0;
    for (const auto& [l, c] : F.lines) L = std::max(L, std::abs(l));
    return L;
}

// Hyperbolic-line fiber weights for the circle, mirroring FiberDensity.
double circle_fiber(FiberRole role, double t, double y, bool swapped)
{
    bool inv = (role == FiberRole::inversion) != swapped;
    if (inv) return std::exp(-y * y / (2 * t)) / std::sqrt(2 * kPi * t);
    return std::exp(-y * y / t) / std::sqrt(kPi * t);
}

double resolve_tol(const SphereOptions& opt, Geometry g)
{
    if (opt.tol >= 0) return opt.tol;
    return g == Geometry::circle ? 1e-8 : 1e-4;
}

cplx circle_value(const SpectralRep& F, cplx theta)
{
    cplx s = 0.0;
    for (const auto& [l, c] : F.lines) s += c * std::exp(cplx(0, l) * theta);
    return s;
}

// int_{S^3} int_{T_p} g(F(exp_p(iY))) w(|Y|) dY dp for zonal F, reduced to the
// angle alpha between p and the pole, the fiber radius rho, and u = cos of the
// angle between Y and the pole's tangential direction.
template <typename G, typename W>
double reduced_s3_integral(const SpectralRep& F, double t, double rho_max, int nodes, G&& g, W&& weight)
{
    const int L = max_degree(F);
    const int n_alpha = 40 + 4 * L;
    const int n_u = 8 + 2 * L;
    return panel_integrate<double>(per_panel(nodes), 0.0, rho_max, 2 * std::sqrt(t), [&](double rho) {
        double w = weight(rho);
        if (w == 0.0) return 0.0;
        double ch = std::cosh(rho), sh = std::sinh(rho);
        double base = gl_integrate<double>(n_alpha, 0.0, kPi, [&](double alpha) {
            double ca = std::cos(alpha), sa = std::sin(alpha);
            double fib = gl_integrate<double>(n_u, -1.0, 1.0, [&](double u) {
                return g(zonal_value(F, cplx(ch * ca, -sh * sa * u)));
            });
            return 4 * kPi * sa * sa * 2 * kPi * fib;
        });
        return base * rho * rho * w;
    });
}

template <typename G, typename W>
double reduced_circle_integral(const SpectralRep& F, double t, double y_max, int nodes, G&& g, W&& weight)
{
    const int L = max_degree(F);
    const int n_theta = 2 * (2 * L + 4);
    return panel_integrate<double>(per_panel(nodes), -y_max, y_max, 2 * std::sqrt(t), [&](double y) {
        double w = weight(y);
        if (w == 0.0) return 0.0;
        std::vector<double> v(n_theta);
        for (int k = 0; k < n_theta; ++k) v[k] = g(circle_value(F, cplx(2 * kPi * k / n_theta, y)));
        return pairwise_sum(v) * (2 * kPi / n_theta) * w;
    });
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

std::vector<double> sphere_exp(const std::vector<double>& p, const std::vector<double>& Y)
{
    check_tangent(p, Y);
    double n = std::sqrt(dot(Y, Y));
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::cos(n) * p[i] + sin_over_x(n) * Y[i];
    return out;
}

std::vector<cplx> phi_map(const std::vector<double>& p, const std::vector<double>& Y)
{
    check_tangent(p, Y);
    double n = std::sqrt(dot(Y, Y));
    std::vector<cplx> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = cplx(std::cosh(n) * p[i], sinh_over_x(n) * Y[i]);
    return out;
}

cplx bilinear(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nu_kernel(const NuKernel& k, double R)
{
    if (!(k.t > 0)) throw DomainError("nu_kernel: t must be positive");
    if (!(R >= 0)) throw DomainError("nu_kernel: R must be nonnegative");
    if (k.d == 1) return std::exp(-R * R / (2 * k.t)) / std::sqrt(2 * kPi * k.t);
    if (k.d == 3)
        return std::exp(-k.t / 2 - R * R / (2 * k.t)) * std::pow(2 * kPi * k.t, -1.5) / sinh_over_x(R);
    throw DomainError("nu_kernel: d must be 1 or 3");
}

double nu_pde_residual(const NuKernel& k, double R, double h)
{
    auto nu = [&](double t, double r) { return nu_kernel({k.d, t}, r); };
    auto d1 = [&](auto&& f, double x) {
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    };
    auto d2 = [&](auto&& f, double x) {
        return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
    };
    auto in_r = [&](double r) { return nu(k.t, r); };
    auto in_t = [&](double t) { return nu(t, R); };
    double lap = d2(in_r, R) + (k.d - 1) * d1(in_r, R) / std::tanh(R);
    return d1(in_t, k.t) - 0.5 * lap;
}

double nu_normalization(const NuKernel& k)
{
    double top = (k.d - 1) * k.t + 40 * std::sqrt(k.t) + 1.0;
    double c = k.d == 1 ? 2.0 : 4 * kPi;
    return c * gl_integrate<double>(400, 0.0, top, [&](double R) {
        return nu_kernel(k, R) * std::pow(std::sinh(R), k.d - 1);
    });
}

SpectralRep sphere_heat_transform(const TestFunction& f, double t)
{
    if (f.geometry != Geometry::circle && f.geometry != Geometry::sphere3)
        throw DomainError("sphere_heat_transform: expected a function on S^1 or S^3");
    if (!(t > 0)) throw DomainError("sphere_heat_transform: t must be positive");
    SpectralRep F = exact_transform(f);
    for (auto& [l, c] : F.lines) c *= std::exp(-0.5 * t * eigenvalue(f.geometry, l));
    F.t = t;
    return F;
}

cplx zonal_value(const SpectralRep& F, cplx w)
{
    if (F.lines.empty()) return 0.0;
    const int L = max_degree(F);
    cplx prev = 0.0, cur = 1.0, s = 0.0;
    for (int l = 0; l <= L; ++l) {
        auto it = F.lines.find(l);
        if (it != F.lines.end()) s += it->second * cur;
        cplx next = 2.0 * w * cur - prev;
        prev = cur;
        cur = next;
    }
    return s / (kPi * std::sqrt(2.0));
}

cplx continue_sphere(const SpectralRep& F, const std::vector<double>& p, const std::vector<double>& Y)
{
    if (!is_sphere(F)) throw DomainError("continue_sphere: expected a sphere representation");
    std::size_t n = F.geometry == Geometry::circle ? 2 : 4;
    if (p.size() != n) throw DomainError("continue_sphere: point has the wrong dimension");
    std::vector<cplx> z = phi_map(p, Y);
    if (F.geometry == Geometry::circle) {
        cplx s = 0.0;
        for (const auto& [l, c] : F.lines) {
            cplx e = l >= 0 ? z[0] + cplx(0, 1) * z[1] : z[0] - cplx(0, 1) * z[1];
            s += c * std::pow(e, std::abs(l));
        }
        return s;
    }
    std::vector<cplx> pole(F.pole.begin(), F.pole.end());
    return zonal_value(F, bilinear(z, pole));
}

CheckReport isometry_check_sphere(const TestFunction& f, double t, const SphereOptions& opt)
{
    SpectralRep F = sphere_heat_transform(f, t);
    const Geometry g = f.geometry;
    const int L = max_degree(F);
    CheckReport r;
    r.id = g == Geometry::circle ? "sphere.isometry_s1" : "sphere.isometry_s3";
    r.rhs = exact_l2_norm(f).value;
    auto sq = [](cplx v) { return std::norm(v); };
    auto lhs_at = [&](int n) {
        if (g == Geometry::circle) {
            double ym = 2 * L * t + 12 * std::sqrt(t);
            return reduced_circle_integral(F, t, ym, n, sq, [&](double y) {
                return circle_fiber(FiberRole::isometry, t, y, opt.swap_fiber);
            });
        }
        FiberDensity dens{Duality::compact, t, opt.swap_fiber};
        double rm = (2 * L + 3) * t + 14 * std::sqrt(t);
        return reduced_s3_integral(F, t, rm, n, sq, [&](double rho) { return dens(FiberRole::isometry, rho); });
    };
    r.lhs = lhs_at(opt.nodes);
    double coarse = lhs_at(std::max(8, opt.nodes / 2));
    r.drift = r.lhs == coarse ? 0.0 : std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);
    r.nodes = opt.nodes;
    double tol = resolve_tol(opt, g);
    r.gates["refinement"] = std::isfinite(r.lhs) && r.drift <= tol;
    r.values["t"] = t;
    r.values["d"] = eigen_dim(g);
    if (opt.swap_fiber) r.note = "fiber kernels swapped";
    r.finish(tol);
    return r;
}

cplx inversion_sphere(const SpectralRep& F, const std::vector<double>& p, double R, const SphereOptions& opt)
{
    if (!is_sphere(F)) throw DomainError("inversion_sphere: expected a sphere representation");
    if (!(R >= 0)) throw DomainError("inversion_sphere: R must be nonnegative");
    if (!(F.t > 0)) throw DomainError("inversion_sphere: representation has no heat time");
    const double t = F.t;
    const int L = max_degree(F);
    if (R == 0.0) return 0.0;
    if (F.geometry == Geometry::circle) {
        if (p.size() != 2) throw DomainError("inversion_sphere: S^1 point must be a 2-vector");
        double th = std::atan2(p[1], p[0]);
        double ym = std::min(R, (2 * L + 2) * t + 14 * std::sqrt(t));
        return panel_integrate<cplx>(per_panel(opt.nodes), -ym, ym, 2 * std::sqrt(t), [&](double y) {
            return circle_value(F, cplx(th, y)) * circle_fiber(FiberRole::inversion, t, y, opt.swap_fiber);
        });
    }
    if (p.size() != 4) throw DomainError("inversion_sphere: S^3 point must be a 4-vector");
    double ca = std::clamp(dot(p, F.pole), -1.0, 1.0);
    double sa = std::sqrt(std::max(0.0, 1.0 - ca * ca));
    FiberDensity dens{Duality::compact, t, opt.swap_fiber};
    double rm = std::min(R, (2 * L + 3) * t + 14 * std::sqrt(t));
    const int n_u = 8 + 2 * L;
    return panel_integrate<cplx>(per_panel(opt.nodes), 0.0, rm, 2 * std::sqrt(t), [&](double rho) {
        double ch = std::cosh(rho), sh = std::sinh(rho);
        cplx fib = gl_integrate<cplx>(n_u, -1.0, 1.0, [&](double u) { return zonal_value(F, cplx(ch * ca, -sh * sa * u)); });
        return 2 * kPi * fib * rho * rho * dens(FiberRole::inversion, rho);
    });
}

int s3_heat_kernel_lmax(double t, cplx w)
{
    if (!(t > 0)) throw DomainError("s3_heat_kernel: t must be positive");
    double s = std::abs(std::acos(w).imag());
    double peak = 0.0;
    for (int l = 0;; ++l) {
        double lb = 2 * std::log(l + 1.0) - 0.5 * t * l * (l + 2) + l * s;
        peak = std::max(peak, lb);
        if (l > 2 && lb < peak - 40.0 && lb < -40.0 + std::max(0.0, peak)) return l;
        if (l > 1000000) throw NumericalError("s3_heat_kernel: series does not settle");
    }
}

cplx s3_heat_kernel(double t, cplx w)
{
    const int L = s3_heat_kernel_lmax(t, w);
    cplx prev = 0.0, cur = 1.0;
    std::vector<cplx> terms;
    terms.reserve(L + 1);
    for (int l = 0; l <= L; ++l) {
        terms.push_back((l + 1.0) * std::exp(-0.5 * t * l * (l + 2)) * cur);
        cplx next = 2.0 * w * cur - prev;
        prev = cur;
        cur = next;
    }
    return pairwise_sum(std::span<const cplx>(terms)) / (2 * kPi * kPi);
}

double s3_heat_kernel_angle(double t, double theta) { return s3_heat_kernel(t, std::cos(theta)).real(); }

std::vector<SphereGridPoint> default_sphere_grid(const std::vector<double>& pole, int n_p, int n_y, double y_max)
{
    if (pole.size() != 4) throw DomainError("default_sphere_grid: pole must be a 4-vector");
    // Orthonormal frame {pole, e1, e2} by Gram-Schmidt.
    std::vector<std::vector<double>> frame{pole};
    for (int k = 0; k < 4 && frame.size() < 3; ++k) {
        std::vector<double> v(4, 0.0);
        v[k] = 1.0;
        for (const auto& b : frame) {
            double c = dot(v, b);
            for (int i = 0; i < 4; ++i) v[i] -= c * b[i];
        }
        double n = std::sqrt(dot(v, v));
        if (n < 1e-6) continue;
        for (auto& x : v) x /= n;
        frame.push_back(v);
    }
    const auto &e0 = frame[0], &e1 = frame[1], &e2 = frame[2];
    std::vector<SphereGridPoint> g;
    for (int i = 0; i < n_p; ++i) {
        double a = n_p > 1 ? kPi * i / (n_p - 1) : 0.0;
        std::vector<double> p(4), tdir(4), perp(4);
        for (int k = 0; k < 4; ++k) {
            p[k] = std::cos(a) * e0[k] + std::sin(a) * e1[k];
            tdir[k] = -std::sin(a) * e0[k] + std::cos(a) * e1[k];
            perp[k] = e2[k];
        }
        for (int j = 0; j < n_y; ++j) {
            double y = n_y > 1 ? y_max * j / (n_y - 1) : 0.0;
            double b = 0.3 + 0.9 * j / std::max(1, n_y - 1);
            std::vector<double> Y(4);
            for (int k = 0; k < 4; ++k) Y[k] = y * (std::cos(b) * tdir[k] + std::sin(b) * perp[k]);
            g.push_back({p, Y});
        }
    }
    return g;
}

CheckReport pointwise_bound_sdbnd(const TestFunction& f, double t, const std::vector<SphereGridPoint>& grid)
{
    if (f.geometry != Geometry::sphere3) throw DomainError("pointwise_bound_sdbnd: expected a function on S^3");
    SpectralRep F = sphere_heat_transform(f, t);
    double norm = std::sqrt(exact_l2_norm(f).value);
    double worst = 0.0;
    for (const auto& gp : grid) {
        double v = std::abs(continue_sphere(F, gp.p, gp.Y));
        if (v == 0.0) continue;
        double rho = std::sqrt(dot(gp.Y, gp.Y));
        double k = s3_heat_kernel(2 * t, std::cosh(2 * rho)).real();
        worst = std::max(worst, v / (norm * std::sqrt(k)));
    }
    CheckReport r;
    r.id = "sphere.pointwise_bound";
    r.kind = CheckKind::bound;
    r.lhs = worst;
    r.rhs = 1.0;
    r.nodes = long(grid.size());
    r.values["t"] = t;
    r.values["norm"] = norm;
    r.finish(1e-9);
    return r;
}

CheckReport duality_probe(double t, const std::vector<double>& radii)
{
    if (!(t > 0)) throw DomainError("duality_probe: t must be positive");
    if (radii.empty()) throw DomainError("duality_probe: empty radius grid");
    double a = INFINITY, b = -INFINITY, gmin = INFINITY, gmax = -INFINITY;
    for (double rho : radii) {
        if (!(rho >= 0)) throw DomainError("duality_probe: radii must be nonnegative");
        double k = s3_heat_kernel(t, std::cosh(rho)).real();
        double prod = k * nu_kernel({3, t}, rho) * std::pow(sinh_over_x(rho), 2) * std::pow(2 * kPi * t, 3);
        a = std::min(a, prod);
        b = std::max(b, prod);
        // rho_t against (2 pi t)^{-3/2} e^{|Y|^2/2t} (|Y|/sinh|Y|)
        double prof = std::pow(2 * kPi * t, -1.5) * std::exp(rho * rho / (2 * t)) / sinh_over_x(rho);
        gmin = std::min(gmin, k / prof);
        gmax = std::max(gmax, k / prof);
    }
    CheckReport r;
    r.id = "sphere.duality_probe";
    r.kind = CheckKind::probe;
    r.lhs = a;
    r.rhs = b;
    r.nodes = long(radii.size());
    r.values["t"] = t;
    r.values["a_t"] = a;
    r.values["b_t"] = b;
    r.values["growth_ratio_min"] = gmin;
    r.values["growth_ratio_max"] = gmax;
    r.gates["finite"] = std::isfinite(a) && std::isfinite(b) && a > 0;
    r.gates["ordered"] = a <= b;
    r.flags["within_0.9_1.1"] = a >= 0.9 && b <= 1.1;
    r.finish(0.0);
    return r;
}

CheckReport sobolev_s3_check(const TestFunction& f, int n, double t, const SphereOptions& opt)
{
    if (f.geometry != Geometry::sphere3) throw DomainError("sobolev_s3: expected a function on S^3");
    if (n < 0) throw DomainError("sobolev_s3: n must be nonnegative");
    SpectralRep F = sphere_heat_transform(f, t);
    const int L = max_degree(F);
    FiberDensity dens{Duality::compact, t, opt.swap_fiber};
    double rm = (2 * L + 3) * t + 14 * std::sqrt(t) + 2.0 * n * std::sqrt(t);
    auto sq = [](cplx v) { return std::norm(v); };
    auto integral = [&](int nodes) {
        return reduced_s3_integral(F, t, rm, nodes, sq, [&](double rho) {
            return dens(FiberRole::isometry, rho) * (1.0 + std::pow(rho, 2 * n));
        });
    };
    CheckReport r;
    r.id = "sphere.sobolev_s3";
    r.kind = CheckKind::probe;
    r.lhs = integral(opt.nodes);
    double coarse = integral(std::max(8, opt.nodes / 2));
    r.drift = r.lhs == coarse ? 0.0 : std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);
    r.rhs = r.lhs;
    double iso = reduced_s3_integral(F, t, rm, opt.nodes, sq, [&](double rho) { return dens(FiberRole::isometry, rho); });
    r.values["isometry_lhs"] = iso;

    // Fitted constant for |F| <= C e^{|Y|^2/2t} (|2Y|/sinh|2Y|)^{1/2} / (1 + |Y|^{2n}).
    auto scan = [&](double ymax) {
        double C = 0.0;
        for (int i = 0; i <= 24; ++i) {
            double alpha = kPi * i / 24;
            for (int j = 0; j <= 160; ++j) {
                double rho = ymax * j / 160;
                for (double u : {-1.0, 0.0, 1.0}) {
                    cplx w(std::cosh(rho) * std::cos(alpha), -std::sinh(rho) * std::sin(alpha) * u);
                    double v = std::abs(zonal_value(F, w)) * std::exp(-rho * rho / (2 * t)) *
                               std::sqrt(sinh_over_x(2 * rho)) * (1 + std::pow(rho, 2 * n));
                    C = std::max(C, v);
                }
            }
        }
        return C;
    };
    double ym = (L + 2) * t + 8 * std::sqrt(t) + n;
    double C1 = scan(ym), C2 = scan(2 * ym);
    r.values["C"] = C2;
    r.values["n"] = n;
    r.nodes = opt.nodes;
    r.gates["finite"] = std::isfinite(r.lhs) && std::isfinite(C2);
    r.gates["refinement"] = r.drift <= 1e-6;
    r.gates["constant_stable"] = C2 <= C1 * (1 + 1e-6) + 1e-300;
    r.finish(0.0);
    return r;
}

CheckReport multiply_sphere(const TestFunction& f1, double t, const TestFunction& f2, double s)
{
    if (f1.geometry != Geometry::sphere3 || f2.geometry != Geometry::sphere3)
        throw DomainError("multiply_sphere: expected functions on S^3");
    if (!(t > 0) || !(s > 0)) throw DomainError("multiply_sphere: t and s must be positive");
    if (!f1.terms.empty() && !f2.terms.empty() && f1.pole != f2.pole)
        throw DomainError("multiply_sphere: factors must share a pole");
    SpectralRep F1 = sphere_heat_transform(f1, t);
    SpectralRep F2 = sphere_heat_transform(f2, s);
    const double r = s * t / (s + t);
    // chi_a chi_b = (pi sqrt 2)^{-1} sum_{k = |a-b|, step 2}^{a+b} chi_k
    std::map<int, cplx> g;
    for (const auto& [a, ca] : F1.lines)
        for (const auto& [b, cb] : F2.lines)
            for (int k = std::abs(a - b); k <= a + b; k += 2) g[k] += ca * cb / (kPi * std::sqrt(2.0));
    SpectralRep Fr;
    Fr.geometry = Geometry::sphere3;
    Fr.dim = 3;
    Fr.pole = f1.terms.empty() ? f2.pole : f1.pole;
    Fr.t = r;
    SpectralRep fr = Fr;
    fr.t = 0.0;
    bool finite = true;
    for (const auto& [k, c] : g) {
        cplx fk = c * std::exp(0.5 * r * eigenvalue(Geometry::sphere3, k));
        finite = finite && std::isfinite(std::abs(fk));
        fr.lines[k] = fk;
        Fr.lines[k] = fk * std::exp(-0.5 * r * eigenvalue(Geometry::sphere3, k));
    }
    double res = 0.0, scale = 0.0;
    for (int i = 0; i <= 40; ++i) {
        double w = std::cos(kPi * i / 40);
        cplx prod = zonal_value(F1, w) * zonal_value(F2, w);
        res = std::max(res, std::abs(zonal_value(Fr, w) - prod));
        scale = std::max(scale, std::abs(prod));
    }
    CheckReport rep;
    rep.id = "sphere.multiply";
    rep.kind = CheckKind::bound;
    rep.lhs = scale > 0 ? res / scale : res;
    rep.rhs = 1e-8;
    rep.values["r"] = r;
    rep.values["residual_abs"] = res;
    int top = g.empty() ? -1 : g.rbegin()->first;
    rep.values["max_degree"] = top;
    for (const auto& [k, c] : fr.lines) rep.values["f_line_" + std::to_string(k)] = std::abs(c);
    // A finite spectral support is the smoothness witness: nothing beyond top.
    rep.gates["finite_coefficients"] = finite;
    rep.gates["finite_support"] = top <= max_degree(F1) + max_degree(F2);
    rep.nodes = 41;
    if (!finite) rep.note = "recovered coefficient overflow at r = " + fmt(r);
    rep.finish(0.0);
    return rep;
}

}  // namespace heatrange
