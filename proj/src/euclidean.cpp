#include "heatrange/euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatrange {

namespace {

constexpr double kMaxExponent = 700.0;

const QuadratureRule& gh_rule(int n)
{
    static thread_local std::map<int, QuadratureRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_hermite(n)).first;
    return it->second;
}

const QuadratureRule& gl_rule(int n)
{
    static thread_local std::map<int, QuadratureRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n, -1.0, 1.0)).first;
    return it->second;
}

// Integral over [a,b] using the cached reference Legendre rule.
template <typename T, typename F>
T gl_integrate(int n, double a, double b, F&& g)
{
    const QuadratureRule& q = gl_rule(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<T> v(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) v[i] = q.weights[i] * h * g(c + h * q.nodes[i]);
    return pairwise_sum(std::span<const T>(v));
}

cplx guarded_exp(cplx e)
{
    if (e.real() > kMaxExponent) {
        std::ostringstream os;
        os << "analytic continuation overflows (log-modulus " << e.real()
           << "); keep |y|^2/2t well below " << kMaxExponent;
        throw NumericalError(os.str());
    }
    return std::exp(e);
}

// Value at complex z of the time-t heat evolution of a one-dimensional atom.
cplx factor_continued(const Factor1D& a, double t, cplx z)
{
    switch (a.kind) {
    case AtomKind::gaussian: {
        double v = a.variance + t;
        cplx w = z - a.center;
        return guarded_exp(-w * w / (2 * v)) / std::sqrt(2 * kPi * v);
    }
    case AtomKind::hermite: {
        double T = 1.0 + t, q = (1.0 - t) / T;
        cplx prev = 0.0;
        cplx cur = std::pow(kPi, -0.25) / std::sqrt(T) * guarded_exp(-z * z / (2 * T));
        for (int k = 0; k < a.k; ++k) {
            cplx next = z * std::sqrt(2.0 / (k + 1)) / T * cur - q * std::sqrt(double(k) / (k + 1)) * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    case AtomKind::fourier_mode: return guarded_exp(cplx(-0.5 * t * a.xi * a.xi, 0) + cplx(0, a.xi) * z);
    case AtomKind::constant: return 1.0;
    default: throw DomainError("atom not valid on R^d");
    }
}

// Gaussian envelope of |atom(x+iy)| at time t: e^{-inv_v (x-center)^2/2 + inv_v y^2/2 - xi y}.
struct Envelope {
    double inv_v = 0.0;
    double center = 0.0;
    double xi = 0.0;
};

Envelope envelope_of(const Factor1D& a, double t)
{
    switch (a.kind) {
    case AtomKind::gaussian: return {1.0 / (a.variance + t), a.center, 0.0};
    case AtomKind::hermite: return {1.0 / (1.0 + t), 0.0, 0.0};
    case AtomKind::fourier_mode: return {0.0, 0.0, a.xi};
    default: return {0.0, 0.0, 0.0};
    }
}

// Spectral envelope e^{-v xi^2/2} of a time-0 atom's Fourier transform.
double spectral_variance(const Factor1D& a)
{
    switch (a.kind) {
    case AtomKind::gaussian: return a.variance;
    case AtomKind::hermite: return 1.0;
    default: throw DomainError("Fourier modes and constants are not square-integrable on R^d");
    }
}

struct PairSetup {
    double t = 1.0;
    double r = 0.0;        // Gaussian x-measure e^{-x^2/r}/(pi r)^{1/2}; 0 means Lebesgue
    double kappa = 1.0;    // y-weight e^{-y^2/(kappa t)}/(pi kappa t)^{1/2}
    int nodes = 64;
};

// int int A(x+iy) conj(B(x+iy)) y^{2k} w_x(x) w_y(y) dx dy for one coordinate.
cplx pair2d(const Factor1D& a, const Factor1D& b, const PairSetup& s, int k)
{
    Envelope ea = envelope_of(a, s.t), eb = envelope_of(b, s.t);
    double Px = ea.inv_v + eb.inv_v + (s.r > 0 ? 2.0 / s.r : 0.0);
    double Py = 2.0 / (s.kappa * s.t) - ea.inv_v - eb.inv_v;
    if (!(Px > 0)) throw NumericalError("integral diverges in the real directions");
    if (!(Py > 0)) throw NumericalError("integral diverges in the imaginary directions");
    double cx = (ea.inv_v * ea.center + eb.inv_v * eb.center) / Px;
    double cy = -(ea.xi + eb.xi) / Py;
    const QuadratureRule& gh = gh_rule(s.nodes);
    double ny = 1.0 / std::sqrt(kPi * s.kappa * s.t);
    double nx = s.r > 0 ? 1.0 / std::sqrt(kPi * s.r) : 1.0;
    return integrate_envelope_c(gh, Py, cy, [&](double y) {
        cplx inner = integrate_envelope_c(gh, Px, cx, [&](double x) {
            cplx z(x, y);
            cplx v = factor_continued(a, s.t, z) * std::conj(factor_continued(b, s.t, z));
            if (s.r > 0) v *= nx * std::exp(-x * x / s.r);
            return v;
        });
        return inner * std::pow(y, 2 * k) * ny * std::exp(-y * y / (s.kappa * s.t));
    });
}

void require_euclid(const TestFunction& f, const EuclideanParams& p)
{
    p.validate();
    if (f.geometry != Geometry::euclidean) throw DomainError("expected a function on R^d");
    if (f.dim != p.d) throw DomainError("dimension of f does not match d");
}

// All multi-indices k with |k| = m in d slots.
void multi_indices(int d, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (int(cur.size()) == d - 1) {
        cur.push_back(m);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int i = 0; i <= m; ++i) {
        cur.push_back(i);
        multi_indices(d, m - i, cur, out);
        cur.pop_back();
    }
}

double multinomial(const std::vector<int>& k)
{
    double r = 1.0;
    int n = 0;
    for (int ki : k) {
        for (int j = 1; j <= ki; ++j) r *= double(n + j) / j;
        n += ki;
    }
    return r;
}

// sum_{a,b} c_a conj(c_b) int int A conj(B) p(|y|^2) w, with p given by coefficients in u.
double weighted_isometry_integral(const TestFunction& f, const PairSetup& s, const std::vector<double>& poly)
{
    const int d = f.dim;
    int deg = int(poly.size()) - 1;
    std::vector<cplx> terms;
    for (const auto& ta : f.terms)
        for (const auto& tb : f.terms) {
            // moments[j][k] for coordinate j and power y^{2k}
            std::vector<std::vector<cplx>> mom(d, std::vector<cplx>(deg + 1));
            for (int j = 0; j < d; ++j)
                for (int k = 0; k <= deg; ++k) mom[j][k] = pair2d(ta.factors[j], tb.factors[j], s, k);
            cplx acc = 0.0;
            for (int m = 0; m <= deg; ++m) {
                if (poly[m] == 0.0) continue;
                std::vector<std::vector<int>> idx;
                std::vector<int> cur;
                multi_indices(d, m, cur, idx);
                cplx sm = 0.0;
                for (const auto& k : idx) {
                    cplx prod = multinomial(k);
                    for (int j = 0; j < d; ++j) prod *= mom[j][k[j]];
                    sm += prod;
                }
                acc += poly[m] * sm;
            }
            terms.push_back(ta.coef * std::conj(tb.coef) * acc);
        }
    return pairwise_sum(std::span<const cplx>(terms)).real();
}

double safe_integral(const TestFunction& f, const PairSetup& s, const std::vector<double>& poly, std::string& err)
{
    try {
        return weighted_isometry_integral(f, s, poly);
    } catch (const NumericalError& e) {
        err = e.what();
        return INFINITY;
    }
}

double y_norm2(const std::vector<double>& y)
{
    double s = 0;
    for (double v : y) s += v * v;
    return s;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

void EuclideanParams::validate() const
{
    if (d < 1 || d > 3) throw DomainError("d must be 1, 2 or 3");
    if (!(t > 0)) throw DomainError("t must be positive");
}

std::vector<cplx> ComplexVector::z() const
{
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = cplx(x[i], i < y.size() ? y[i] : 0.0);
    return out;
}

double heat_kernel(const EuclideanParams& p, const std::vector<double>& x)
{
    p.validate();
    return std::pow(2 * kPi * p.t, -0.5 * p.d) * std::exp(-y_norm2(x) / (2 * p.t));
}

cplx heat_kernel_c(const EuclideanParams& p, const ComplexVector& z)
{
    p.validate();
    cplx s = 0.0;
    for (cplx zi : z.z()) s += zi * zi;
    return std::pow(2 * kPi * p.t, -0.5 * p.d) * guarded_exp(-s / (2 * p.t));
}

SpectralRep heat_transform(const TestFunction& f, const EuclideanParams& p)
{
    require_euclid(f, p);
    SpectralRep F = exact_transform(f);
    F.t = p.t;
    return F;
}

SpectralRep heat_transform(const SpectralRep& F, const EuclideanParams& p)
{
    p.validate();
    if (F.geometry != Geometry::euclidean) throw DomainError("heat_transform: expected a euclidean representation");
    SpectralRep G = F;
    G.t += p.t;
    return G;
}

cplx analytic_continue(const SpectralRep& F, const ComplexVector& z)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("analytic_continue: expected a euclidean representation");
    if (int(z.x.size()) != F.dim || int(z.y.size()) != F.dim)
        throw DomainError("analytic_continue: point dimension mismatch");
    std::vector<cplx> zz = z.z();
    cplx s = 0.0;
    for (const auto& t : F.source.terms) {
        cplx v = t.coef;
        for (int j = 0; j < F.dim; ++j) v *= factor_continued(t.factors[j], F.t, zz[j]);
        s += v;
    }
    return s;
}

CheckReport isometry_check_lebesgue(const TestFunction& f, const EuclideanParams& p, const EuclidOptions& opt)
{
    require_euclid(f, p);
    CheckReport r;
    r.id = "euclid.isometry_lebesgue";
    r.rhs = exact_l2_norm(f).value;
    PairSetup s{p.t, 0.0, opt.variance_factor, opt.nodes};
    std::string err;
    r.lhs = safe_integral(f, s, {1.0}, err);
    PairSetup half = s;
    half.nodes = std::max(1, opt.nodes / 2);
    double coarse = safe_integral(f, half, {1.0}, err);
    r.drift = std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);
    if (r.lhs == 0.0 && coarse == 0.0) r.drift = 0.0;
    r.nodes = long(opt.nodes) * opt.nodes;
    r.gates["refinement"] = std::isfinite(r.lhs) && r.drift <= std::max(opt.tol, 1e-12);
    r.values["t"] = p.t;
    r.values["d"] = p.d;
    if (!err.empty()) r.note = err;
    r.finish(opt.tol);
    return r;
}

CheckReport isometry_check_gaussian(const TestFunction& f, const GaussianMeasureSpec& spec,
                                    const EuclideanParams& p, const EuclidOptions& opt)
{
    require_euclid(f, p);
    if (!(spec.s > 0)) throw DomainError("isometry_gaussian: s must be positive");
    if (!(p.t < 2 * spec.s)) throw DomainError("isometry_gaussian requires t < 2s (convolution convergence)");
    const double rr = spec.r(p.t);
    CheckReport r;
    r.id = "euclid.isometry_gaussian";
    PairSetup s{p.t, rr, opt.variance_factor, opt.nodes};
    std::string err;
    r.lhs = safe_integral(f, s, {1.0}, err);
    PairSetup half = s;
    half.nodes = std::max(1, opt.nodes / 2);
    double coarse = safe_integral(f, half, {1.0}, err);
    r.drift = r.lhs == coarse ? 0.0 : std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);

    // int |f|^2 rho_s dx, one coordinate at a time.
    const QuadratureRule& gh = gh_rule(opt.nodes);
    std::vector<cplx> terms;
    for (const auto& ta : f.terms)
        for (const auto& tb : f.terms) {
            cplx v = ta.coef * std::conj(tb.coef);
            for (int j = 0; j < p.d; ++j) {
                const Factor1D &a = ta.factors[j], &b = tb.factors[j];
                Envelope ea = envelope_of(a, 0.0), eb = envelope_of(b, 0.0);
                double P = ea.inv_v + eb.inv_v + 1.0 / spec.s;
                double c = (ea.inv_v * ea.center + eb.inv_v * eb.center) / P;
                v *= integrate_envelope_c(gh, P, c, [&](double x) {
                    return factor_continued(a, 0.0, x) * std::conj(factor_continued(b, 0.0, x)) *
                           std::exp(-x * x / (2 * spec.s)) / std::sqrt(2 * kPi * spec.s);
                });
            }
            terms.push_back(v);
        }
    r.rhs = pairwise_sum(std::span<const cplx>(terms)).real();
    r.nodes = long(opt.nodes) * opt.nodes;
    r.gates["refinement"] = std::isfinite(r.lhs) && r.drift <= std::max(opt.tol, 1e-12);
    r.values["s"] = spec.s;
    r.values["t"] = p.t;
    r.values["r"] = rr;
    if (!err.empty()) r.note = err;
    r.finish(opt.tol);
    return r;
}

std::vector<ComplexVector> default_grid(int d, double L, int n)
{
    std::vector<ComplexVector> g;
    for (int plane = 0; plane < d; ++plane)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (plane > 0 && i == (n - 1) / 2 && j == (n - 1) / 2) continue;
                ComplexVector z;
                z.x.assign(d, 0.0);
                z.y.assign(d, 0.0);
                double a = n > 1 ? -L + 2 * L * i / (n - 1) : 0.0;
                double b = n > 1 ? -L + 2 * L * j / (n - 1) : 0.0;
                z.x[0] = a;
                z.y[plane] = b;
                g.push_back(z);
            }
    return g;
}

CheckReport pointwise_bound_check(const TestFunction& f, const EuclideanParams& p,
                                  const std::vector<ComplexVector>& grid)
{
    require_euclid(f, p);
    SpectralRep F = heat_transform(f, p);
    double C = std::sqrt(exact_l2_norm(f).value) * std::pow(4 * kPi * p.t, -0.25 * p.d);
    double worst = 0.0;
    for (const auto& z : grid) {
        double v = std::abs(analytic_continue(F, z));
        if (v == 0.0) continue;
        double ratio = v / (C * std::exp(y_norm2(z.y) / (2 * p.t)));
        worst = std::max(worst, ratio);
    }
    CheckReport r;
    r.id = "euclid.pointwise_bound";
    r.kind = CheckKind::bound;
    r.lhs = worst;
    r.rhs = 1.0;
    r.nodes = long(grid.size());
    r.values["C"] = C;
    r.finish(1e-9);
    return r;
}

cplx invert_ball(const SpectralRep& F, const std::vector<double>& x, double R, int nodes)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("invert_ball: expected a euclidean representation");
    if (int(x.size()) != F.dim) throw DomainError("invert_ball: point dimension mismatch");
    if (!(R >= 0)) throw DomainError("invert_ball: R must be nonnegative");
    if (R == 0.0) return 0.0;
    const int d = F.dim;
    const double t = F.t;
    if (!(t > 0)) throw DomainError("invert_ball: representation has no heat time");
    auto w = [&](double rho2) { return std::exp(-rho2 / (2 * t)) * std::pow(2 * kPi * t, -0.5 * d); };
    auto value = [&](const std::vector<double>& y) {
        ComplexVector z{x, y};
        return analytic_continue(F, z) * w(y_norm2(y));
    };
    if (d == 1) {
        auto g = [&](double y) { return value({y}); };
        return gl_integrate<cplx>(nodes, -R, 0.0, g) + gl_integrate<cplx>(nodes, 0.0, R, g);
    }
    if (d == 2) {
        const int na = 64;
        return gl_integrate<cplx>(nodes, 0.0, R, [&](double rho) {
            std::vector<cplx> v(na);
            for (int k = 0; k < na; ++k) {
                double ph = 2 * kPi * k / na;
                v[k] = value({rho * std::cos(ph), rho * std::sin(ph)});
            }
            return pairwise_sum(std::span<const cplx>(v)) * (2 * kPi / na) * rho;
        });
    }
    const int nb = 24, nphi = 32;
    return gl_integrate<cplx>(nodes, 0.0, R, [&](double rho) {
        cplx sh = gl_integrate<cplx>(nb, 0.0, kPi, [&](double beta) {
            std::vector<cplx> v(nphi);
            for (int k = 0; k < nphi; ++k) {
                double ph = 2 * kPi * k / nphi;
                v[k] = value({rho * std::sin(beta) * std::cos(ph), rho * std::sin(beta) * std::sin(ph),
                              rho * std::cos(beta)});
            }
            return pairwise_sum(std::span<const cplx>(v)) * (2 * kPi / nphi) * std::sin(beta);
        });
        return sh * rho * rho;
    });
}

namespace {

// int A(x + i y) e^{-y^2/2s}/(2 pi s)^{1/2} dy for one evolved atom.
cplx smoothed_factor(const Factor1D& a, double t, double x, double s, int nodes)
{
    Envelope e = envelope_of(a, t);
    double P = 1.0 / s - e.inv_v;
    if (!(P > 0)) throw NumericalError("smoothed inversion diverges for this variance");
    double c = -e.xi / P;
    return integrate_envelope_c(gh_rule(nodes), P, c, [&](double y) {
        return factor_continued(a, t, cplx(x, y)) * std::exp(-y * y / (2 * s)) / std::sqrt(2 * kPi * s);
    });
}

cplx smoothed_integral(const SpectralRep& F, const std::vector<double>& x, double s, int nodes)
{
    std::vector<cplx> terms;
    for (const auto& t : F.source.terms) {
        cplx v = t.coef;
        for (int j = 0; j < F.dim; ++j) v *= smoothed_factor(t.factors[j], F.t, x[j], s, nodes);
        terms.push_back(v);
    }
    return pairwise_sum(std::span<const cplx>(terms));
}

}  // namespace

cplx invert_smoothed(const SpectralRep& F, const std::vector<double>& x, double s, int nodes)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("invert_smoothed: expected a euclidean representation");
    if (int(x.size()) != F.dim) throw DomainError("invert_smoothed: point dimension mismatch");
    if (!(s > 0)) throw DomainError("invert_smoothed: s must be positive");
    if (!(s < F.t)) throw DomainError("invert_smoothed requires s < t");
    return smoothed_integral(F, x, s, nodes);
}

cplx invert_adjoint(const SpectralRep& F, const std::vector<double>& x, double R, int nodes)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("invert_adjoint: expected a euclidean representation");
    if (int(x.size()) != F.dim) throw DomainError("invert_adjoint: point dimension mismatch");
    if (!(R >= 0)) throw DomainError("invert_adjoint: R must be nonnegative");
    const double t = F.t;
    if (!(t > 0)) throw DomainError("invert_adjoint: representation has no heat time");
    if (R == 0.0) return 0.0;
    const QuadratureRule& gh = gh_rule(64);
    std::vector<cplx> terms;
    for (const auto& term : F.source.terms) {
        cplx v = term.coef;
        for (int j = 0; j < F.dim; ++j) {
            const Factor1D& a = term.factors[j];
            Envelope e = envelope_of(a, t);
            double Px = 1.0 / t + e.inv_v;
            double cx = (x[j] / t + e.inv_v * e.center) / Px;
            auto gy = [&](double y) {
                cplx inner = integrate_envelope_c(gh, Px, cx, [&](double xp) {
                    cplx z(xp, y);
                    cplx k = std::conj(z) - x[j];
                    cplx kern = std::exp(-k * k / (2 * t)) / std::sqrt(2 * kPi * t);
                    return kern * factor_continued(a, t, z);
                });
                return inner * std::exp(-y * y / t) / std::sqrt(kPi * t);
            };
            v *= gl_integrate<cplx>(nodes, -R, 0.0, gy) + gl_integrate<cplx>(nodes, 0.0, R, gy);
        }
        terms.push_back(v);
    }
    return pairwise_sum(std::span<const cplx>(terms));
}

CheckReport fourier_range_test(const SpectralRep& F, double t)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("fourier_range_test: expected a euclidean representation");
    if (!(t > 0)) throw DomainError("fourier_range_test: t must be positive");
    CheckReport r;
    r.id = "euclid.fourier_range";
    r.values["t"] = t;
    r.values["rep_time"] = F.t;
    if (!spectral_lines(F).empty()) {
        r.lhs = INFINITY;
        r.rhs = INFINITY;
        r.note = "spectral lines carry no square-integrable density";
        r.values["in_range"] = 0;
        r.finish(1e-8);
        r.pass = false;
        return r;
    }
    const int d = F.dim;
    const double Lmax = std::min(64.0, std::sqrt(600.0 / std::max({t, F.t, 1e-3})));
    auto box = [&](double L, int n) {
        if (d == 1)
            return gl_integrate<double>(n, -L, L, [&](double xi) {
                return std::norm(spectral_density(F, {xi})) * std::exp(t * xi * xi);
            });
        const QuadratureRule q = gauss_legendre(n, -L, L);
        std::vector<double> acc;
        std::vector<int> idx(d, 0);
        while (true) {
            std::vector<double> xi(d);
            double w = 1, x2 = 0;
            for (int j = 0; j < d; ++j) {
                xi[j] = q.nodes[idx[j]];
                w *= q.weights[idx[j]];
                x2 += xi[j] * xi[j];
            }
            acc.push_back(w * std::norm(spectral_density(F, xi)) * std::exp(t * x2));
            int j = 0;
            while (j < d && ++idx[j] == n) idx[j++] = 0;
            if (j == d) break;
        }
        return pairwise_sum(acc);
    };
    const int n = d == 1 ? 400 : 48;
    std::vector<double> est;
    for (int k = 4; k >= 0; --k) est.push_back(box(Lmax / double(1 << k), n));
    double fine = box(Lmax, 2 * n);
    r.lhs = est.back();
    r.rhs = est[est.size() - 2];
    r.drift = std::abs(fine - r.lhs) / std::max(std::abs(fine), 1e-300);
    r.nodes = n;
    r.values["window"] = Lmax;
    for (std::size_t i = 0; i < est.size(); ++i) r.values["estimate_" + std::to_string(i)] = est[i];
    r.gates["refinement"] = std::isfinite(fine) && r.drift <= 1e-8;
    r.finish(1e-8);
    r.values["in_range"] = r.pass ? 1 : 0;
    return r;
}

double WickPolynomial::operator()(double u) const
{
    double s = 0;
    for (std::size_t m = coef.size(); m-- > 0;) s = s * u + coef[m];
    return s;
}

double WickPolynomial::at(const std::vector<double>& y) const { return (*this)(y_norm2(y)); }

double WickPolynomial::min_value() const
{
    // The polynomial grows like u^n; its minimum sits below a few multiples of n t.
    double U = 10.0 * (n + d + 1) * t;
    double best = (*this)(0.0), ubest = 0.0;
    const int N = 4000;
    for (int i = 1; i <= N; ++i) {
        double u = U * i / N;
        double v = (*this)(u);
        if (v < best) {
            best = v;
            ubest = u;
        }
    }
    // Newton on the derivative.
    std::vector<double> d1, d2;
    for (std::size_t m = 1; m < coef.size(); ++m) d1.push_back(m * coef[m]);
    for (std::size_t m = 1; m < d1.size(); ++m) d2.push_back(m * d1[m]);
    auto ev = [](const std::vector<double>& c, double u) {
        double s = 0;
        for (std::size_t m = c.size(); m-- > 0;) s = s * u + c[m];
        return s;
    };
    double u = ubest;
    if (u > 0 && !d2.empty()) {
        for (int it = 0; it < 20; ++it) {
            double g = ev(d1, u), h = ev(d2, u);
            if (h <= 0) break;
            double nu = u - g / h;
            if (!(nu > 0)) break;
            u = nu;
        }
        best = std::min(best, (*this)(u));
    }
    return best;
}

WickPolynomial wick_polynomial(int n, const EuclideanParams& p)
{
    p.validate();
    if (n < 1) throw DomainError("wick_polynomial: n must be at least 1");
    const double t = p.t;
    const int d = p.d;
    // Delta of e^{-u/t} P(u) equals e^{-u/t} [4u(P'' - 2P'/t + P/t^2) + 2d(P' - P/t)].
    std::vector<double> P{1.0};
    for (int step = 0; step < n; ++step) {
        std::size_t deg = P.size() - 1;
        std::vector<double> Q(deg + 2, 0.0);
        for (std::size_t m = 0; m <= deg; ++m) {
            double c = P[m];
            // 4u * P/t^2 and -2d P/t
            Q[m + 1] += 4.0 * c / (t * t);
            Q[m] -= 2.0 * d * c / t;
            if (m >= 1) {
                // 4u(-2P'/t) and 2d P'
                Q[m] += -8.0 * m * c / t;
                Q[m - 1] += 2.0 * d * m * c;
            }
            if (m >= 2) Q[m - 1] += 4.0 * m * (m - 1) * c;  // 4u P''
        }
        P = Q;
    }
    double scale = std::pow(4.0, -n);
    for (auto& c : P) c *= scale;
    WickPolynomial w;
    w.n = n;
    w.t = t;
    w.d = d;
    w.coef = P;
    return w;
}

double default_sobolev_constant(int n, const EuclideanParams& p)
{
    double m = wick_polynomial(n, p).min_value();
    return 1.0 + std::max(0.0, -m);
}

CheckReport sobolev_norm_check(const TestFunction& f, int n, const EuclideanParams& p, double c_n,
                               const EuclidOptions& opt)
{
    require_euclid(f, p);
    WickPolynomial h = wick_polynomial(n, p);
    if (!(c_n + h.min_value() > 0))
        throw DomainError("sobolev_norm: c_n + h_{n,t} is not positive; c_n must exceed " + fmt(-h.min_value()));
    std::vector<double> poly = h.coef;
    poly[0] += c_n;

    CheckReport r;
    r.id = "euclid.sobolev_norm";
    PairSetup s{p.t, 0.0, opt.variance_factor, opt.nodes};
    std::string err;
    r.lhs = safe_integral(f, s, poly, err);
    PairSetup half = s;
    half.nodes = std::max(1, opt.nodes / 2);
    double coarse = safe_integral(f, half, poly, err);
    r.drift = r.lhs == coarse ? 0.0 : std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);

    // c_n ||f||^2 + (2 pi)^d int |xi|^{2n} |fhat|^2
    const int d = p.d;
    const QuadratureRule& gh = gh_rule(opt.nodes);
    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    multi_indices(d, n, cur, idx);
    std::vector<cplx> terms;
    for (const auto& ta : f.terms)
        for (const auto& tb : f.terms) {
            std::vector<std::vector<cplx>> mom(d, std::vector<cplx>(n + 1));
            for (int j = 0; j < d; ++j) {
                const Factor1D &a = ta.factors[j], &b = tb.factors[j];
                double P = spectral_variance(a) + spectral_variance(b);
                for (int k = 0; k <= n; ++k)
                    mom[j][k] = 2 * kPi * integrate_envelope_c(gh, P, 0.0, [&](double xi) {
                                    return std::pow(xi, 2 * k) * factor_fourier(a, xi) *
                                           std::conj(factor_fourier(b, xi));
                                });
            }
            cplx sm = 0.0;
            for (const auto& k : idx) {
                cplx prod = multinomial(k);
                for (int j = 0; j < d; ++j) prod *= mom[j][k[j]];
                sm += prod;
            }
            terms.push_back(ta.coef * std::conj(tb.coef) * sm);
        }
    double deriv = pairwise_sum(std::span<const cplx>(terms)).real();
    r.rhs = c_n * exact_l2_norm(f).value + deriv;
    r.nodes = long(opt.nodes) * opt.nodes;
    r.gates["refinement"] = std::isfinite(r.lhs) && r.drift <= std::max(opt.tol, 1e-12);
    r.values["c_n"] = c_n;
    r.values["n"] = n;
    r.values["h_min"] = h.min_value();
    r.values["derivative_term"] = deriv;
    if (!err.empty()) r.note = err;
    r.finish(opt.tol);
    return r;
}

CheckReport sobolev_image_check(const TestFunction& f, int n, const EuclideanParams& p)
{
    require_euclid(f, p);
    if (n < 0) throw DomainError("sobolev_image: n must be nonnegative");
    // int |F|^2 e^{-|y|^2/t} (1 + |y|^{2n}) dy dx, i.e. the normalized weight times (pi t)^{d/2}.
    std::vector<double> poly(std::max(n, 0) + 1, 0.0);
    poly[0] += 1.0;
    poly[n] += 1.0;
    double norm = std::pow(kPi * p.t, 0.5 * p.d);
    for (auto& c : poly) c *= norm;
    PairSetup s{p.t, 0.0, 1.0, 64};
    std::string err;
    CheckReport r;
    r.id = "euclid.sobolev_image";
    r.kind = CheckKind::probe;
    r.lhs = safe_integral(f, s, poly, err);
    s.nodes = 32;
    double coarse = safe_integral(f, s, poly, err);
    r.drift = r.lhs == coarse ? 0.0 : std::abs(r.lhs - coarse) / std::max(std::abs(r.lhs), 1e-300);

    SpectralRep F = heat_transform(f, p);
    double L = std::max(8 * std::sqrt(p.t), 6.0);
    double C = 0.0;
    for (const auto& z : default_grid(p.d, L, 81)) {
        double y = std::sqrt(y_norm2(z.y));
        double v = std::abs(analytic_continue(F, z)) * (1 + std::pow(y, n)) * std::exp(-y * y / (2 * p.t));
        C = std::max(C, v);
    }
    r.rhs = r.lhs;
    r.values["C"] = C;
    r.values["n"] = n;
    r.nodes = 64 * 64;
    r.gates["finite"] = std::isfinite(r.lhs) && std::isfinite(C);
    r.gates["refinement"] = r.drift <= 1e-8;
    if (!err.empty()) r.note = err;
    r.finish(0.0);
    return r;
}

CheckReport smooth_pointwise_inversion(const TestFunction& f, const EuclideanParams& p,
                                       const std::vector<double>& x)
{
    require_euclid(f, p);
    SpectralRep F = heat_transform(f, p);
    CheckReport r;
    r.id = "euclid.smooth_inversion";
    cplx v = smoothed_integral(F, x, p.t, 64);
    cplx exact = evaluate(f, x);
    r.lhs = v.real();
    r.rhs = exact.real();
    r.values["lhs_imag"] = v.imag();
    r.values["rhs_imag"] = exact.imag();

    // Absolute integral int |F(x+iy)| e^{-|y|^2/2t}/(2 pi t)^{d/2} dy on a tensor Hermite grid.
    double inv_v = 0.0;
    for (const auto& t : F.source.terms)
        for (const auto& a : t.factors) inv_v = std::max(inv_v, envelope_of(a, p.t).inv_v);
    double P = 1.0 / p.t - inv_v;
    auto absint = [&](int n) {
        if (!(P > 0)) return double(INFINITY);
        const QuadratureRule& gh = gh_rule(n);
        double sc = std::sqrt(2.0 / P);
        std::vector<double> acc;
        std::vector<int> idx(p.d, 0);
        while (true) {
            std::vector<double> y(p.d);
            double w = 1;
            for (int j = 0; j < p.d; ++j) {
                double u = gh.nodes[idx[j]];
                y[j] = sc * u;
                w *= sc * gh.weights[idx[j]] * std::exp(u * u);
            }
            double val = std::abs(analytic_continue(F, ComplexVector{x, y})) *
                         std::exp(-y_norm2(y) / (2 * p.t)) * std::pow(2 * kPi * p.t, -0.5 * p.d);
            acc.push_back(w * val);
            int j = 0;
            while (j < p.d && ++idx[j] == n) idx[j++] = 0;
            if (j == p.d) break;
        }
        return pairwise_sum(acc);
    };
    int n = p.d == 1 ? 128 : 40;
    double a1 = absint(n), a2 = absint(n / 2);
    r.values["absolute_integral"] = a1;
    r.drift = std::abs(a1 - a2) / std::max(a1, 1e-300);
    r.gates["absolutely_convergent"] = std::isfinite(a1) && r.drift < 1e-3;
    r.nodes = 64;
    double err = std::abs(v - exact);
    r.finish(1e-6);
    // Absolute error: f(x) may vanish.
    r.abs_err = err;
    r.rel_err = err / std::max(1.0, std::abs(exact));
    r.pass = r.rel_err <= 1e-6 && r.gates_ok();
    return r;
}

CheckReport bargmann_bound_scan(const TestFunction& f, const EuclideanParams& p, BargmannMode mode, int n_max)
{
    require_euclid(f, p);
    SpectralRep F = heat_transform(f, p);
    double L = std::max(8 * std::sqrt(p.t), 6.0);
    auto grid_small = default_grid(p.d, L, 61);
    auto grid_big = default_grid(p.d, 2 * L, 121);
    auto scan = [&](const std::vector<ComplexVector>& g, double power) {
        double m = 0.0;
        for (const auto& z : g) {
            double q = 1 + y_norm2(z.x) + y_norm2(z.y);
            double v = std::abs(analytic_continue(F, z)) * std::exp(-y_norm2(z.y) / (2 * p.t)) * std::pow(q, power);
            m = std::max(m, v);
        }
        return m;
    };
    auto stable = [](double a, double b) { return std::isfinite(b) && b <= a * (1 + 1e-6) + 1e-300; };
    CheckReport r;
    r.kind = CheckKind::probe;
    r.nodes = long(grid_big.size());
    if (mode == BargmannMode::schwartz) {
        r.id = "euclid.bargmann_schwartz";
        bool all = true;
        for (int n = 0; n <= n_max; ++n) {
            double a = scan(grid_small, n), b = scan(grid_big, n);
            r.values["c_" + std::to_string(n)] = b;
            all = all && stable(a, b);
        }
        r.gates["finite_constants"] = all;
        r.lhs = r.values["c_0"];
        r.rhs = r.lhs;
    } else {
        r.id = "euclid.bargmann_tempered";
        int found = -1;
        for (int n = 0; n <= n_max; ++n) {
            double a = scan(grid_small, -n), b = scan(grid_big, -n);
            if (stable(a, b)) {
                found = n;
                r.values["c"] = b;
                break;
            }
        }
        r.values["n"] = found;
        r.gates["feasible"] = found >= 0;
        r.lhs = found;
        r.rhs = found;
    }
    r.finish(0.0);
    return r;
}

double heat_kernel_lq_norm(const EuclideanParams& p, double q)
{
    p.validate();
    if (!(q >= 1)) throw DomainError("conjugate exponent must be at least 1");
    if (std::isinf(q)) return std::pow(2 * kPi * p.t, -0.5 * p.d);
    double one = integrate_envelope(gh_rule(64), q / p.t, 0.0, [&](double x) {
        return std::pow(std::exp(-x * x / (2 * p.t)) / std::sqrt(2 * kPi * p.t), q);
    });
    return std::pow(one, p.d / q);
}

CheckReport lp_pointwise_bound_check(const TestFunction& f, double p_exp, const EuclideanParams& p,
                                     const std::vector<ComplexVector>& grid)
{
    require_euclid(f, p);
    if (!(p_exp >= 1)) throw DomainError("L^p bound requires 1 <= p <= infinity");
    double q = std::isinf(p_exp) ? 1.0 : (p_exp == 1.0 ? INFINITY : p_exp / (p_exp - 1.0));

    bool has_lines = false;
    for (const auto& t : f.terms)
        for (const auto& a : t.factors) has_lines = has_lines || factor_is_line(a);
    if (has_lines && !std::isinf(p_exp)) throw DomainError("modes and constants are only in L^infinity");

    // ||f||_p by a dense tensor rule (sup over the same points for p = infinity).
    const int d = p.d;
    const double L = 40.0;
    const int n = d == 1 ? 4000 : (d == 2 ? 400 : 100);
    const QuadratureRule g = gauss_legendre(n, -L, L);
    std::vector<double> acc;
    double sup = 0;
    std::vector<int> idx(d, 0);
    while (true) {
        std::vector<double> x(d);
        double w = 1;
        for (int j = 0; j < d; ++j) {
            x[j] = g.nodes[idx[j]];
            w *= g.weights[idx[j]];
        }
        double v = std::abs(evaluate(f, x));
        sup = std::max(sup, v);
        if (!std::isinf(p_exp)) acc.push_back(w * std::pow(v, p_exp));
        int j = 0;
        while (j < d && ++idx[j] == n) idx[j++] = 0;
        if (j == d) break;
    }
    if (std::isinf(p_exp) && has_lines) {
        double s = 0;
        for (const auto& t : f.terms) s += std::abs(t.coef);
        sup = std::max(sup, s);
    }
    double fp = std::isinf(p_exp) ? sup : std::pow(pairwise_sum(acc), 1.0 / p_exp);
    double C = heat_kernel_lq_norm(p, q);
    double closed = std::isinf(q) ? std::pow(2 * kPi * p.t, -0.5 * d)
                                  : std::pow(2 * kPi * p.t, -0.5 * d) * std::pow(2 * kPi * p.t / q, d / (2 * q));

    SpectralRep F = heat_transform(f, p);
    double worst = 0;
    for (const auto& z : grid) {
        double v = std::abs(analytic_continue(F, z));
        if (v == 0) continue;
        worst = std::max(worst, v / (C * fp * std::exp(y_norm2(z.y) / (2 * p.t))));
    }
    CheckReport r;
    r.id = "euclid.lp_bound";
    r.kind = CheckKind::bound;
    r.lhs = worst;
    r.rhs = 1.0;
    r.nodes = long(grid.size());
    r.values["p"] = p_exp;
    r.values["C"] = C;
    r.values["C_closed_form"] = closed;
    r.values["f_norm_p"] = fp;
    r.gates["constant_consistent"] = std::abs(C - closed) <= 1e-10 * closed;

    // Diagnostic: the L^1-type integral int int |F| e^{-|y|^2/2t} dx dy, on a growing box (d = 1).
    if (d == 1) {
        auto l1 = [&](double B) {
            return gl_integrate<double>(200, -B, B, [&](double y) {
                return gl_integrate<double>(200, -B, B, [&](double x) {
                    return std::abs(analytic_continue(F, ComplexVector{{x}, {y}})) * std::exp(-y * y / (2 * p.t));
                });
            });
        };
        try {
            double B = std::max(8 * std::sqrt(p.t), 6.0);
            double a = l1(B), b = l1(2 * B);
            r.values["l1_integral"] = b;
            r.flags["l1_integral_stable"] = std::abs(b - a) <= 1e-6 * b;
        } catch (const NumericalError&) {
            r.flags["l1_integral_stable"] = false;
        }
    }
    r.finish(1e-9);
    return r;
}

// ---- multiplication ----

Spectrum1D spectrum_of(const SpectralRep& F)
{
    if (F.geometry != Geometry::euclidean || F.dim != 1)
        throw DomainError("spectrum_of: one-dimensional euclidean representations only");
    Spectrum1D s;
    for (const auto& l : spectral_lines(F)) s.lines.push_back({l.xi[0], l.coef});
    double ext = 0.0;
    bool dens = false;
    for (const auto& t : F.source.terms) {
        const Factor1D& a = t.factors[0];
        if (factor_is_line(a)) continue;
        dens = true;
        double v = (a.kind == AtomKind::gaussian ? a.variance : 1.0) + F.t;
        double e = std::sqrt(80.0 / v);
        if (a.kind == AtomKind::hermite) e += std::sqrt(2.0 * a.k + 1.0);
        ext = std::max(ext, e);
    }
    s.extent = ext;
    if (dens) {
        SpectralRep G = F;
        s.density = [G](double xi) { return spectral_density(G, {xi}); };
    }
    return s;
}

Spectrum1D spectrum_product(const Spectrum1D& a, const Spectrum1D& b, int nodes)
{
    Spectrum1D out;
    for (const auto& [xa, ca] : a.lines)
        for (const auto& [xb, cb] : b.lines) {
            bool merged = false;
            for (auto& [x, c] : out.lines)
                if (x == xa + xb) {
                    c += ca * cb;
                    merged = true;
                }
            if (!merged) out.lines.push_back({xa + xb, ca * cb});
        }
    double shift = 0.0;
    for (const auto& l : a.lines) shift = std::max(shift, std::abs(l.first));
    for (const auto& l : b.lines) shift = std::max(shift, std::abs(l.first));
    bool has_a = bool(a.density), has_b = bool(b.density);
    if (!has_a && !has_b) return out;
    out.extent = std::max({has_a ? a.extent : 0.0, has_b ? b.extent : 0.0, a.extent + b.extent}) + shift;
    Spectrum1D A = a, B = b;
    out.density = [A, B, has_a, has_b, nodes](double xi) {
        cplx s = 0.0;
        if (has_b)
            for (const auto& [x, c] : A.lines) s += c * B.density(xi - x);
        if (has_a)
            for (const auto& [x, c] : B.lines) s += c * A.density(xi - x);
        if (has_a && has_b) {
            double lo = std::max(-A.extent, xi - B.extent);
            double hi = std::min(A.extent, xi + B.extent);
            if (lo < hi)
                s += gl_integrate<cplx>(nodes, lo, hi, [&](double eta) { return A.density(eta) * B.density(xi - eta); });
        }
        return s;
    };
    return out;
}

cplx MultiplyResult::recovered(double x) const
{
    cplx s = 0.0;
    for (const auto& [xi, c] : f.lines) s += c * std::exp(cplx(0, xi * x));
    if (f.density) {
        double W = std::min(window, f.extent);
        s += gl_integrate<cplx>(400, -W, W, [&](double xi) { return std::exp(cplx(0, xi * x)) * f.density(xi); });
    }
    return s;
}

cplx MultiplyResult::reheated(double x) const
{
    cplx s = 0.0;
    for (const auto& [xi, c] : f.lines) s += c * std::exp(-0.5 * r * xi * xi) * std::exp(cplx(0, xi * x));
    if (f.density) {
        double W = std::min(window, f.extent);
        s += gl_integrate<cplx>(400, -W, W, [&](double xi) {
            return std::exp(cplx(-0.5 * r * xi * xi, xi * x)) * f.density(xi);
        });
    }
    return s;
}

double MultiplyResult::norm_squared(double W) const
{
    double s = 0.0;
    for (const auto& [xi, c] : f.lines)
        if (std::abs(xi) <= W) s += std::norm(c);
    if (f.density) {
        double w = std::min(W, f.extent);
        s += 2 * kPi * gl_integrate<double>(400, -w, w, [&](double xi) { return std::norm(f.density(xi)); });
    }
    return s;
}

MultiplyResult multiply_recover(const TestFunction& f1, double t, const TestFunction& f2, double s)
{
    if (f1.geometry != Geometry::euclidean || f2.geometry != Geometry::euclidean || f1.dim != 1 || f2.dim != 1)
        throw DomainError("multiply_in_range: one-dimensional euclidean functions only");
    if (!(t > 0) || !(s > 0)) throw DomainError("multiply_in_range: t and s must be positive");
    MultiplyResult m;
    m.r = s * t / (s + t);
    Spectrum1D a = spectrum_of(heat_transform(f1, {1, t}));
    Spectrum1D b = spectrum_of(heat_transform(f2, {1, s}));
    m.g = spectrum_product(a, b);
    // Truncate where the forward multiplier e^{-r xi^2/2} drops below 1e-12.
    m.window = std::sqrt(2.0 * std::log(1e12) / m.r);
    for (const auto& [xi, c] : m.g.lines) {
        if (std::abs(xi) > m.window)
            throw NumericalError("spectral division unstable: line at xi = " + fmt(xi) + " beyond the truncation window");
        m.f.lines.push_back({xi, c * std::exp(0.5 * m.r * xi * xi)});
    }
    if (m.g.density) {
        Spectrum1D g = m.g;
        double r = m.r, W = m.window;
        m.f.density = [g, r, W](double xi) {
            if (std::abs(xi) > W) return cplx(0.0);
            return g.density(xi) * std::exp(0.5 * r * xi * xi);
        };
        m.f.extent = std::min(m.g.extent, m.window);
    }
    return m;
}

CheckReport multiply_in_range(const TestFunction& f1, double t, const TestFunction& f2, double s)
{
    MultiplyResult m = multiply_recover(f1, t, f2, s);
    SpectralRep F1 = heat_transform(f1, {1, t});
    SpectralRep F2 = heat_transform(f2, {1, s});
    double res = 0.0, scale = 0.0;
    for (int i = 0; i <= 24; ++i) {
        double x = -6.0 + 0.5 * i;
        cplx G = analytic_continue(F1, {{x}, {0.0}}) * analytic_continue(F2, {{x}, {0.0}});
        res = std::max(res, std::abs(m.reheated(x) - G));
        scale = std::max(scale, std::abs(G));
    }
    CheckReport r;
    r.id = "euclid.multiply";
    r.kind = CheckKind::bound;
    r.lhs = scale > 0 ? res / scale : res;
    r.rhs = 1e-8;
    std::vector<double> norms;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) norms.push_back(m.norm_squared(frac * m.window));
    double change = std::abs(norms[3] - norms[2]);
    r.gates["norm_stable"] = std::isfinite(norms[3]) && change <= 1e-8 * std::max(norms[3], 1e-300);
    r.values["r"] = m.r;
    r.values["window"] = m.window;
    r.values["norm_squared"] = norms[3];
    r.values["norm_change"] = change;
    r.values["residual_abs"] = res;
    r.nodes = 400;
    r.finish(0.0);
    return r;
}

}  // namespace heatrange
