#include "heatrange/testfns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace heatrange {

std::string to_string(Geometry g)
{
    switch (g) {
    case Geometry::euclidean: return "euclidean";
    case Geometry::circle: return "circle";
    case Geometry::sphere3: return "sphere3";
    case Geometry::hyperbolic3_radial: return "hyperbolic3";
    }
    return "?";
}

Geometry parse_geometry(const std::string& s)
{
    if (s == "euclidean" || s == "rd") return Geometry::euclidean;
    if (s == "circle" || s == "sphere1" || s == "s1") return Geometry::circle;
    if (s == "sphere3" || s == "s3") return Geometry::sphere3;
    if (s == "hyperbolic3" || s == "h3" || s == "hyperbolic3_radial") return Geometry::hyperbolic3_radial;
    throw DomainError("unknown geometry '" + s + "'");
}

TestFunction operator+(TestFunction a, const TestFunction& b)
{
    if (a.geometry != b.geometry || a.dim != b.dim)
        throw DomainError("cannot add test functions on different geometries");
    if (a.terms.empty()) a.pole = b.pole;
    else if (!b.terms.empty() && a.pole != b.pole)
        throw DomainError("zonal terms must share a pole");
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
}

TestFunction operator*(cplx c, TestFunction f)
{
    for (auto& t : f.terms) t.coef *= c;
    return f;
}

TestFunction zero_function(Geometry g, int dim)
{
    TestFunction f;
    f.geometry = g;
    f.dim = dim;
    if (g == Geometry::sphere3) f.pole = {1, 0, 0, 0};
    return f;
}

namespace {

TestFunction euclid_single(AtomKind kind, std::vector<Factor1D> factors, cplx coef = 1.0)
{
    if (factors.empty() || factors.size() > 3) throw DomainError("euclidean dimension must be 1, 2 or 3");
    TestFunction f;
    f.geometry = Geometry::euclidean;
    f.dim = int(factors.size());
    Term t;
    t.kind = kind;
    t.coef = coef;
    t.factors = std::move(factors);
    f.terms.push_back(t);
    return f;
}

TestFunction single(Geometry g, Term t, std::vector<double> pole = {})
{
    TestFunction f;
    f.geometry = g;
    f.dim = g == Geometry::circle ? 1 : 3;
    f.terms.push_back(t);
    f.pole = std::move(pole);
    return f;
}

std::vector<double> unit_pole(std::vector<double> p)
{
    if (p.size() != 4) throw DomainError("S^3 pole must be a 4-vector");
    double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    if (!(n > 0)) throw DomainError("S^3 pole must be nonzero");
    for (auto& x : p) x /= n;
    return p;
}

const QuadratureRule& bump_rule(double a)
{
    static thread_local double cached_a = -1.0;
    static thread_local QuadratureRule rule;
    if (a != cached_a) {
        rule = gauss_legendre(2000, 0.0, a);
        cached_a = a;
    }
    return rule;
}

}  // namespace

TestFunction gaussian(const std::vector<double>& center, double variance)
{
    if (!(variance > 0)) throw DomainError("gaussian: variance must be positive");
    std::vector<Factor1D> fs;
    for (double c : center) fs.push_back({AtomKind::gaussian, c, variance, 0, 0.0});
    return euclid_single(AtomKind::gaussian, fs);
}

TestFunction gaussian(double center, double variance) { return gaussian(std::vector<double>{center}, variance); }

TestFunction hermite(const std::vector<int>& k)
{
    std::vector<Factor1D> fs;
    for (int kk : k) {
        if (kk < 0) throw DomainError("hermite: index must be nonnegative");
        fs.push_back({AtomKind::hermite, 0.0, 1.0, kk, 0.0});
    }
    return euclid_single(AtomKind::hermite, fs);
}

TestFunction hermite(int k, int dim)
{
    std::vector<int> idx(std::max(dim, 0), 0);
    if (!idx.empty()) idx[0] = k;
    return hermite(idx);
}

TestFunction fourier_mode(const std::vector<double>& xi)
{
    std::vector<Factor1D> fs;
    for (double x : xi) fs.push_back({AtomKind::fourier_mode, 0.0, 1.0, 0, x});
    return euclid_single(AtomKind::fourier_mode, fs);
}

TestFunction fourier_mode(double xi) { return fourier_mode(std::vector<double>{xi}); }

TestFunction constant(double c, int dim)
{
    std::vector<Factor1D> fs(std::max(dim, 0), Factor1D{AtomKind::constant, 0, 1, 0, 0});
    return euclid_single(AtomKind::constant, fs, c);
}

TestFunction circle_mode(int ell)
{
    Term t;
    t.kind = AtomKind::fourier_mode;
    t.ell = ell;
    return single(Geometry::circle, t);
}

TestFunction circle_constant(double c)
{
    Term t;
    t.kind = AtomKind::constant;
    t.coef = c;
    return single(Geometry::circle, t);
}

TestFunction circle_cos(int ell) { return cplx(0.5) * circle_mode(ell) + cplx(0.5) * circle_mode(-ell); }

TestFunction zonal_eigen(int ell, const std::vector<double>& pole)
{
    if (ell < 0) throw DomainError("zonal_eigen: degree must be nonnegative");
    Term t;
    t.kind = AtomKind::zonal_eigen;
    t.ell = ell;
    return single(Geometry::sphere3, t, unit_pole(pole));
}

TestFunction sphere_constant(double c, const std::vector<double>& pole)
{
    Term t;
    t.kind = AtomKind::constant;
    t.coef = c;
    return single(Geometry::sphere3, t, unit_pole(pole));
}

TestFunction spectral_gaussian(double width)
{
    if (!(width > 0)) throw DomainError("spectral_gaussian: width must be positive");
    Term t;
    t.kind = AtomKind::spectral_gaussian;
    t.width = width;
    return single(Geometry::hyperbolic3_radial, t);
}

TestFunction h3_bump(double radius)
{
    if (!(radius > 0)) throw DomainError("bump: radius must be positive");
    Term t;
    t.kind = AtomKind::bump;
    t.width = radius;
    return single(Geometry::hyperbolic3_radial, t);
}

double hermite_function(int k, double x)
{
    double prev = 0.0, cur = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    for (int j = 0; j < k; ++j) {
        double next = std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(double(j) / (j + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

cplx chebyshev_u(int ell, cplx w)
{
    if (ell < 0) return 0.0;
    cplx u0 = 1.0, u1 = 2.0 * w;
    if (ell == 0) return u0;
    for (int k = 1; k < ell; ++k) {
        cplx u2 = 2.0 * w * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

double h3_radial_value(const TestFunction& f, double r)
{
    if (f.geometry != Geometry::hyperbolic3_radial) throw DomainError("h3_radial_value: geometry mismatch");
    double s = 0.0;
    for (const auto& t : f.terms) {
        double v = 0.0;
        if (t.kind == AtomKind::spectral_gaussian) {
            double w = t.width;
            v = std::sqrt(kPi / 2.0) * w * w * w * std::exp(-0.5 * w * w * r * r) / (2.0 * kPi * kPi * sinh_over_x(r));
        } else if (t.kind == AtomKind::bump) {
            double a = t.width;
            v = r < a ? std::exp(1.0 - a * a / (a * a - r * r)) : 0.0;
        } else {
            throw DomainError("h3_radial_value: unsupported atom");
        }
        s += t.coef.real() * v;
    }
    return s;
}

cplx evaluate(const TestFunction& f, const std::vector<double>& p)
{
    cplx s = 0.0;
    switch (f.geometry) {
    case Geometry::euclidean: {
        if (int(p.size()) != f.dim) throw DomainError("evaluate: point dimension mismatch");
        for (const auto& t : f.terms) {
            cplx v = t.coef;
            for (int j = 0; j < f.dim; ++j) {
                const Factor1D& a = t.factors[j];
                double x = p[j];
                switch (a.kind) {
                case AtomKind::gaussian: {
                    double d = x - a.center;
                    v *= std::exp(-d * d / (2 * a.variance)) / std::sqrt(2 * kPi * a.variance);
                    break;
                }
                case AtomKind::hermite: v *= hermite_function(a.k, x); break;
                case AtomKind::fourier_mode: v *= std::exp(cplx(0, a.xi * x)); break;
                case AtomKind::constant: break;
                default: throw DomainError("evaluate: atom not valid on R^d");
                }
            }
            s += v;
        }
        return s;
    }
    case Geometry::circle: {
        double th;
        if (p.size() == 1) th = p[0];
        else if (p.size() == 2) th = std::atan2(p[1], p[0]);
        else throw DomainError("evaluate: circle point must be an angle or a 2-vector");
        for (const auto& t : f.terms)
            s += t.kind == AtomKind::constant ? t.coef : t.coef * std::exp(cplx(0, t.ell * th));
        return s;
    }
    case Geometry::sphere3: {
        if (p.size() != 4) throw DomainError("evaluate: S^3 point must be a 4-vector");
        if (f.terms.empty()) return 0.0;
        double c = 0;
        for (int i = 0; i < 4; ++i) c += p[i] * f.pole[i];
        for (const auto& t : f.terms)
            s += t.kind == AtomKind::constant ? t.coef
                                              : t.coef * chebyshev_u(t.ell, c) / (kPi * std::sqrt(2.0));
        return s;
    }
    case Geometry::hyperbolic3_radial: {
        double r;
        if (p.size() == 1) r = p[0];
        else if (p.size() == 4) r = std::acosh(std::max(1.0, p[0]));
        else throw DomainError("evaluate: H^3 point must be a radius or a 4-vector");
        if (f.terms.empty()) return 0.0;
        return h3_radial_value(f, r);
    }
    }
    return s;
}

cplx factor_fourier(const Factor1D& a, double xi)
{
    switch (a.kind) {
    case AtomKind::gaussian:
        return std::exp(cplx(-0.5 * a.variance * xi * xi, -xi * a.center)) / (2 * kPi);
    case AtomKind::hermite: {
        static const cplx mi[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};
        return mi[a.k % 4] * hermite_function(a.k, xi) / std::sqrt(2 * kPi);
    }
    default: return 0.0;
    }
}

bool factor_is_line(const Factor1D& a)
{
    return a.kind == AtomKind::fourier_mode || a.kind == AtomKind::constant;
}

SpectralRep exact_transform(const TestFunction& f)
{
    SpectralRep F;
    F.geometry = f.geometry;
    F.dim = f.dim;
    F.source = f;
    F.pole = f.pole;
    switch (f.geometry) {
    case Geometry::euclidean: break;
    case Geometry::circle:
        for (const auto& t : f.terms) F.lines[t.kind == AtomKind::constant ? 0 : t.ell] += t.coef;
        break;
    case Geometry::sphere3:
        for (const auto& t : f.terms) {
            if (t.kind == AtomKind::constant) F.lines[0] += t.coef * kPi * std::sqrt(2.0);
            else F.lines[t.ell] += t.coef;
        }
        break;
    case Geometry::hyperbolic3_radial:
        for (const auto& t : f.terms) {
            if (t.kind == AtomKind::bump) F.by_quadrature = true;
            else if (t.kind != AtomKind::spectral_gaussian)
                throw DomainError("exact_transform: atom has no spherical transform on H^3");
        }
        break;
    }
    return F;
}

cplx spectral_density(const SpectralRep& F, const std::vector<double>& xi)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("spectral_density: euclidean only");
    if (int(xi.size()) != F.dim) throw DomainError("spectral_density: dimension mismatch");
    double xi2 = 0;
    for (double x : xi) xi2 += x * x;
    cplx s = 0.0;
    for (const auto& t : F.source.terms) {
        bool any_line = false;
        for (const auto& a : t.factors) any_line = any_line || factor_is_line(a);
        if (any_line) continue;
        cplx v = t.coef;
        for (int j = 0; j < F.dim; ++j) v *= factor_fourier(t.factors[j], xi[j]);
        s += v;
    }
    return s * std::exp(-0.5 * F.t * xi2);
}

std::vector<SpectralLine> spectral_lines(const SpectralRep& F)
{
    if (F.geometry != Geometry::euclidean) throw DomainError("spectral_lines: euclidean only");
    std::vector<SpectralLine> out;
    for (const auto& t : F.source.terms) {
        bool all_lines = true;
        for (const auto& a : t.factors) all_lines = all_lines && factor_is_line(a);
        bool any_line = false;
        for (const auto& a : t.factors) any_line = any_line || factor_is_line(a);
        if (!any_line) continue;
        if (!all_lines) throw DomainError("spectral_lines: mixed line/density products are not supported");
        SpectralLine l;
        double xi2 = 0;
        for (const auto& a : t.factors) {
            double x = a.kind == AtomKind::fourier_mode ? a.xi : 0.0;
            l.xi.push_back(x);
            xi2 += x * x;
        }
        l.coef = t.coef * std::exp(-0.5 * F.t * xi2);
        out.push_back(l);
    }
    return out;
}

double h3_transform_value(const SpectralRep& F, double lambda)
{
    if (F.geometry != Geometry::hyperbolic3_radial) throw DomainError("h3_transform_value: geometry mismatch");
    double s = 0.0;
    for (const auto& t : F.source.terms) {
        if (t.kind == AtomKind::spectral_gaussian) {
            s += t.coef.real() * std::exp(-lambda * lambda / (2 * t.width * t.width));
        } else if (t.kind == AtomKind::bump) {
            TestFunction one = F.source;
            one.terms = {t};
            one.terms[0].coef = 1.0;
            const QuadratureRule& q = bump_rule(t.width);
            double v = q.integrate([&](double r) {
                return h3_radial_value(one, r) * r * sin_over_x(lambda * r) * std::sinh(r);
            });
            s += t.coef.real() * 4 * kPi * v;
        }
    }
    return s;
}

namespace {

cplx factor_inner(const Factor1D& a, const Factor1D& b, bool& quadrature)
{
    if (factor_is_line(a) || factor_is_line(b))
        throw DomainError("exact_l2_norm: Fourier modes and constants are not square-integrable on R^d");
    if (a.kind == AtomKind::gaussian && b.kind == AtomKind::gaussian) {
        double v = a.variance + b.variance, d = a.center - b.center;
        return std::exp(-d * d / (2 * v)) / std::sqrt(2 * kPi * v);
    }
    if (a.kind == AtomKind::hermite && b.kind == AtomKind::hermite) return a.k == b.k ? 1.0 : 0.0;
    quadrature = true;
    static const QuadratureRule gh = gauss_hermite(64);
    const Factor1D& g = a.kind == AtomKind::gaussian ? a : b;
    const Factor1D& h = a.kind == AtomKind::gaussian ? b : a;
    double P = 1.0 / g.variance + 1.0;
    double c = g.center / g.variance / P;
    return integrate_envelope(gh, P, c, [&](double x) {
        double d = x - g.center;
        return std::exp(-d * d / (2 * g.variance)) / std::sqrt(2 * kPi * g.variance) * hermite_function(h.k, x);
    });
}

}  // namespace

NormValue exact_l2_norm(const TestFunction& f)
{
    NormValue out;
    out.provenance = "closed_form";
    if (f.terms.empty()) return out;
    switch (f.geometry) {
    case Geometry::euclidean: {
        bool quad = false;
        cplx s = 0.0;
        for (const auto& ta : f.terms)
            for (const auto& tb : f.terms) {
                cplx v = ta.coef * std::conj(tb.coef);
                for (int j = 0; j < f.dim; ++j) v *= factor_inner(ta.factors[j], tb.factors[j], quad);
                s += v;
            }
        out.value = s.real();
        if (quad) out.provenance = "quadrature";
        return out;
    }
    case Geometry::circle:
    case Geometry::sphere3: {
        SpectralRep F = exact_transform(f);
        double s = 0;
        for (const auto& [l, c] : F.lines) s += std::norm(c);
        out.value = f.geometry == Geometry::circle ? 2 * kPi * s : s;
        return out;
    }
    case Geometry::hyperbolic3_radial: {
        bool has_bump = false;
        for (const auto& t : f.terms) has_bump = has_bump || t.kind == AtomKind::bump;
        if (has_bump) {
            double a = 0;
            for (const auto& t : f.terms) a = std::max(a, t.kind == AtomKind::bump ? t.width : 0.0);
            for (const auto& t : f.terms)
                if (t.kind == AtomKind::spectral_gaussian) a = std::max(a, 12.0 / t.width);
            QuadratureRule q = gauss_legendre(2000, 0.0, a);
            out.value = 4 * kPi * q.integrate([&](double r) {
                double v = h3_radial_value(f, r);
                double s = std::sinh(r);
                return v * v * s * s;
            });
            out.provenance = "quadrature";
            return out;
        }
        double s = 0;
        for (const auto& ta : f.terms)
            for (const auto& tb : f.terms) {
                double a = 0.5 / (ta.width * ta.width) + 0.5 / (tb.width * tb.width);
                s += (ta.coef * std::conj(tb.coef)).real() * std::sqrt(kPi) / (4 * std::pow(a, 1.5));
            }
        out.value = s / (2 * kPi * kPi);
        return out;
    }
    }
    return out;
}

// ---- descriptors ----

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string atom_string(const TestFunction& f, const Term& t)
{
    std::ostringstream os;
    switch (f.geometry) {
    case Geometry::euclidean: {
        const auto& fs = t.factors;
        switch (t.kind) {
        case AtomKind::gaussian:
            os << "gaussian(";
            for (const auto& a : fs) os << fmt(a.center) << ",";
            os << fmt(fs[0].variance) << ")";
            break;
        case AtomKind::hermite:
            os << "hermite(";
            for (std::size_t j = 0; j < fs.size(); ++j) os << (j ? "," : "") << fs[j].k;
            os << ")";
            break;
        case AtomKind::fourier_mode:
            os << "fourier_mode(";
            for (std::size_t j = 0; j < fs.size(); ++j) os << (j ? "," : "") << fmt(fs[j].xi);
            os << ")";
            break;
        default: os << "constant(1)"; break;
        }
        break;
    }
    case Geometry::circle:
        if (t.kind == AtomKind::constant) os << "constant(1)";
        else os << "fourier_mode(" << t.ell << ")";
        break;
    case Geometry::sphere3:
        if (t.kind == AtomKind::constant) os << "constant(1)";
        else os << "zonal_eigen(" << t.ell << ")";
        break;
    case Geometry::hyperbolic3_radial:
        if (t.kind == AtomKind::bump) os << "bump(" << fmt(t.width) << ")";
        else os << "spectral_gaussian(" << fmt(t.width) << ")";
        break;
    }
    return os.str();
}

std::string trim(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_args(const std::string& inside)
{
    std::vector<double> out;
    std::stringstream ss(inside);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw DomainError("descriptor: bad number '" + item + "'");
        }
        if (pos != item.size()) throw DomainError("descriptor: bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

int as_int(double x, const std::string& what)
{
    if (x != std::floor(x)) throw DomainError(what + " must be an integer");
    return int(x);
}

TestFunction parse_atom(const std::string& text, Geometry g, int dim)
{
    std::size_t lp = text.find('(');
    std::size_t rp = text.rfind(')');
    if (lp == std::string::npos || rp == std::string::npos || rp < lp)
        throw DomainError("descriptor: expected name(args) in '" + text + "'");
    std::string name = trim(text.substr(0, lp));
    std::vector<double> a = parse_args(text.substr(lp + 1, rp - lp - 1));
    auto need = [&](std::size_t n) {
        if (a.size() != n) throw DomainError("descriptor: wrong argument count for " + name);
    };
    switch (g) {
    case Geometry::euclidean:
        if (name == "gaussian") {
            if (a.size() == 1) return gaussian(std::vector<double>(dim, 0.0), a[0]);
            need(std::size_t(dim) + 1);
            return gaussian(std::vector<double>(a.begin(), a.end() - 1), a.back());
        }
        if (name == "hermite") {
            if (a.size() == 1) return hermite(as_int(a[0], "hermite index"), dim);
            need(dim);
            std::vector<int> k;
            for (double x : a) k.push_back(as_int(x, "hermite index"));
            return hermite(k);
        }
        if (name == "fourier_mode") {
            if (a.size() == 1 && dim > 1) {
                std::vector<double> xi(dim, 0.0);
                xi[0] = a[0];
                return fourier_mode(xi);
            }
            need(dim);
            return fourier_mode(a);
        }
        if (name == "constant") {
            need(1);
            return constant(a[0], dim);
        }
        break;
    case Geometry::circle:
        if (name == "fourier_mode") {
            need(1);
            return circle_mode(as_int(a[0], "circle mode"));
        }
        if (name == "cos") {
            need(1);
            return circle_cos(as_int(a[0], "circle mode"));
        }
        if (name == "constant") {
            need(1);
            return circle_constant(a[0]);
        }
        break;
    case Geometry::sphere3:
        if (name == "zonal_eigen") {
            need(1);
            return zonal_eigen(as_int(a[0], "zonal degree"));
        }
        if (name == "constant") {
            need(1);
            return sphere_constant(a[0]);
        }
        break;
    case Geometry::hyperbolic3_radial:
        if (name == "spectral_gaussian") {
            need(1);
            return spectral_gaussian(a[0]);
        }
        if (name == "bump") {
            need(1);
            return h3_bump(a[0]);
        }
        break;
    }
    throw DomainError("descriptor: '" + name + "' is not in the catalog for " + to_string(g));
}

cplx parse_coef(const std::string& s)
{
    std::string t = trim(s);
    if (!t.empty() && t.front() == '(') {
        std::vector<double> v = parse_args(t.substr(1, t.size() - 2));
        if (v.size() != 2) throw DomainError("descriptor: complex coefficient needs (re,im)");
        return {v[0], v[1]};
    }
    std::vector<double> v = parse_args(t);
    if (v.size() != 1) throw DomainError("descriptor: bad coefficient '" + s + "'");
    return v[0];
}

}  // namespace

std::string to_string(const TestFunction& f)
{
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        const Term& t = f.terms[i];
        if (i) os << "+";
        cplx c = t.coef;
        if (t.kind == AtomKind::constant) {
            if (c.imag() == 0) os << "constant(" << fmt(c.real()) << ")";
            else os << "(" << fmt(c.real()) << "," << fmt(c.imag()) << ")*constant(1)";
            continue;
        }
        if (c != cplx(1.0)) {
            if (c.imag() == 0) os << fmt(c.real()) << "*";
            else os << "(" << fmt(c.real()) << "," << fmt(c.imag()) << ")*";
        }
        os << atom_string(f, t);
    }
    return os.str();
}

TestFunction parse_test_function(const std::string& text, Geometry g, int dim)
{
    TestFunction out = zero_function(g, g == Geometry::euclidean ? dim : (g == Geometry::circle ? 1 : 3));
    std::string s = trim(text);
    if (s.empty() || s == "0") return out;

    std::vector<std::pair<int, std::string>> pieces;
    int depth = 0, sign = 1;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        bool sep = depth == 0 && (ch == '+' || ch == '-');
        if (sep) {
            std::string tc = trim(cur);
            char prev = tc.empty() ? '\0' : tc.back();
            if (tc.empty() || prev == '*' || prev == 'e' || prev == 'E') sep = false;
        }
        if (sep) {
            pieces.push_back({sign, trim(cur)});
            cur.clear();
            sign = ch == '-' ? -1 : 1;
        } else {
            cur += ch;
        }
    }
    pieces.push_back({sign, trim(cur)});

    for (auto& [sg, piece] : pieces) {
        if (piece.empty()) throw DomainError("descriptor: empty term");
        cplx coef = double(sg);
        if (piece.front() == '-') {
            coef = -coef;
            piece = trim(piece.substr(1));
        }
        std::size_t star = std::string::npos;
        int dd = 0;
        for (std::size_t i = 0; i < piece.size(); ++i) {
            if (piece[i] == '(') ++dd;
            if (piece[i] == ')') --dd;
            if (piece[i] == '*' && dd == 0) {
                star = i;
                break;
            }
        }
        std::string atom = piece;
        if (star != std::string::npos) {
            coef *= parse_coef(piece.substr(0, star));
            atom = trim(piece.substr(star + 1));
        }
        out = out + coef * parse_atom(atom, g, out.dim);
    }
    return out;
}

}  // namespace heatrange
