#include "heatrange/config.hpp"

#include "heatrange/euclidean.hpp"
#include "heatrange/hyperbolic3.hpp"
#include "heatrange/sphere.hpp"
#include "heatrange/testfns.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace heatrange {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    std::string s = trim(v);
    if (s == "inf" || s == "infinity") return INFINITY;
    try {
        std::size_t pos = 0;
        double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v)
{
    double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    return int(x);
}

std::vector<double> to_vector(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    return out;
}

const std::map<std::string, std::vector<std::string>>& op_table()
{
    static const std::map<std::string, std::vector<std::string>> ops{
        {"euclidean",
         {"isometry_lebesgue", "isometry_gaussian", "pointwise_bound", "invert_ball", "invert_adjoint",
          "fourier_range", "sobolev_norm", "sobolev_image", "smooth_inversion", "bargmann", "lp_bound", "multiply"}},
        {"circle", {"isometry", "inversion", "nu_kernel"}},
        {"sphere3",
         {"isometry", "inversion", "pointwise_bound", "duality_probe", "sobolev", "multiply", "nu_kernel"}},
        {"hyperbolic3",
         {"keystone", "round_trip", "plancherel", "inversion_L", "m_probe", "ring_growth", "multiplication_failure"}},
    };
    return ops;
}

std::string canonical_geometry(const std::string& g)
{
    try {
        return to_string(parse_geometry(g));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

TestFunction function_or(const ExperimentConfig& cfg, const std::string& text, const std::string& fallback)
{
    Geometry g = parse_geometry(cfg.geometry);
    try {
        return parse_test_function(text.empty() ? fallback : text, g, cfg.d);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bad test function: ") + e.what());
    }
}

std::string default_function(const std::string& geometry)
{
    if (geometry == "euclidean") return "hermite(0)";
    if (geometry == "circle") return "cos(1)";
    if (geometry == "sphere3") return "zonal_eigen(1)";
    return "spectral_gaussian(1)";
}

CheckReport value_report(const std::string& id, cplx lhs, cplx rhs, double tol, long nodes)
{
    CheckReport r;
    r.id = id;
    r.lhs = lhs.real();
    r.rhs = rhs.real();
    r.values["lhs_imag"] = lhs.imag();
    r.values["rhs_imag"] = rhs.imag();
    r.nodes = nodes;
    r.gates["finite"] = std::isfinite(std::abs(lhs));
    r.finish(tol);
    r.abs_err = std::abs(lhs - rhs);
    r.rel_err = std::abs(rhs) > 0 ? r.abs_err / std::abs(rhs) : r.abs_err;
    r.pass = r.gates_ok() && r.abs_err <= tol;
    return r;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n > 1 ? a + (b - a) * i / (n - 1) : a);
    return v;
}

double or_default(double v, double d) { return std::isnan(v) ? d : v; }

CheckReport run_euclidean(const ExperimentConfig& c)
{
    EuclideanParams p{c.d, c.t};
    EuclidOptions opt;
    if (c.nodes > 0) opt.nodes = c.nodes;
    opt.tol = or_default(c.tol, opt.tol);
    if (c.inject == "wrong_variance") opt.variance_factor = 2.0;
    TestFunction f = function_or(c, c.f, default_function("euclidean"));
    std::vector<double> x = c.x.empty() ? std::vector<double>(c.d, 0.0) : c.x;
    const std::string& op = c.op;

    if (op == "isometry_lebesgue") return isometry_check_lebesgue(f, p, opt);
    if (op == "isometry_gaussian") return isometry_check_gaussian(f, GaussianMeasureSpec{c.s}, p, opt);
    if (op == "pointwise_bound") return pointwise_bound_check(f, p, default_grid(c.d, 3.0, 21));
    if (op == "invert_ball" || op == "invert_adjoint") {
        double R = or_default(c.R, 8 * std::sqrt(c.t));
        SpectralRep F = heat_transform(f, p);
        int nodes = c.nodes > 0 ? c.nodes : (op == "invert_ball" ? 128 : 96);
        cplx v = op == "invert_ball" ? invert_ball(F, x, R, nodes) : invert_adjoint(F, x, R, nodes);
        CheckReport r = value_report("euclid." + op, v, evaluate(f, x), or_default(c.tol, 1e-6), nodes);
        r.values["R"] = R;
        return r;
    }
    if (op == "fourier_range") return fourier_range_test(exact_transform(f), c.t);
    if (op == "sobolev_norm")
        return sobolev_norm_check(f, c.n, p, or_default(c.c_n, default_sobolev_constant(c.n, p)), opt);
    if (op == "sobolev_image") return sobolev_image_check(f, c.n, p);
    if (op == "smooth_inversion") return smooth_pointwise_inversion(f, p, x);
    if (op == "bargmann") {
        BargmannMode mode = spectral_lines(exact_transform(f)).empty() ? BargmannMode::schwartz : BargmannMode::tempered;
        return bargmann_bound_scan(f, p, mode, std::max(1, c.n));
    }
    if (op == "lp_bound") return lp_pointwise_bound_check(f, c.p, p, default_grid(c.d, 3.0, 21));
    if (op == "multiply")
        return multiply_in_range(f, c.t, function_or(c, c.f2, default_function("euclidean")), c.s);
    throw ConfigError("unknown operation '" + op + "' for geometry euclidean");
}

CheckReport nu_kernel_report(const ExperimentConfig& c, int d)
{
    CheckReport r;
    r.id = d == 1 ? "circle.nu_kernel" : "sphere.nu_kernel";
    r.kind = CheckKind::bound;
    double worst = 0.0;
    for (double t : linspace(0.2, 2.0, 10))
        for (double R : linspace(0.1, 5.0, 30)) worst = std::max(worst, std::abs(nu_pde_residual({d, t}, R)));
    double norm = nu_normalization({d, c.t});
    r.lhs = worst;
    r.rhs = or_default(c.tol, 1e-8);
    r.values["pde_residual_max"] = worst;
    r.values["normalization"] = norm;
    r.values["normalization_error"] = std::abs(norm - 1.0);
    r.gates["normalization"] = std::abs(norm - 1.0) <= r.rhs;
    r.nodes = 300;
    r.finish(0.0);
    return r;
}

CheckReport run_sphere(const ExperimentConfig& c, bool s3)
{
    SphereOptions opt;
    if (c.nodes > 0) opt.nodes = c.nodes;
    opt.tol = or_default(c.tol, -1.0);
    opt.swap_fiber = c.inject == "swap_fiber";
    const std::string geo = s3 ? "sphere3" : "circle";
    TestFunction f = function_or(c, c.f, default_function(geo));
    const std::string& op = c.op;

    if (op == "isometry") return isometry_check_sphere(f, c.t, opt);
    if (op == "inversion") {
        std::vector<double> pt = s3 ? f.pole : std::vector<double>{1.0, 0.0};
        if (!c.x.empty()) pt = c.x;
        double R = or_default(c.R, INFINITY);
        cplx v = inversion_sphere(sphere_heat_transform(f, c.t), pt, R, opt);
        CheckReport r = value_report(s3 ? "sphere.inversion_s3" : "sphere.inversion_s1", v, evaluate(f, pt),
                                     or_default(c.tol, s3 ? 1e-4 : 1e-8), opt.nodes);
        r.values["R"] = R;
        return r;
    }
    if (op == "nu_kernel") return nu_kernel_report(c, s3 ? 3 : 1);
    if (!s3) throw ConfigError("operation '" + op + "' is only defined on sphere3");
    if (op == "pointwise_bound") return pointwise_bound_sdbnd(f, c.t, default_sphere_grid(f.pole, 20, 20, 1.5));
    if (op == "duality_probe") return duality_probe(c.t, linspace(0.0, 2.0, 21));
    if (op == "sobolev") return sobolev_s3_check(f, c.n, c.t, opt);
    if (op == "multiply") return multiply_sphere(f, c.t, function_or(c, c.f2, default_function(geo)), c.s);
    throw ConfigError("unknown operation '" + op + "' for geometry sphere3");
}

CheckReport run_h3(const ExperimentConfig& c)
{
    const std::string& op = c.op;
    double tol = or_default(c.tol, 1e-8);
    if (op == "keystone") {
        RadialSpectralFn P = h3_heat_transform(point_mass(), c.t);
        CheckReport r;
        r.id = "h3.keystone";
        double worst = 0.0;
        for (double rr : linspace(0.1, 5.0, 50))
            worst = std::max(worst, std::abs(h3_inverse_transform(P, rr) - h3_heat_kernel(c.t, rr)));
        r.lhs = worst;
        r.rhs = 0.0;
        r.values["t"] = c.t;
        r.nodes = P.nodes;
        r.finish(tol);
        r.pass = r.abs_err <= tol;
        return r;
    }
    TestFunction f = function_or(c, c.f, op == "round_trip" ? "bump(1)" : default_function("hyperbolic3"));
    if (op == "round_trip") {
        RadialSpectralFn F = h3_spherical_transform(f);
        CheckReport r;
        r.id = "h3.round_trip";
        double worst = 0.0;
        for (double rr : linspace(0.0, 3.0, 31))
            worst = std::max(worst, std::abs(h3_inverse_transform(F, rr) - h3_radial_value(f, rr)));
        r.lhs = worst;
        r.rhs = 0.0;
        r.nodes = F.nodes;
        r.finish(tol);
        r.pass = r.abs_err <= tol;
        return r;
    }
    if (op == "plancherel") {
        RadialSpectralFn F = h3_spherical_transform(f);
        CheckReport r;
        r.id = "h3.plancherel";
        r.lhs = h3_plancherel_norm(F);
        NormValue nv = exact_l2_norm(f);
        r.rhs = nv.value;
        r.note = "rhs by " + nv.provenance;
        r.nodes = F.nodes;
        r.finish(tol);
        return r;
    }
    if (op == "inversion_L") {
        RadialSpectralFn F = h3_heat_transform(h3_spherical_transform(f), c.t);
        double R = or_default(c.R, 8.0);
        CheckReport r = value_report("h3.inversion_L", inversion_L(F, R), h3_radial_value(f, 0.0),
                                     or_default(c.tol, 1e-4), F.nodes);
        r.values["R"] = R;
        return r;
    }
    if (op == "m_probe") {
        MProbeOptions o;
        o.t = c.t;
        return isometry_M_probe(f, o);
    }
    if (op == "ring_growth") return ring_growth_probe(f, c.t, linspace(0.2, 1.2, 6));
    if (op == "multiplication_failure")
        return multiplication_failure_demo(f, function_or(c, c.f2, default_function("hyperbolic3")), c.t,
                                           or_default(c.s, c.t));
    throw ConfigError("unknown operation '" + op + "' for geometry hyperbolic3");
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in)
{
    std::string key = trim(key_in), v = trim(value_in);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    if (key == "geometry") cfg.geometry = canonical_geometry(v);
    else if (key == "op") cfg.op = v;
    else if (key == "f") cfg.f = v;
    else if (key == "f2") cfg.f2 = v;
    else if (key == "d") cfg.d = to_int(key, v);
    else if (key == "t") cfg.t = to_double(key, v);
    else if (key == "s") cfg.s = to_double(key, v);
    else if (key == "n") cfg.n = to_int(key, v);
    else if (key == "p") cfg.p = to_double(key, v);
    else if (key == "c_n") cfg.c_n = to_double(key, v);
    else if (key == "R") cfg.R = to_double(key, v);
    else if (key == "x") cfg.x = to_vector(key, v);
    else if (key == "nodes") cfg.nodes = to_int(key, v);
    else if (key == "tol") cfg.tol = to_double(key, v);
    else if (key == "out") cfg.out = v;
    else if (key == "suite") cfg.suite = v;
    else if (key == "inject") cfg.inject = v;
    else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::vector<std::string> operation_names(const std::string& geometry)
{
    auto it = op_table().find(canonical_geometry(geometry));
    return it->second;
}

void validate(const ExperimentConfig& c)
{
    std::string geo = canonical_geometry(c.geometry);
    if (!c.inject.empty() && c.inject != "wrong_variance" && c.inject != "swap_fiber")
        throw ConfigError("inject must be wrong_variance or swap_fiber");
    if (!c.suite.empty()) {
        if (c.suite != "euclid_full" && c.suite != "sphere_full" && c.suite != "h3_full" && c.suite != "all")
            throw ConfigError("unknown suite '" + c.suite + "'");
        return;
    }
    if (c.op.empty()) throw ConfigError("no operation given");
    const auto& ops = op_table().at(geo);
    if (std::find(ops.begin(), ops.end(), c.op) == ops.end())
        throw ConfigError("unknown operation '" + c.op + "' for geometry " + geo);
    if (!(c.t > 0)) throw ConfigError("requires t > 0");
    if (geo == "euclidean" && (c.d < 1 || c.d > 3)) throw ConfigError("requires d in {1, 2, 3}");
    if (c.nodes < 0) throw ConfigError("requires nodes >= 0");
    if (!std::isnan(c.tol) && !(c.tol > 0)) throw ConfigError("requires tol > 0");
    if (!std::isnan(c.R) && !(c.R >= 0)) throw ConfigError("requires R >= 0");
    bool needs_s = c.op == "isometry_gaussian" || c.op == "multiply";
    if (needs_s && std::isnan(c.s)) throw ConfigError(c.op + " requires s");
    if (!std::isnan(c.s) && !(c.s > 0)) throw ConfigError("requires s > 0");
    if (c.op == "isometry_gaussian" && !(c.t < 2 * c.s)) throw ConfigError("isometry_gaussian requires t < 2s");
    if ((c.op == "sobolev_norm" || c.op == "sobolev_image" || c.op == "sobolev") && c.n < 0)
        throw ConfigError("requires n >= 0");
    if (c.op == "lp_bound" && !(c.p >= 1)) throw ConfigError("lp_bound requires p >= 1");
    if (!c.x.empty() && geo == "euclidean" && int(c.x.size()) != c.d) throw ConfigError("x must have d coordinates");
}

CheckReport run(const ExperimentConfig& c)
{
    validate(c);
    std::string geo = canonical_geometry(c.geometry);
    if (geo == "euclidean") return run_euclidean(c);
    if (geo == "circle") return run_sphere(c, false);
    if (geo == "sphere3") return run_sphere(c, true);
    return run_h3(c);
}

}  // namespace heatrange
