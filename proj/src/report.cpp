#include "heatrange/report.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace heatrange {

using nlohmann::json;

namespace {

const char* kind_name(CheckKind k)
{
    switch (k) {
    case CheckKind::equality: return "equality";
    case CheckKind::bound: return "bound";
    case CheckKind::probe: return "probe";
    }
    return "?";
}

// JSON has no inf/nan; keep them as strings so reports stay parseable.
json num(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double unnum(const json& j)
{
    if (j.is_number()) return j.get<double>();
    std::string s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return NAN;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

bool CheckReport::gates_ok() const
{
    for (const auto& [name, ok] : gates)
        if (!ok) return false;
    return true;
}

void CheckReport::finish(double tol)
{
    tolerance = tol;
    switch (kind) {
    case CheckKind::equality:
        abs_err = std::abs(lhs - rhs);
        rel_err = rhs != 0.0 ? abs_err / std::abs(rhs) : abs_err;
        pass = std::isfinite(lhs) && rel_err <= tol;
        break;
    case CheckKind::bound:
        abs_err = std::max(0.0, lhs - rhs);
        rel_err = rhs != 0.0 ? abs_err / std::abs(rhs) : abs_err;
        pass = std::isfinite(lhs) && rel_err <= tol;
        break;
    case CheckKind::probe:
        abs_err = std::abs(lhs - rhs);
        rel_err = rhs != 0.0 ? abs_err / std::abs(rhs) : abs_err;
        pass = true;
        break;
    }
    if (!std::isfinite(rel_err)) pass = false;
    pass = pass && gates_ok();
}

std::string to_json_line(const CheckReport& r)
{
    json j;
    j["id"] = r.id;
    j["kind"] = kind_name(r.kind);
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["abs_err"] = num(r.abs_err);
    j["rel_err"] = num(r.rel_err);
    j["tolerance"] = num(r.tolerance);
    j["nodes"] = r.nodes;
    j["drift"] = num(r.drift);
    j["pass"] = r.pass;
    j["gates"] = r.gates;
    j["flags"] = r.flags;
    json v = json::object();
    for (const auto& [k, x] : r.values) v[k] = num(x);
    j["values"] = v;
    j["note"] = r.note;
    return j.dump();
}

CheckReport report_from_json_line(const std::string& line)
{
    json j = json::parse(line);
    CheckReport r;
    r.id = j.at("id").get<std::string>();
    std::string k = j.at("kind").get<std::string>();
    r.kind = k == "bound" ? CheckKind::bound : k == "probe" ? CheckKind::probe : CheckKind::equality;
    r.lhs = unnum(j.at("lhs"));
    r.rhs = unnum(j.at("rhs"));
    r.abs_err = unnum(j.at("abs_err"));
    r.rel_err = unnum(j.at("rel_err"));
    r.tolerance = unnum(j.at("tolerance"));
    r.nodes = j.at("nodes").get<long>();
    r.drift = unnum(j.at("drift"));
    r.pass = j.at("pass").get<bool>();
    r.gates = j.at("gates").get<std::map<std::string, bool>>();
    r.flags = j.at("flags").get<std::map<std::string, bool>>();
    for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it) r.values[it.key()] = unnum(it.value());
    r.note = j.at("note").get<std::string>();
    return r;
}

std::string csv_header() { return "id,lhs,rhs,abs_err,rel_err,pass"; }

std::string to_csv_row(const CheckReport& r)
{
    return r.id + "," + fmt(r.lhs) + "," + fmt(r.rhs) + "," + fmt(r.abs_err) + "," + fmt(r.rel_err) + "," +
           (r.pass ? "true" : "false");
}

}  // namespace heatrange
