#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(const std::string& args)
{
    fs::path err = fs::temp_directory_path() / "heatrange_cli_stderr.txt";
    std::string cmd = std::string("\"") + HEATRANGE_CLI_PATH + "\" " + args + " 2>\"" + err.string() + "\"";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream e(err);
    std::stringstream ss;
    ss << e.rdbuf();
    r.err = ss.str();
    return r;
}

std::vector<json> lines(const std::string& s)
{
    std::vector<json> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) v.push_back(json::parse(l));
    return v;
}

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / "heatrange_cli_test";
    fs::create_directories(d);
    return d / name;
}

}  // namespace

TEST_CASE("single operation passes with a full report")
{
    Run r = cli("--geometry euclidean --op isometry_lebesgue --f 'hermite(0)' --t 1");
    CHECK(r.code == 0);
    auto v = lines(r.out);
    REQUIRE(v.size() == 1);
    const json& j = v[0];
    CHECK(j["pass"] == true);
    CHECK(j["id"] == "euclid.isometry_lebesgue");
    for (const char* k : {"lhs", "rhs", "abs_err", "rel_err", "tolerance", "nodes", "drift", "gates", "flags", "values",
                          "note", "kind"})
        CHECK(j.contains(k));
    CHECK(j["lhs"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("parameter constraints give exit code 2")
{
    Run r = cli("--geometry euclidean --op isometry_gaussian --f 'hermite(0)' --s 0.4 --t 1");
    CHECK(r.code == 2);
    CHECK(r.err.find("requires t < 2s") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(cli("--geometry euclidean --op no_such_op").code == 2);
    CHECK(cli("--geometry torus --op isometry").code == 2);
    CHECK(cli("--geometry euclidean --op isometry_lebesgue --t -1").code == 2);
    CHECK(cli("--geometry euclidean --op isometry_lebesgue --d 5").code == 2);
    CHECK(cli("--geometry euclidean --op isometry_lebesgue --f 'nonsense(2)'").code == 2);
    CHECK(cli("--suite nope").code == 2);
    CHECK(cli("--suite sphere_full --inject sideways").code == 2);
}

TEST_CASE("duality probe report carries a_t and b_t")
{
    Run r = cli("--geometry sphere3 --op duality_probe --t 0.1");
    CHECK(r.code == 0);
    auto v = lines(r.out);
    REQUIRE(v.size() == 1);
    CHECK(v[0]["values"].contains("a_t"));
    CHECK(v[0]["values"].contains("b_t"));
    CHECK(v[0]["values"]["a_t"].get<double>() <= v[0]["values"]["b_t"].get<double>());
}

TEST_CASE("failing check gives exit code 1")
{
    // rho_1 is not in the range of e^{2 Delta/2}
    Run r = cli("--geometry euclidean --op fourier_range --f 'gaussian(0,1)' --t 2");
    CHECK(r.code == 1);
    auto v = lines(r.out);
    REQUIRE(v.size() == 1);
    CHECK(v[0]["pass"] == false);
    CHECK(cli("--geometry euclidean --op fourier_range --f 'gaussian(0,2)' --t 1").code == 0);
}

TEST_CASE("config file with flag overrides")
{
    fs::path cfg = scratch("run.cfg");
    {
        std::ofstream o(cfg);
        o << "# isometry on S^1\n"
          << "geometry = circle\n"
          << "op = isometry\n"
          << "f = \"cos(1)\"\n"
          << "t = 0.5\n";
    }
    Run r = cli("--config '" + cfg.string() + "'");
    CHECK(r.code == 0);
    auto v = lines(r.out);
    REQUIRE(v.size() == 1);
    CHECK(v[0]["values"]["t"].get<double>() == 0.5);
    CHECK(v[0]["lhs"].get<double>() == doctest::Approx(3.14159265358979).epsilon(1e-8));
    Run o = cli("--config '" + cfg.string() + "' --t 2");
    auto w = lines(o.out);
    REQUIRE(w.size() == 1);
    CHECK(w[0]["values"]["t"].get<double>() == 2.0);

    fs::path bad = scratch("bad.cfg");
    {
        std::ofstream o2(bad);
        o2 << "geometry = euclidean\nbogus_key = 3\n";
    }
    CHECK(cli("--config '" + bad.string() + "'").code == 2);
    CHECK(cli("--config '" + scratch("missing.cfg").string() + "'").code == 2);
}

TEST_CASE("output files and determinism")
{
    fs::path out = scratch("iso.jsonl");
    std::string args = "--geometry euclidean --op isometry_lebesgue --f 'hermite(0)+0.5*hermite(3)' --t 0.5 --out '" +
                       out.string() + "'";
    Run a = cli(args);
    Run b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    std::ifstream j(out);
    std::stringstream js;
    js << j.rdbuf();
    CHECK(js.str() == a.out);
    std::ifstream c(scratch("iso.csv"));
    std::string header, row;
    std::getline(c, header);
    std::getline(c, row);
    CHECK(header == "id,lhs,rhs,abs_err,rel_err,pass");
    CHECK(row.rfind("euclid.isometry_lebesgue,", 0) == 0);
    CHECK(row.substr(row.size() - 4) == "true");
    // the JSON round trip preserves the doubles exactly
    json parsed = json::parse(a.out);
    CHECK(json::parse(parsed.dump()) == parsed);
}

TEST_CASE("operation listing")
{
    Run r = cli("--geometry hyperbolic3 --list-ops");
    CHECK(r.code == 0);
    CHECK(r.out.find("keystone") != std::string::npos);
    CHECK(r.out.find("multiplication_failure") != std::string::npos);
}

TEST_CASE("suites and injected controls")
{
    Run ok = cli("--suite sphere_full");
    CHECK(ok.code == 0);
    auto rows = lines(ok.out);
    int summaries = 0;
    for (const auto& j : rows)
        if (j["id"].get<std::string>().rfind("criterion.", 0) == 0) ++summaries;
    CHECK(summaries == 5);
    CHECK(ok.err.find("criterion 7 PASS") != std::string::npos);

    Run bad = cli("--suite sphere_full --inject swap_fiber");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("FAIL") != std::string::npos);
    Run again = cli("--suite sphere_full --inject swap_fiber");
    CHECK(again.out == bad.out);
}
