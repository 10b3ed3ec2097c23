#include "heatrange/acceptance.hpp"
#include "heatrange/config.hpp"
#include "heatrange/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace heatrange;

namespace {

std::string csv_path(const std::string& out)
{
    auto dot = out.rfind('.');
    auto slash = out.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
    return out + ".csv";
}

void emit(const std::vector<CheckReport>& reports, const std::string& out)
{
    for (const auto& r : reports) std::cout << to_json_line(r) << "\n";
    if (out.empty()) return;
    std::ofstream json(out);
    std::ofstream csv(csv_path(out));
    if (!json || !csv) throw ConfigError("cannot write output '" + out + "'");
    csv << csv_header() << "\n";
    for (const auto& r : reports) {
        json << to_json_line(r) << "\n";
        csv << to_csv_row(r) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heat-operator range checks on R^d, spheres and H^3"};
    std::map<std::string, std::string> flags;
    const std::vector<std::pair<std::string, std::string>> keys{
        {"geometry", "euclidean, circle, sphere3 or hyperbolic3"},
        {"op", "operation name"},
        {"f", "test function descriptor, e.g. hermite(0)+0.5*hermite(3)"},
        {"f2", "second factor for multiplication"},
        {"d", "Euclidean dimension"},
        {"t", "heat time"},
        {"s", "second time (Gaussian measure, multiplication)"},
        {"n", "Sobolev order"},
        {"p", "L^p exponent"},
        {"c_n", "Sobolev constant"},
        {"R", "truncation radius"},
        {"x", "evaluation point, comma separated"},
        {"nodes", "quadrature node budget"},
        {"tol", "tolerance"},
        {"out", "JSON-lines output path (a .csv table is written beside it)"},
        {"suite", "euclid_full, sphere_full, h3_full or all"},
        {"inject", "negative control: wrong_variance or swap_fiber"},
    };
    for (const auto& [k, help] : keys) app.add_option("--" + k, flags[k], help);
    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");
    bool list_ops = false;
    app.add_flag("--list-ops", list_ops, "list operations for --geometry and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path);
        for (const auto& [k, help] : keys)
            if (app.count("--" + k) > 0) set_config_value(cfg, k, flags[k]);
        if (list_ops) {
            for (const auto& op : operation_names(cfg.geometry)) std::cout << op << "\n";
            return 0;
        }
        validate(cfg);
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!cfg.suite.empty()) {
            Injection inj;
            inj.wrong_variance = cfg.inject == "wrong_variance";
            inj.swap_fiber = cfg.inject == "swap_fiber";
            std::vector<CheckReport> rows;
            bool all = true;
            for (const auto& c : run_suite(cfg.suite, inj)) {
                for (const auto& r : c.reports) rows.push_back(r);
                rows.push_back(c.summary());
                all = all && c.pass;
                std::cerr << "criterion " << c.number << " " << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  ("
                          << c.detail << ")\n";
            }
            emit(rows, cfg.out);
            return all ? 0 : 1;
        }
        CheckReport r = run(cfg);
        emit({r}, cfg.out);
        return r.pass ? 0 : 1;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
