#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tase/errors.hpp"
#include "tase/harness.hpp"

namespace {

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

// flag -> config key; values are applied in order after --config
const std::vector<Flag> kFlags = {
    {"--problem", "problem", "ex41 | ex52 | fk | burgers | fhn | forced_scalar"},
    {"--method", "method", "trk2 | trk3 | trk4 | trkP:J | ros2 | linimpl-euler | row:<file> | rk4"},
    {"--methods", "methods", "comma list of methods for convergence/workprec"},
    {"--p", "p", "order list, e.g. 2,3,4"},
    {"--k", "k", "step size or comma list"},
    {"--te", "te", "final time"},
    {"--kappa", "kappa", "scaling of the splitting matrix A"},
    {"--q", "q", "FOV exponents, fractions allowed (1/3,1/2)"},
    {"--y", "y", "diagram y values, negative; -inf for the limit"},
    {"--ntheta", "ntheta", "boundary samples"},
    {"--out", "out", "output file, or directory for diagram/fov; '-' is stdout"},
    {"--seed", "seed", "seed for randomized runs"},
    {"--horizon", "horizon", "kstar horizon in steps"},
    {"--stride-space", "stride_space", "keep every n-th component"},
    {"--stride-time", "stride_time", "keep every n-th step"},
    {"--subblock", "subblock", "analyse only these indices (comma list)"},
    {"--upsilon-lb", "upsilon_lb", "lower nonlinear bound (fk)"},
    {"--upsilon-ub", "upsilon_ub", "upper nonlinear bound (fk)"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TASE-RK integrators and linear stability analysis"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> params;
    bool no_timing = false;
    std::vector<std::string> values(kFlags.size());
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--param", params, "problem parameter key=value (repeatable)");
    app.add_flag("--no-timing", no_timing, "write zeros in the wall_time column");
    for (std::size_t i = 0; i < kFlags.size(); ++i) app.add_option(kFlags[i].name, values[i], kFlags[i].help);

    using Cmd = int (*)(const tase::ExperimentConfig&, std::ostream&);
    const std::vector<std::pair<std::string, Cmd>> commands = {
        {"integrate", tase::cmd_integrate},     {"certify", tase::cmd_certify},
        {"kstar", tase::cmd_kstar},             {"diagram", tase::cmd_diagram},
        {"fov", tase::cmd_fov},                 {"convergence", tase::cmd_convergence},
        {"workprec", tase::cmd_work_precision},
    };
    const std::vector<std::string> descriptions = {
        "trajectory CSV",        "stability verdicts as JSON",   "empirical stability threshold",
        "stability diagram boundaries and hat_t", "field-of-values boundaries", "error table over a k-list",
        "work-precision table",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i)
        subs.push_back(app.add_subcommand(commands[i].first, descriptions[i]));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        tase::ExperimentConfig cfg;
        if (!config_path.empty()) tase::load_config_file(cfg, config_path);
        for (std::size_t i = 0; i < kFlags.size(); ++i)
            if (app.count(kFlags[i].name) > 0) tase::set_option(cfg, kFlags[i].key, values[i]);
        for (const auto& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw tase::ConfigError("--param expects key=value, got " + kv);
            tase::set_option(cfg, "param." + kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (no_timing) cfg.timing = false;
        for (std::size_t i = 0; i < commands.size(); ++i)
            if (subs[i]->parsed()) return commands[i].second(cfg, std::cout);
    } catch (const tase::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const tase::NonFiniteState& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return 2;
    } catch (const tase::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
