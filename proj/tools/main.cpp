// vbwave: command-line driver for the Boussinesq experiments.
//
// Exit codes: 0 success, 1 run failure (depth loss, Newton failure, ...),
// 2 configuration or usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "vbwave/config.hpp"
#include "vbwave/error.hpp"
#include "vbwave/experiments.hpp"
#include "vbwave/io.hpp"
#include "vbwave/solitary.hpp"

#ifndef VBWAVE_DEFAULT_PROTOCOLS
#define VBWAVE_DEFAULT_PROTOCOLS "protocols"
#endif

namespace fs = std::filesystem;
using namespace vbwave;

namespace {

constexpr int kRunError = 1;
constexpr int kConfigError = 2;

fs::path protocols_dir() {
    if (const char* env = std::getenv("VBWAVE_PROTOCOLS"); env && *env) {
        return env;
    }
    return VBWAVE_DEFAULT_PROTOCOLS;
}

// A config argument is a file path, or a protocol name looked up in the
// protocols directory.
std::string locate_config(const std::string& arg) {
    if (fs::is_regular_file(arg)) {
        return arg;
    }
    for (const fs::path& p : {protocols_dir() / arg, protocols_dir() / (arg + ".cfg")}) {
        if (fs::is_regular_file(p)) {
            return p.string();
        }
    }
    throw ConfigError("no config file or protocol named '" + arg + "' (protocols: " + protocols_dir().string() + ")");
}

void print_metrics(const ExperimentResult& r) {
    std::cout << r.metrics_text();
}

int run_one(const ExperimentConfig& cfg, const std::string& output, bool quiet) {
    const ExperimentResult r = run_experiment(cfg);
    const std::string dir = resolve_output_dir(cfg, output);
    write_outputs(r, cfg, dir);
    if (!quiet) {
        print_metrics(r);
    }
    std::cerr << cfg.name << ": wrote " << r.files.size() + 2 << " files to " << dir << "\n";
    return 0;
}

const char* kConvergenceTemplate = R"([experiment]
name = convergence_%s
kind = convergence
description = manufactured solution over a sine bottom

[model]
kind = %s
epsilon = 1
mu = 0.1

[domain]
a = 0
b = 1
elements = 64

[bathymetry]
profile = sine_bottom
beta = 0.1
wavenumber = pi

[time]
T = 1/4
courant = 1/4

[convergence]
levels = 64,128,256,512
)";

std::string convergence_text(const std::string& model) {
    std::vector<char> buf(1024);
    std::snprintf(buf.data(), buf.size(), kConvergenceTemplate, model.c_str(), model.c_str());
    return buf.data();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(s.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string dir_tag(std::string s) {
    for (char& ch : s) {
        if (ch == '/' || ch == ' ' || ch == '*') ch = '_';
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin solver for variable-bottom Boussinesq systems"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run one experiment from a config file or protocol name");
    std::string run_config;
    std::vector<std::string> run_set;
    std::string run_output;
    bool run_quiet = false;
    bool run_echo = false;
    run->add_option("-c,--config", run_config, "config path or protocol name")->required();
    run->add_option("-s,--set", run_set, "override, section.key=value (repeatable)");
    run->add_option("-o,--output", run_output, "output directory");
    run->add_flag("-q,--quiet", run_quiet, "do not print metrics");
    run->add_flag("--echo", run_echo, "print the validated config and exit");

    // converge
    auto* conv = app.add_subcommand("converge", "manufactured-solution convergence table");
    std::string conv_model = "cbw";
    std::vector<std::string> conv_set;
    std::string conv_output;
    conv->add_option("-m,--model", conv_model, "model kind")->check(CLI::IsMember({"sw", "cb", "cbw", "cbs"}));
    conv->add_option("-s,--set", conv_set, "override, section.key=value (repeatable)");
    conv->add_option("-o,--output", conv_output, "output directory");

    // solitary
    auto* sol = app.add_subcommand("solitary", "compute a CB solitary-wave profile");
    double sol_eps = 1.0, sol_mu = 1.0, sol_cs = 0.0, sol_amp = 0.0;
    int sol_points = 1024;
    std::string sol_output = "solitary_profile.csv";
    sol->add_option("--eps", sol_eps, "epsilon")->capture_default_str();
    sol->add_option("--mu", sol_mu, "mu")->capture_default_str();
    auto* cs_opt = sol->add_option("--cs", sol_cs, "speed c_s > 1");
    sol->add_option("--amplitude", sol_amp, "zeta amplitude (instead of --cs)")->excludes(cs_opt);
    sol->add_option("--points", sol_points, "collocation points")->capture_default_str();
    sol->add_option("-o,--output", sol_output, "profile CSV path")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run several experiments in parallel");
    std::vector<std::string> sweep_configs;
    std::vector<std::string> sweep_set;
    std::string sweep_vary;
    int sweep_jobs = 0;
    bool sweep_quiet = false;
    sweep->add_option("-c,--config", sweep_configs, "configs or protocol names")->required();
    sweep->add_option("-s,--set", sweep_set, "override applied to every run");
    sweep->add_option("--vary", sweep_vary, "section.key=v1,v2,... (one run per value; single config)");
    sweep->add_option("-j,--jobs", sweep_jobs, "worker threads (0: hardware)");
    sweep->add_flag("-q,--quiet", sweep_quiet, "do not print metrics");

    // compare
    auto* cmp = app.add_subcommand("compare", "compare a gauge CSV with a reference CSV (columns t,zeta)");
    std::string cmp_model, cmp_ref;
    double cmp_shift = 0.0;
    cmp->add_option("--model", cmp_model, "model gauge CSV")->required()->check(CLI::ExistingFile);
    cmp->add_option("--reference", cmp_ref, "reference CSV")->required()->check(CLI::ExistingFile);
    cmp->add_option("--max-shift", cmp_shift, "time-shift search range")->capture_default_str();

    // list
    auto* list = app.add_subcommand("list", "list shipped protocols");
    bool list_schema = false;
    list->add_flag("--schema", list_schema, "print the config schema instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*run) {
            const ExperimentConfig cfg = parse_config(locate_config(run_config), run_set);
            if (run_echo) {
                std::cout << echo_config(cfg);
                return 0;
            }
            return run_one(cfg, run_output, run_quiet);
        }
        if (*conv) {
            const ExperimentConfig cfg =
                parse_config_text(convergence_text(conv_model), "converge --model " + conv_model, conv_set);
            const ExperimentResult r = run_experiment(cfg);
            const std::string dir = resolve_output_dir(cfg, conv_output);
            write_outputs(r, cfg, dir);
            std::cout << r.file("convergence.csv")->content;
            for (const auto& [k, v] : r.metrics) {
                if (k.rfind("rate_", 0) == 0) std::cout << k << "=" << format_double(v) << "\n";
            }
            std::cerr << "wrote " << dir << "/convergence.csv\n";
            return 0;
        }
        if (*sol) {
            if (sol_cs == 0.0 && sol_amp == 0.0) {
                throw ConfigError("solitary: give --cs or --amplitude");
            }
            const double cs = sol_cs != 0.0 ? sol_cs : speed_from_amplitude(sol_eps, sol_amp);
            SolitaryOptions opt;
            opt.points = sol_points;
            const SolitaryWave w = solve_profile(sol_eps, sol_mu, cs, opt);
            write_profile_csv(w, sol_output);
            std::cout << "speed=" << format_double(w.speed) << "\n"
                      << "amplitude=" << format_double(w.amplitude) << "\n"
                      << "u_amplitude=" << format_double(w.u_amplitude) << "\n"
                      << "amplitude_from_speed=" << format_double(amplitude_from_speed(sol_eps, w.speed)) << "\n"
                      << "crest_relation_residual="
                      << format_double(crest_relation_residual(sol_eps, w.speed, w.u_amplitude)) << "\n"
                      << "first_integral_residual=" << format_double(w.first_integral_residual) << "\n"
                      << "ode_residual=" << format_double(w.ode_residual) << "\n"
                      << "newton_iterations=" << w.newton_iterations << "\n"
                      << "half_length=" << format_double(w.half_length) << "\n";
            std::cerr << "wrote " << sol_output << "\n";
            return 0;
        }
        if (*sweep) {
            std::vector<ExperimentConfig> cfgs;
            if (!sweep_vary.empty()) {
                if (sweep_configs.size() != 1) {
                    throw ConfigError("sweep --vary takes exactly one config");
                }
                const auto eq = sweep_vary.find('=');
                if (eq == std::string::npos) {
                    throw ConfigError("sweep --vary: expected section.key=v1,v2,...");
                }
                const std::string key = sweep_vary.substr(0, eq);
                const std::string path = locate_config(sweep_configs.front());
                for (const auto& v : split_list(sweep_vary.substr(eq + 1))) {
                    auto ov = sweep_set;
                    ov.push_back(key + "=" + v);
                    ExperimentConfig c = parse_config(path, ov);
                    c.output_dir = (fs::path(c.output_dir) / dir_tag(key + "_" + v)).string();
                    c.name += "[" + key + "=" + v + "]";
                    cfgs.push_back(std::move(c));
                }
            } else {
                for (const auto& c : sweep_configs) {
                    cfgs.push_back(parse_config(locate_config(c), sweep_set));
                }
            }
            const auto outcomes = run_parallel(cfgs, sweep_jobs);
            int failures = 0;
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                if (!outcomes[i].error.empty()) {
                    std::cerr << cfgs[i].name << ": FAILED: " << outcomes[i].error << "\n";
                    ++failures;
                    continue;
                }
                write_outputs(*outcomes[i].result, cfgs[i], resolve_output_dir(cfgs[i]));
                if (!sweep_quiet) {
                    std::cout << "# " << cfgs[i].name << "\n";
                    print_metrics(*outcomes[i].result);
                }
            }
            return failures ? kRunError : 0;
        }
        if (*cmp) {
            const CsvData model = read_csv(cmp_model);
            const ReferenceComparison r =
                compare_reference(model.column("t"), model.column("zeta"), cmp_ref, cmp_shift);
            std::cout << "amplitude_ratio=" << format_double(r.amplitude_ratio) << "\n"
                      << "l2_deviation=" << format_double(r.l2_deviation) << "\n"
                      << "best_shift=" << format_double(r.best_shift) << "\n"
                      << "shifted_l2_deviation=" << format_double(r.shifted_l2_deviation) << "\n"
                      << "overlap_start=" << format_double(r.overlap_start) << "\n"
                      << "overlap_end=" << format_double(r.overlap_end) << "\n";
            return 0;
        }
        if (*list) {
            if (list_schema) {
                std::cout << describe_schema();
                return 0;
            }
            const fs::path dir = protocols_dir();
            if (!fs::is_directory(dir)) {
                throw ConfigError("protocols directory not found: " + dir.string());
            }
            std::map<std::string, std::string> rows;
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (entry.path().extension() != ".cfg") continue;
                const ExperimentConfig c = parse_config(entry.path().string());
                rows[entry.path().stem().string()] = to_string(c.kind) + "  " + c.description;
            }
            for (const auto& [name, desc] : rows) {
                std::cout << name << "  " << desc << "\n";
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRunError;
    }
    return 0;
}
