#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ctqw/config.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/runner.hpp"

namespace {

void fail(const char* kind, const std::string& what, int code) {
    std::string msg;
    msg.reserve(what.size());
    for (char c : what) {
        if (c == '\n' || c == '\r') {
            msg += ' ';
            continue;
        }
        if (c == '"' || c == '\\') msg += '\\';
        msg += c;
    }
    std::fprintf(stderr, "error kind=%s message=\"%s\"\n", kind, msg.c_str());
    std::exit(code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time quantum walk percolation experiments on square and quasicrystal lattices"};

    std::string config_path;
    // raw string values; parse_config owns validation so file and flag input
    // go through the identical code path
    std::map<std::string, std::string> flags;
    auto capture = [&flags](const std::string& key) {
        return [&flags, key](const std::string& v) { flags[key] = v; };
    };

    app.add_option_function<std::string>("--family", capture("family"),
                                         "square | ammann-beenker | penrose");
    app.add_option_function<std::string>("--size", capture("size"), "square patch side length");
    app.add_option_function<std::string>("--iterations", capture("iterations"),
                                         "substitution depth (quasiperiodic families)");
    app.add_option_function<std::string>("--origin", capture("origin"),
                                         "start vertex: center, a vertex id, or a class label");
    app.add_option_function<std::string>("--zone", capture("zone"), "hop-zone radius");
    app.add_option_function<std::string>("--gamma", capture("gamma"), "hopping rate");
    app.add_option_function<std::string>("--threshold", capture("threshold"),
                                         "escape-mass percolation threshold");
    app.add_option_function<std::string>("--t-stop", capture("t-stop"), "time grid end");
    app.add_option_function<std::string>("--t-step", capture("t-step"), "time grid spacing");
    app.add_option_function<std::string>("--fractions", capture("fractions"),
                                         "comma-separated edge disconnection fractions");
    app.add_option_function<std::string>("--trials", capture("trials"), "disorder realizations per point");
    app.add_option_function<std::string>("--seed", capture("seed"), "base RNG seed");
    app.add_option_function<std::string>("--mode", capture("mode"),
                                         "dump-distribution | timeseries | sweep | patch-export");
    app.add_option_function<std::string>("--out", capture("out"), "output path prefix");
    app.add_option("--config", config_path, "key = value config file; flags override it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("config", e.what(), 2);
    }

    try {
        std::map<std::string, std::string> file_entries;
        if (!config_path.empty()) file_entries = ctqw::cli::read_config_file(config_path);
        const ctqw::cli::ExperimentConfig cfg = ctqw::cli::parse_config(file_entries, flags);
        const ctqw::cli::RunResult result = ctqw::cli::run(cfg);
        for (const auto& path : result.artifacts) std::printf("wrote %s\n", path.c_str());
        return 0;
    } catch (const ctqw::cli::config_error& e) {
        fail("config", e.what(), 2);
    } catch (const ctqw::invalid_parameter_error& e) {
        fail("config", e.what(), 2);
    } catch (const ctqw::resource_limit_error& e) {
        fail("resource-limit", e.what(), 3);
    } catch (const ctqw::accuracy_error& e) {
        fail("accuracy", e.what(), 4);
    } catch (const std::exception& e) {
        fail("internal", e.what(), 1);
    }
    return 1;
}
