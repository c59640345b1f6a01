// Copyright 2026 The combtrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// combtrap: run comb-driven trapped-ion experiments from a JSON config.
//
//   combtrap validate --config exp.json
//   combtrap run --config exp.json [--out PATH] [--format csv|json] [--threads K] [--exact]
//   combtrap preset fig4a_spectrum [--print] [run flags]
//
// Exit codes: 0 success, 2 invalid configuration, 3 Fock cutoff too small,
// 1 anything else. COMBTRAP_THREADS sets the default worker count.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "combtrap/config.hpp"
#include "combtrap/errors.hpp"
#include "combtrap/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCutoff = 3;

std::string read_text(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw combtrap::SchemaError({"<file>: cannot read '" + path + "'"});
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int default_threads()
{
    const char* env = std::getenv("COMBTRAP_THREADS");
    if (!env || !*env)
        return 1;
    char* end = nullptr;
    const long k = std::strtol(env, &end, 10);
    if (*end != '\0' || k < 1 || k > 1024) {
        std::cerr << "warning: ignoring COMBTRAP_THREADS='" << env << "'\n";
        return 1;
    }
    return static_cast<int>(k);
}

struct RunFlags {
    std::string out;
    std::string format;
    int threads = 0;
    bool exact = false;

    void attach(CLI::App* app)
    {
        app->add_option("--out", out, "output file (manifest goes to <out>.manifest.json)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        app->add_flag("--exact", exact, "use the exact propagator for spectra");
    }

    combtrap::RunOptions options() const
    {
        combtrap::RunOptions o;
        if (!out.empty())
            o.out = out;
        if (!format.empty())
            o.format = format == "json" ? combtrap::OutputFormat::json : combtrap::OutputFormat::csv;
        o.threads = threads > 0 ? threads : default_threads();
        o.force_exact = exact;
        return o;
    }
};

int run_config(const std::string& text, const RunFlags& flags)
{
    const auto config = combtrap::validate_config(text);
    const auto manifest = combtrap::run(config, flags.options());
    std::cout << "wrote " << manifest.output_path << " and " << combtrap::manifest_path(manifest.output_path)
              << " (" << manifest.wall_time_s << " s)\n";
    for (const auto& w : manifest.warnings)
        std::cerr << "warning: " << w << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frequency-comb driven trapped-ion simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "check a configuration file");
    validate->add_option("--config", config_path, "configuration file")->required();

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "run a configuration file");
    run->add_option("--config", config_path, "configuration file")->required();
    run_flags.attach(run);

    std::string preset_name;
    bool print_only = false;
    bool list = false;
    RunFlags preset_flags;
    auto* preset = app.add_subcommand("preset", "run or print a bundled configuration");
    preset->add_option("name", preset_name, "preset name");
    preset->add_flag("--print", print_only, "print the configuration instead of running it");
    preset->add_flag("--list", list, "list preset names");
    preset_flags.attach(preset);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const auto config = combtrap::validate_config(read_text(config_path));
            std::cout << "ok: task " << combtrap::to_string(config.task) << ", config hash "
                      << combtrap::config_hash(config) << "\n";
            return kExitOk;
        }
        if (*run)
            return run_config(read_text(config_path), run_flags);

        if (list || preset_name.empty()) {
            for (const auto& name : combtrap::preset_names())
                std::cout << name << "\n";
            return list ? kExitOk : kExitInvalid;
        }
        const std::string text = combtrap::preset_text(preset_name);
        if (print_only) {
            std::cout << text;
            return kExitOk;
        }
        return run_config(text, preset_flags);
    } catch (const combtrap::SchemaError& e) {
        for (const auto& p : e.problems())
            std::cerr << "error: " << p << "\n";
        return kExitInvalid;
    } catch (const combtrap::CutoffTooSmall& e) {
        std::cerr << "error: " << e.what() << " (leakage " << e.leakage() << ")\n";
        return kExitCutoff;
    } catch (const combtrap::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
