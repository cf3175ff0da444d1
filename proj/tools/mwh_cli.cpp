// mwh: semi-analytic boundary-value solvers with brute-force cross-checks.
//
// Usage:
//   mwh <heat-rod|heat-rod-n|aw-conv|wedge|strip> --config <path> [options]
//   mwh oracle  --config <path> [options]   # brute-force path, same CSV schema
//   mwh selftest                            # full verification suite
//
// Options:
//   --config <path>        key = value problem description (required except selftest)
//   --out <path>           CSV output path (default: <problem>.csv)
//   --override key=value   override a config key (repeatable)
//   --tol <v>              shorthand for --override tol=<v>
//   --truncation <n>       shorthand for --override truncation=<n>
//   --nodes <n>            shorthand for --override nodes=<n>

#include <fstream>
#include <iostream>

#include "mwh/cli_run.hpp"
#include "mwh/selftest.hpp"

namespace {

constexpr const char* kUsage =
    "usage: mwh <heat-rod|heat-rod-n|aw-conv|wedge|strip|oracle|selftest>"
    " [--config <path>] [--out <path>] [--override key=value]..."
    " [--tol <v>] [--truncation <n>] [--nodes <n>]\n";

int run_selftest_cmd() {
    int failures = 0;
    for (const auto& r : mwh::run_selftest()) {
        std::printf("%s %-20s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace mwh::cli;
    try {
        if (argc < 2) throw usage_error(std::string("missing subcommand\n") + kUsage);
        std::string sub = argv[1];
        if (sub == "selftest") return run_selftest_cmd();
        const std::vector<std::string> subs = {"heat-rod", "heat-rod-n", "aw-conv",
                                               "wedge", "strip", "oracle"};
        if (std::find(subs.begin(), subs.end(), sub) == subs.end())
            throw usage_error("unknown subcommand '" + sub + "'\n" + kUsage);

        std::string config_path, out_path;
        std::vector<std::pair<std::string, std::string>> overrides;
        for (int i = 2; i < argc; ++i) {
            std::string arg = argv[i];
            auto next = [&]() -> std::string {
                if (i + 1 >= argc) throw usage_error("flag " + arg + " needs a value");
                return argv[++i];
            };
            if (arg == "--config") {
                config_path = next();
            } else if (arg == "--out") {
                out_path = next();
            } else if (arg == "--override") {
                std::string kvs = next();
                size_t eq = kvs.find('=');
                if (eq == std::string::npos)
                    throw usage_error("--override expects key=value, got '" + kvs + "'");
                overrides.emplace_back(trim(kvs.substr(0, eq)), trim(kvs.substr(eq + 1)));
            } else if (arg == "--tol") {
                overrides.emplace_back("tol", next());
            } else if (arg == "--truncation") {
                overrides.emplace_back("truncation", next());
            } else if (arg == "--nodes") {
                overrides.emplace_back("nodes", next());
            } else {
                throw usage_error("unknown flag '" + arg + "'\n" + kUsage);
            }
        }
        if (config_path.empty()) throw usage_error("--config is required for " + sub);

        std::ifstream in(config_path);
        if (!in) throw usage_error("cannot open config file '" + config_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        auto kv = parse_kv(text);
        for (const auto& [k, v] : overrides) kv[k] = v;
        RunConfig cfg = finalize(kv);

        bool oracle = (sub == "oracle");
        if (!oracle && cfg.subcommand != sub)
            throw usage_error("subcommand '" + sub + "' does not match problem '" +
                              cfg.subcommand + "'");

        RunResult res = run(cfg, oracle);
        if (out_path.empty()) out_path = cfg.subcommand + ".csv";
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw solver_error("cannot write output file '" + out_path + "'");
        out << res.csv;
        res.diagnostics["csv_path"] = out_path;
        std::cout << res.diagnostics.dump(2) << "\n";
        return 0;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.category << ": " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 5;
    }
}
