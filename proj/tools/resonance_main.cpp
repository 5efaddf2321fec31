#include "resonance/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace resonance;
    CLI::App app{"Resonances of self-adjoint operator matrices via the basic operator equation"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    bool quiet = false;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "solve the basic equation and report the certificate and eigenvalues"},
        {"verify", "solve for l and -l and check every operator identity"},
        {"sweep", "re-solve over a coupling-strength grid and emit eigenvalue trajectories"},
        {"oracle", "closed-form resonances and bound states of the one-level model"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_path, "JSON output path");
        sub->add_option("--csv", csv_path, "CSV output path (sweep)");
        sub->add_flag("--quiet", quiet, "suppress the summary on stdout");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    const Command command = name == "solve"    ? Command::Solve
                            : name == "verify" ? Command::Verify
                            : name == "sweep"  ? Command::Sweep
                                               : Command::Oracle;
    RunConfig config;
    try {
        config = load_run_config(config_path, command);
    } catch (const Error& e) {
        std::cerr << "config-error: " << e.what() << "\n";
        return kConfigError;
    }
    if (!out_path.empty()) config.output.json_path = out_path;
    if (!csv_path.empty()) config.output.csv_path = csv_path;
    config.quiet = quiet;

    const RunResult result = run(config);
    for (const auto& e : result.errors) std::cerr << e << "\n";

    const std::string json = result.json.dump(2) + "\n";
    if (config.output.json_path.empty()) {
        if (command != Command::Sweep || !config.output.csv_path.empty()) std::cout << json;
    } else if (!write_file(config.output.json_path, json)) {
        std::cerr << "cannot write " << config.output.json_path << "\n";
        return kConfigError;
    }
    if (command == Command::Sweep && !result.csv.empty()) {
        if (config.output.csv_path.empty())
            std::cout << result.csv;
        else if (!write_file(config.output.csv_path, result.csv)) {
            std::cerr << "cannot write " << config.output.csv_path << "\n";
            return kConfigError;
        }
    }
    if (!quiet && !config.output.json_path.empty()) {
        if (command == Command::Verify && !result.rows.empty()) std::cout << format_rows(result.rows);
        std::cout << name << ": " << result.json.value("status", "") << " (exit " << result.exit_code << ")\n";
    }
    return result.exit_code;
}
