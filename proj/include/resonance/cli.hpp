#pragma once

#include "resonance/model_io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace resonance {

enum class Command { Solve, Verify, Sweep, Oracle };

std::string to_string(Command c);

enum ExitCode : int { kPass = 0, kIdentityFailure = 1, kInadmissible = 2, kNonConvergence = 3, kConfigError = 4 };

struct Tolerances {
    double quad_tol = 1e-10;
    double solve_tol = 1e-10;
    double id_tol = 1e-6;         // contour-integral identities
    double algebraic_tol = 1e-8;  // pointwise algebraic identities
    int max_iter = 200;
};

struct SweepConfig {
    std::string parameter = "beta";  // "beta": K' -> beta^2 K'; "scale": K' -> s K'
    std::vector<double> grid;
};

struct OutputPaths {
    std::string json_path;
    std::string csv_path;
};

struct RunConfig {
    Command command = Command::Solve;
    SpectralModel model;
    std::optional<ContourConfig> contour;
    Tolerances tolerances;
    // Fixed trapezoid node count for the spectral contour integrals; disables doubling.
    std::optional<int> gamma_points;
    std::optional<double> cluster_tol;
    std::optional<SweepConfig> sweep;
    std::vector<int> oracle_nu{1, -1};
    OutputPaths output;
    bool quiet = false;
};

// ModelError on schema problems. Relative model paths resolve against `base_dir`.
RunConfig parse_run_config(const Json& j, Command command, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path, Command command);

struct IdentityRow {
    std::string name;
    std::string identity;  // the checked relation, as a formula
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunResult {
    int exit_code = kPass;
    Json json;
    std::string csv;                 // sweep only
    std::vector<IdentityRow> rows;   // verify only
    std::vector<std::string> errors;
};

RunResult run_solve(const RunConfig& config);
RunResult run_verify(const RunConfig& config);
RunResult run_sweep(const RunConfig& config);
RunResult run_oracle(const RunConfig& config);
RunResult run(const RunConfig& config);

// Number of sweep workers: RESONANCE_THREADS if set (0 = serial), else hardware concurrency.
unsigned sweep_threads();

std::string format_rows(const std::vector<IdentityRow>& rows);

}  // namespace resonance
