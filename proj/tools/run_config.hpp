#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace psing::cli {

enum class Command { exponents, eigen, profile, verify, pde, sweep };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

class UsageError : public std::runtime_error {
public:
    UsageError(std::string flag, const std::string& what)
        : std::runtime_error(what), flag_(std::move(flag)) {}
    const std::string& flag() const { return flag_; }

private:
    std::string flag_;
};

struct RunConfig {
    Command command = Command::exponents;
    int N = 2;
    double p = 2.0;
    std::optional<double> q;
    double tol = 1e-10;
    int grid = 4096;  // θ grid for eigen and profile solves
    int n_r = 256, n_theta = 64;
    std::string mode = "weak";
    double k = 1.0;
    double amp = 1e4;
    double eps = 1e-6;
    double reg_delta = 1e-6;
    int max_iter = 400;
    double pde_tol = 1e-8;
    double r_lo = 0.0, r_hi = 0.0;  // fit window, 0 picks the mode default
    double omega_lo = 0.0, omega_hi = 0.0;  // sweep range, 0 picks the default
    int per_decade = 4;
    int workers = 4;
    std::string out;
    std::string suite;

    // Throws UsageError naming the offending flag.
    void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);

enum ExitCode : int { ok = 0, usage = 1, nonexistence = 2, no_convergence = 3 };

// Writes the JSON summary to out, diagnostics to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace psing::cli
