#include "run_config.hpp"

#include <filesystem>
#include <fstream>

namespace psing::cli {

namespace {

constexpr const char* kCommands[] = {"exponents", "eigen", "profile", "verify", "pde", "sweep"};

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& v) {
    if (j.contains(key) && !j.at(key).is_null()) v = j.at(key).get<T>();
}

void positive(double v, const char* flag) {
    if (!(v > 0.0)) throw UsageError(flag, std::string(flag) + " must be positive");
}

}  // namespace

std::string to_string(Command c) { return kCommands[static_cast<int>(c)]; }

Command command_from_string(const std::string& s) {
    for (int i = 0; i < 6; ++i)
        if (s == kCommands[i]) return static_cast<Command>(i);
    throw UsageError("command", "unknown command '" + s + "'");
}

void RunConfig::validate() const {
    if (N < 2) throw UsageError("--N", "--N must be at least 2");
    if (!(p > 1.0) || p > N) throw UsageError("--p", "--p must lie in (1, N]");
    if (q && (!(*q > p - 1.0) || !(*q < p))) throw UsageError("--q", "--q must lie in (p-1, p)");
    positive(tol, "--tol");
    if (grid < 64) throw UsageError("--grid", "--grid must be at least 64");
    if (n_r < 16 || n_theta < 16) throw UsageError("--grid2", "--grid2 needs at least 16x16");
    if (mode != "weak" && mode != "strong" && mode != "flat")
        throw UsageError("--mode", "--mode must be weak, strong or flat");
    positive(k, "--k");
    positive(amp, "--amp");
    if (!(eps > 0.0) || !(eps < 1.0)) throw UsageError("--eps", "--eps must lie in (0, 1)");
    positive(reg_delta, "--reg-delta");
    if (max_iter < 1) throw UsageError("--max-iter", "--max-iter must be positive");
    positive(pde_tol, "--pde-tol");
    if (r_lo < 0.0 || r_hi < 0.0) throw UsageError("--window", "fit window must be nonnegative");
    if (omega_lo < 0.0 || omega_hi < 0.0) throw UsageError("--omega-range", "sweep range must be nonnegative");
    if (per_decade < 1) throw UsageError("--per-decade", "--per-decade must be positive");
    if (workers < 1) throw UsageError("--workers", "--workers must be positive");
    if (command == Command::verify && suite != "bounds" && suite != "identity" && suite != "barriers" &&
        suite != "subsolution" && suite != "dichotomy")
        throw UsageError("--suite", "--suite must be bounds, identity, barriers, subsolution or dichotomy");
    if (!out.empty()) {
        const std::filesystem::path dir = std::filesystem::absolute(out).parent_path();
        std::error_code ec;
        if (!std::filesystem::is_directory(dir, ec)) throw UsageError("--out", "output directory does not exist");
    }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"command", to_string(c.command)},
                       {"N", c.N},
                       {"p", c.p},
                       {"q", c.q ? nlohmann::json(*c.q) : nlohmann::json(nullptr)},
                       {"tol", c.tol},
                       {"grid", c.grid},
                       {"grid2", {c.n_r, c.n_theta}},
                       {"mode", c.mode},
                       {"k", c.k},
                       {"amp", c.amp},
                       {"eps", c.eps},
                       {"reg_delta", c.reg_delta},
                       {"max_iter", c.max_iter},
                       {"pde_tol", c.pde_tol},
                       {"window", {c.r_lo, c.r_hi}},
                       {"omega_range", {c.omega_lo, c.omega_hi}},
                       {"per_decade", c.per_decade},
                       {"workers", c.workers},
                       {"out", c.out},
                       {"suite", c.suite}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
    if (j.contains("command")) c.command = command_from_string(j.at("command").get<std::string>());
    read_opt(j, "N", c.N);
    read_opt(j, "p", c.p);
    if (j.contains("q")) {
        if (j.at("q").is_null()) c.q.reset();
        else c.q = j.at("q").get<double>();
    }
    read_opt(j, "tol", c.tol);
    read_opt(j, "grid", c.grid);
    if (j.contains("grid2")) {
        c.n_r = j.at("grid2").at(0).get<int>();
        c.n_theta = j.at("grid2").at(1).get<int>();
    }
    read_opt(j, "mode", c.mode);
    read_opt(j, "k", c.k);
    read_opt(j, "amp", c.amp);
    read_opt(j, "eps", c.eps);
    read_opt(j, "reg_delta", c.reg_delta);
    read_opt(j, "max_iter", c.max_iter);
    read_opt(j, "pde_tol", c.pde_tol);
    if (j.contains("window")) {
        c.r_lo = j.at("window").at(0).get<double>();
        c.r_hi = j.at("window").at(1).get<double>();
    }
    if (j.contains("omega_range")) {
        c.omega_lo = j.at("omega_range").at(0).get<double>();
        c.omega_hi = j.at("omega_range").at(1).get<double>();
    }
    read_opt(j, "per_decade", c.per_decade);
    read_opt(j, "workers", c.workers);
    read_opt(j, "out", c.out);
    read_opt(j, "suite", c.suite);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config", "cannot open config file " + path);
    try {
        return nlohmann::json::parse(in).get<RunConfig>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("--config", std::string("bad config file: ") + e.what());
    }
}

}  // namespace psing::cli
