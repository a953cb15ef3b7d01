#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "run_config.hpp"

using psing::cli::RunConfig;

namespace {

std::pair<int, int> parse_grid2(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t a = 0, b = 0;
        const int nr = std::stoi(s.substr(0, x), &a);
        const int nt = std::stoi(s.substr(x + 1), &b);
        if (a != x || b != s.size() - x - 1) throw std::invalid_argument(s);
        return {nr, nt};
    } catch (const std::exception&) {
        throw psing::cli::UsageError("--grid2", "--grid2 expects <int>x<int>, got '" + s + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary singularities of -Δ_p u + |∇u|^q = 0: exponents, profiles and PDE experiments"};
    app.set_version_flag("--version", "psing 0.1.0");

    std::string command, config_path, grid2, mode, suite, out;
    int N = 0, grid = 0, max_iter = 0, workers = 0, per_decade = 0;
    double p = 0, q = 0, tol = 0, k = 0, amp = 0, eps = 0, reg_delta = 0, pde_tol = 0;
    std::vector<double> window, omega_range;

    app.add_option("command", command, "exponents | eigen | profile | verify | pde | sweep")->required();
    app.add_option("--config", config_path, "JSON config file; flags override it");
    app.add_option("--N", N, "dimension");
    app.add_option("--p", p, "p of the p-Laplacian");
    app.add_option("--q", q, "absorption exponent");
    app.add_option("--tol", tol, "eigen/profile solver tolerance");
    app.add_option("--grid", grid, "θ grid for eigen and profile solves");
    app.add_option("--grid2", grid2, "PDE grid n_r x n_θ, e.g. 256x64");
    app.add_option("--mode", mode, "PDE inner data: weak | strong | flat");
    app.add_option("--k", k, "weak-mode amplitude");
    app.add_option("--amp", amp, "strong/flat amplitude A");
    app.add_option("--eps", eps, "inner radius of the half-annulus");
    app.add_option("--reg-delta", reg_delta, "relative regularization of |∇u|");
    app.add_option("--max-iter", max_iter, "PDE iteration cap");
    app.add_option("--pde-tol", pde_tol, "PDE tolerance on the relative sup-update");
    app.add_option("--window", window, "fit window r_lo r_hi")->expected(2);
    app.add_option("--omega-range", omega_range, "sweep range ω₀_lo ω₀_hi")->expected(2);
    app.add_option("--per-decade", per_decade, "sweep points per decade");
    app.add_option("--workers", workers, "sweep worker threads");
    app.add_option("--out", out, "CSV artifact path");
    app.add_option("--suite", suite, "bounds | identity | barriers | subsolution | dichotomy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return psing::cli::ExitCode::usage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = psing::cli::load_config(config_path);
        cfg.command = psing::cli::command_from_string(command);
        auto given = [&](const char* flag) { return app.count(flag) > 0; };
        if (given("--N")) cfg.N = N;
        if (given("--p")) cfg.p = p;
        if (given("--q")) cfg.q = q;
        if (given("--tol")) cfg.tol = tol;
        if (given("--grid")) cfg.grid = grid;
        if (given("--grid2")) std::tie(cfg.n_r, cfg.n_theta) = parse_grid2(grid2);
        if (given("--mode")) cfg.mode = mode;
        if (given("--k")) cfg.k = k;
        if (given("--amp")) cfg.amp = amp;
        if (given("--eps")) cfg.eps = eps;
        if (given("--reg-delta")) cfg.reg_delta = reg_delta;
        if (given("--max-iter")) cfg.max_iter = max_iter;
        if (given("--pde-tol")) cfg.pde_tol = pde_tol;
        if (given("--window")) std::tie(cfg.r_lo, cfg.r_hi) = std::pair{window[0], window[1]};
        if (given("--omega-range")) std::tie(cfg.omega_lo, cfg.omega_hi) = std::pair{omega_range[0], omega_range[1]};
        if (given("--per-decade")) cfg.per_decade = per_decade;
        if (given("--workers")) cfg.workers = workers;
        if (given("--out")) cfg.out = out;
        if (given("--suite")) cfg.suite = suite;
    } catch (const psing::cli::UsageError& e) {
        std::cerr << "usage error (" << e.flag() << "): " << e.what() << '\n';
        return psing::cli::ExitCode::usage;
    }
    return psing::cli::run(cfg, std::cout, std::cerr);
}
