#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "psing/eigensolver.hpp"
#include "psing/exponents.hpp"
#include "psing/pdesolver.hpp"

using namespace psing;
using namespace psing::pde;

namespace {

const eigensolver::EigenResult& eig_3_2() {
    static const auto r = eigensolver::solve_beta_star({3, 2.0}, 1e-12, 1024);
    return r;
}

// p = 2, N = 3: u = a(r^{-2} - r)cosθ with a(ε^{-2} - ε) = kε^{-2}.
double harmonic_error(int nr, int nt, double eps) {
    const auto g = PolarGrid::make(3, eps, nr, nt);
    SolveOptions opt;
    opt.absorption = false;
    const auto f = solve_steady(g, weak_data(eig_3_2().profile, 1.0), {3, 2.0, 1.2}, opt);
    REQUIRE(f.stats.converged);
    const double a = std::pow(eps, -2.0) / (std::pow(eps, -2.0) - eps);
    double err = 0.0;
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
            const double r = g.r[i];
            const double ex = a * (std::pow(r, -2.0) - r) * std::cos(g.theta[j]);
            err = std::max(err, std::abs(f.at(i, j) - ex) / (a * std::pow(r, -2.0)));
        }
    return err;
}

}  // namespace

TEST_CASE("grid layout") {
    const auto g = PolarGrid::make(2, 1e-3, 64, 16);
    CHECK(g.r.front() == doctest::Approx(1e-3));
    CHECK(g.r.back() == 1.0);
    CHECK(g.theta.back() == doctest::Approx(std::numbers::pi / 2));
    for (int i = 1; i < g.n_r(); ++i)
        CHECK(std::log(g.r[i] / g.r[i - 1]) == doctest::Approx(g.hs).epsilon(1e-10));
    CHECK_THROWS_AS(PolarGrid::make(2, 1e-3, 15, 16), DomainError);
    CHECK_THROWS_AS(PolarGrid::make(2, 0.0, 16, 16), DomainError);
}

TEST_CASE("harmonic oracle at p = 2") {
    const double e1 = harmonic_error(64, 32, 1e-2);
    const double e2 = harmonic_error(128, 64, 1e-2);
    CHECK(e1 < 1e-2);
    CHECK(e2 < 0.5 * e1);
}

TEST_CASE("boundary conditions, sign and determinism") {
    const auto g = PolarGrid::make(3, 1e-2, 48, 16);
    const ProblemParams pp(3, 2.0, 1.2);
    const auto a = solve_steady(g, weak_data(eig_3_2().profile, 1.0), pp);
    const auto b = solve_steady(g, weak_data(eig_3_2().profile, 1.0), pp);
    CHECK(a.u == b.u);
    CHECK(a.stats.converged);
    for (int j = 0; j < g.n_theta(); ++j) CHECK(a.at(g.n_r() - 1, j) == 0.0);
    for (int i = 0; i < g.n_r(); ++i) CHECK(a.at(i, g.n_theta() - 1) == 0.0);
    double top = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) top = std::max(top, a.at(0, j));
    for (double v : a.u) {
        CHECK(v >= 0.0);
        CHECK(v <= top * (1.0 + 1e-12));
    }
}

TEST_CASE("weak solutions increase with k") {
    const auto g = PolarGrid::make(3, 1e-2, 48, 16);
    const ProblemParams pp(3, 2.0, 1.2);
    const auto lo = solve_steady(g, weak_data(eig_3_2().profile, 0.5), pp);
    const auto hi = solve_steady(g, weak_data(eig_3_2().profile, 2.0), pp);
    for (std::size_t n = 0; n < lo.u.size(); ++n) CHECK(lo.u[n] <= hi.u[n] * (1.0 + 1e-9) + 1e-300);
}

TEST_CASE("absorption lowers the solution") {
    const auto g = PolarGrid::make(3, 1e-2, 48, 16);
    const ProblemParams pp(3, 2.0, 1.2);
    SolveOptions off;
    off.absorption = false;
    const auto with = solve_steady(g, weak_data(eig_3_2().profile, 1.0), pp);
    const auto without = solve_steady(g, weak_data(eig_3_2().profile, 1.0), pp, off);
    for (std::size_t n = 0; n < with.u.size(); ++n) CHECK(with.u[n] <= without.u[n] * (1.0 + 1e-9) + 1e-300);
}

TEST_CASE("fit rejects degenerate input") {
    const auto g = PolarGrid::make(2, 1e-3, 64, 16);
    PolarField f;
    f.grid = g;
    f.u.assign(g.size(), 0.0);
    CHECK_THROWS_AS(fit_exponent(f, {}), FitError);
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) f.u[g.index(i, j)] = std::pow(g.r[i], -1.5) * std::cos(g.theta[j]);
    CHECK_THROWS_AS(fit_exponent(f, {1e-3, 0.1}), FitError);     // starts at ε, below 3ε
    CHECK_THROWS_AS(fit_exponent(f, {3.1e-3, 3.5e-3}), FitError);  // too few shells
    const auto fit = fit_exponent(f, {});
    CHECK(fit.beta_hat == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("gradient constant of the exact separable solution") {
    const ProblemParams base(2, 1.5);
    const auto eig = eigensolver::solve_beta_star(base, 1e-12, 2048);
    const double beta = eig.beta_star;
    const ProblemParams pp(2, 1.5, 0.5 * (0.5 + exponents::q_star(beta, base)));
    const double inv_m = 1.0 / (*pp.q + 1.0 - pp.p);
    const auto g = PolarGrid::make(2, 1e-3, 256, 128);
    PolarField f;
    f.grid = g;
    f.u.resize(g.size());
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
            f.u[g.index(i, j)] = std::pow(g.r[i], -beta) * eig.profile.eval(g.theta[j]);
    const double r_lo = 1e-2, r_hi = 0.5;
    const auto rep = gradient_estimate_check(f, pp, r_lo, r_hi);
    // r-power of |∇Ψ|·d^{1/m} decides which window end carries the sup
    const double e = -beta - 1.0 + inv_m;
    double rmax = 0.0;
    for (int i = 0; i < g.n_r(); ++i)
        if (g.r[i] >= r_lo && g.r[i] <= r_hi && (rmax == 0.0 || (e > 0 ? g.r[i] > rmax : g.r[i] < rmax)))
            rmax = g.r[i];
    double ref = 0.0;
    const auto& pr = eig.profile;
    for (std::size_t j = 0; j + 1 < pr.size(); ++j) {
        const double grad = std::hypot(beta * pr.omega[j], pr.omega_theta[j]);
        ref = std::max(ref, grad * std::pow(std::cos(pr.theta[j]), inv_m));
    }
    ref *= std::pow(rmax, e);
    CHECK(rep.finite);
    CHECK(rep.sup_constant == doctest::Approx(ref).epsilon(0.05));
}

TEST_CASE("Harnack guard on zero interior nodes") {
    const auto g = PolarGrid::make(2, 1e-3, 64, 16);
    PolarField f;
    f.grid = g;
    f.u.resize(g.size());
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j) f.u[g.index(i, j)] = std::pow(g.r[i], -1.2) * std::cos(g.theta[j]);
    const auto clean = harnack_spot_check(f);
    CHECK_FALSE(clean.guard_tripped);
    CHECK(clean.pairs > 0);
    CHECK(std::isfinite(clean.ratio));
    f.u[g.index(30, 5)] = 0.0;
    const auto hit = harnack_spot_check(f);
    CHECK(hit.guard_tripped);
    CHECK(hit.zero_nodes == 1);
    CHECK(std::isfinite(hit.ratio));
}

TEST_CASE("scaling check") {
    const ProblemParams pp(2, 1.5, 0.65);
    const auto g = PolarGrid::make(2, 1e-2, 64, 16);
    CHECK(scaling_invariance_check(pp, 1.0, g).residual == 0.0);
    const auto half = scaling_invariance_check(pp, 0.5, g);
    CHECK(half.nodes > 0);
    CHECK(half.residual < 1e-2);
    CHECK_THROWS_AS(scaling_invariance_check(pp, 1.5, g), DomainError);
}

TEST_CASE("field CSV layout") {
    const auto g = PolarGrid::make(2, 1e-2, 16, 16);
    PolarField f;
    f.grid = g;
    f.u.assign(g.size(), 0.25);
    std::ostringstream os;
    write_field_csv(os, f);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "r,theta,u");
    std::getline(is, line);
    CHECK(line.rfind("0.01", 0) == 0);
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == static_cast<int>(g.size()));
}

TEST_CASE("boundary mode strings") {
    for (auto m : {BoundaryMode::weak, BoundaryMode::strong, BoundaryMode::flat})
        CHECK(boundary_mode_from_string(to_string(m)) == m);
    CHECK_THROWS(boundary_mode_from_string("neumann"));
}
