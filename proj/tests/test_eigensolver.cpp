#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "psing/eigensolver.hpp"

using namespace psing;

TEST_CASE("beta_star matches an independent RK4 shooting") {
    for (auto [N, p] : {std::pair{3, 1.5}, std::pair{4, 2.5}, std::pair{5, 3.5}, std::pair{6, 1.3}}) {
        const auto res = eigensolver::solve_beta_star({N, p}, 1e-11, 2048);
        CHECK(res.beta_star == doctest::Approx(oracle::beta_star(N, p)).epsilon(1e-7));
        CHECK(res.bracket.first <= res.beta_star);
        CHECK(res.beta_star <= res.bracket.second);
    }
}

TEST_CASE("p = 2, N = 3 profile is cos") {
    const auto res = eigensolver::solve_beta_star({3, 2.0}, 1e-12, 2048);
    CHECK(res.beta_star == doctest::Approx(2.0).epsilon(1e-9));
    double err = 0.0;
    for (std::size_t i = 0; i < res.profile.size(); ++i)
        err = std::max(err, std::abs(res.profile.omega[i] - std::cos(res.profile.theta[i])));
    CHECK(err < 1e-7);
    CHECK(res.profile.residual_sup < 1e-6);
}

TEST_CASE("shooting defect changes sign across beta_star") {
    const ProblemParams pp(4, 2.5);
    const double b = eigensolver::solve_beta_star(pp, 1e-10, 1024).beta_star;
    CHECK(eigensolver::shooting_defect(0.9 * b, pp) < 0.0);
    CHECK(eigensolver::shooting_defect(1.1 * b, pp) > 0.0);
}

TEST_CASE("identity gap shrinks under refinement") {
    for (auto [N, p] : {std::pair{3, 1.5}, std::pair{5, 3.0}}) {
        const ProblemParams pp(N, p);
        const double g1 = eigensolver::solve_beta_star(pp, 1e-12, 512).identity_gap;
        const double g2 = eigensolver::solve_beta_star(pp, 1e-12, 4096).identity_gap;
        CHECK(g2 < 1e-5);
        CHECK(g2 <= std::max(g1, 1e-9));
    }
}

TEST_CASE("literal identity does not close for p != 2") {
    const ProblemParams pp(3, 1.5);
    const auto res = eigensolver::solve_beta_star(pp, 1e-12, 2048);
    CHECK(eigensolver::eigen_identity_literal(res.profile, pp).gap > 1e-3);
    CHECK(eigensolver::eigen_identity(res.profile, pp).gap < 1e-6);
}

TEST_CASE("phase and convexity properties") {
    for (auto [N, p] : {std::pair{2, 1.5}, std::pair{3, 2.0}, std::pair{4, 3.0}, std::pair{6, 4.5}}) {
        const auto res = eigensolver::solve_beta_star({N, p}, 1e-12, 2048);
        const auto rep = eigensolver::certify_properties(res.path, res.profile);
        CHECK(rep.all_ok());
        CHECK(rep.phi_theta_end == doctest::Approx(res.beta_star).epsilon(1e-6));
    }
}

TEST_CASE("profile is positive and vanishes at the flat boundary") {
    const auto res = eigensolver::solve_beta_star({4, 2.5}, 1e-11, 1024);
    const auto& w = res.profile.omega;
    CHECK(w.front() == doctest::Approx(1.0));
    CHECK(std::abs(w.back()) < 1e-6);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] > 0.0);
}
