#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "psing/eigensolver.hpp"
#include "psing/exponents.hpp"
#include "psing/subsolution.hpp"

using namespace psing;
using namespace psing::profiles;

namespace {

double midpoint_q(const ProblemParams& base, double beta) {
    return 0.5 * (base.p - 1.0 + exponents::q_star(beta, base));
}

}  // namespace

TEST_CASE("closed power form equals the exact coefficient") {
    for (double p : {1.5, 3.0}) {
        const ProblemParams base(3, p);
        const auto eig = eigensolver::solve_beta_star(base, 1e-11, 512);
        const ProblemParams pp(3, p, midpoint_q(base, eig.beta_star));
        const double gamma = 0.5 * gamma0_limit(eig.beta_star, pp);
        const auto pts = psi_points(eig, pp);
        for (std::size_t i = 10; i + 10 < pts.size(); i += 50) {
            const GValues g = g_eval(GChoice::power, pts[i].psi, 0.0, gamma, eig.beta_star, 0.0);
            const double ex = q1_exact(pts[i], eig.beta_star, gamma, g, pp);
            CHECK(q1_power(pts[i], eig.beta_star, gamma, pp) ==
                  doctest::Approx(ex).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("reduced coefficient agrees with the exact one at p = 2") {
    const ProblemParams base(3, 2.0);
    const auto eig = eigensolver::solve_beta_star(base, 1e-11, 512);
    const ProblemParams pp(3, 2.0, 1.2);
    const auto pts = psi_points(eig, pp);
    for (std::size_t i = 5; i + 5 < pts.size(); i += 40) {
        const GValues g = g_eval(GChoice::linear, pts[i].psi, 0.0, 0.3, 2.0, 0.0);
        CHECK(q1_reduced(pts[i], 2.0, 0.3, g, pp) ==
              doctest::Approx(q1_exact(pts[i], 2.0, 0.3, g, pp)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("gamma limit is the smallest of its three candidates") {
    const ProblemParams base(3, 1.5);
    const auto eig = eigensolver::solve_beta_star(base, 1e-11, 512);
    const ProblemParams pp(3, 1.5, midpoint_q(base, eig.beta_star));
    const double K = k_constant(eig.beta_star, pp);
    const double nu = nu_of(eig.beta_star, exponents::beta_q(pp));
    CHECK(gamma0_limit(eig.beta_star, pp) == doctest::Approx(std::min({0.5 * K, nu, eig.beta_star})));
    CHECK(nu == doctest::Approx(1.0 - (eig.beta_star + 1.0) / (exponents::beta_q(pp) + 1.0)));
}

TEST_CASE("sign of Q1 on the claimed regions") {
    SUBCASE("p < 2, all nodes") {
        const ProblemParams base(3, 1.5);
        const auto eig = eigensolver::solve_beta_star(base, 1e-11, 1024);
        const ProblemParams pp(3, 1.5, midpoint_q(base, eig.beta_star));
        const double gamma = 0.5 * gamma0_limit(eig.beta_star, pp);
        const auto rep = subsolution_Q1({gamma, 0.0, 0.0, GChoice::linear}, eig, pp);
        CHECK(rep.gamma_ok);
        CHECK(rep.region_nodes > 0);
        CHECK(rep.region_nonpositive == rep.region_nodes);
    }
    SUBCASE("p > 2, split at epsilon0") {
        const ProblemParams base(3, 3.0);
        const auto eig = eigensolver::solve_beta_star(base, 1e-11, 1024);
        const ProblemParams pp(3, 3.0, midpoint_q(base, eig.beta_star));
        const double gamma = 0.5 * gamma0_limit(eig.beta_star, pp);
        for (auto g : {GChoice::linear, GChoice::damped, GChoice::power}) {
            const auto rep = subsolution_Q1({gamma, 0.0, 0.0, g}, eig, pp);
            CHECK(rep.epsilon0 > 0.0);
            CHECK(rep.k > 0.0);
            CHECK(rep.region_nodes > 0);
            CHECK(rep.region_nonpositive == rep.region_nodes);
        }
    }
}

TEST_CASE("glued g is continuous at epsilon0") {
    const double beta = 1.0, gamma = 0.2, k = 0.5, e0 = 0.05;
    const auto a = g_eval(GChoice::glued, e0 * (1 - 1e-9), k, gamma, beta, e0);
    const auto b = g_eval(GChoice::glued, e0 * (1 + 1e-9), k, gamma, beta, e0);
    CHECK(a.g == doctest::Approx(b.g).epsilon(1e-6));
    const auto z = g_eval(GChoice::glued, 0.3, k, gamma, beta, 0.0);
    CHECK(std::isfinite(z.g));
}
