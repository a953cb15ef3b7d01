#pragma once

#include <string>
#include <vector>

#include "psing/eigensolver.hpp"
#include "psing/params.hpp"

namespace psing::profiles {

enum class GChoice { linear, damped, glued, power };

std::string to_string(GChoice g);

struct GValues {
    double g = 0.0, g1 = 0.0, g2 = 0.0;  // g, g', g'' at ψ
};

struct SubsolutionSpec {
    double gamma = 0.0;
    double k = 0.0;         // <= 0: use k₀
    double epsilon0 = 0.0;  // <= 0: use the computed threshold
    GChoice g_choice = GChoice::linear;
};

// Pointwise data of the eigenprofile at one node.
struct PsiPoint {
    double theta = 0.0, psi = 0.0, psi_t = 0.0, psi_tt = 0.0;
};

GValues g_eval(GChoice choice, double psi, double k, double gamma, double beta, double eps0);

// d/da of the operator applied to V = ψ - a·g(ψ) with a = e^{γt}, divided by
// (β²ψ²+ψ_θ²)^{(p-2)/2}·g. This is the exact first-order coefficient.
double q1_exact(const PsiPoint& x, double beta, double gamma, const GValues& g, const ProblemParams& pp);

// A reduced general expression for Q₁. It agrees with q1_exact for power-law g
// and for p = 2 only.
double q1_reduced(const PsiPoint& x, double beta, double gamma, const GValues& g, const ProblemParams& pp);

// Λ + β + (p-2)(β+2).
double k_constant(double beta, const ProblemParams& pp);
// 1 + (p-2)β²ψ²/(β²ψ²+ψ_θ²).
double x_factor(const PsiPoint& x, double beta, const ProblemParams& pp);

// Xγ(γ - K), the small-ψ form for g = ψ without its O(ψ²) remainder.
double q1_small_psi(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp);
// Xγ(γ - K'), K' = Λ+β+(p-2)((β+2)ψ_θ² - Λβ²ψ²)/((p-1)β²ψ²+ψ_θ²); upper bound used for 1 < p < 2.
double q1_bound_p_lt_2(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp);
// g = cψ^{1-γ/β}: (1-p)γ(β-γ)(1 + ψ_θ²/(β²ψ²)).
double q1_power(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp);
// Same family as q1_reduced, with ψ^{-1-γ/β} in place of ψ^{-2}.
double q1_power_reduced(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp);
// Small-ψ form for g = ψe^{-kψ}: q1_small_psi plus the k-correction terms.
double q1_damped(const PsiPoint& x, double beta, double gamma, double k, const ProblemParams& pp);

// ν = 1 - (β_*+1)/(β_q+1).
double nu_of(double beta_star, double beta_q);
// min{K/2, ν, β_*}; admissible γ lie strictly below it.
double gamma0_limit(double beta_star, const ProblemParams& pp);

std::vector<PsiPoint> psi_points(const eigensolver::EigenResult& eig, const ProblemParams& pp);

// Largest ψ level such that γ - q1_exact/(Xγ) for g = ψ stays above K/2 on every
// node with ψ at or below it.
double choose_epsilon0(const std::vector<PsiPoint>& pts, double beta, double gamma,
                       const ProblemParams& pp);

// Largest k in {1, 1/2, 1/4, ...} satisfying
// k(1-p)βΛψ + (p-1)(2k/ψ - k²)ψ_θ² >= ½(2-p)₊β(k²-2k)ψ on every node with ψ <= ε₀.
double choose_k0(const std::vector<PsiPoint>& pts, double beta, double eps0, const ProblemParams& pp);

struct Q1Node {
    double theta = 0.0, psi = 0.0;
    double closed = 0.0;   // closed form used for the sign test
    double exact = 0.0;    // q1_exact with the same g
    double reduced = 0.0;  // q1_reduced with the same g
    bool in_region = false;
};

struct Q1Report {
    std::string closed_form;
    double gamma = 0.0, gamma0_limit = 0.0, epsilon0 = 0.0, k = 0.0;
    bool gamma_ok = false;
    int region_nodes = 0;
    int region_nonpositive = 0;
    int region_exact_nonpositive = 0;
    double fraction_nonpositive = 0.0;
    double max_closed_in_region = 0.0;
    double max_exact_in_region = 0.0;
    std::vector<int> positive_nodes;
    std::vector<Q1Node> nodes;
};

// pp must carry q (ν depends on β_q).
Q1Report subsolution_Q1(const SubsolutionSpec& spec, const eigensolver::EigenResult& eig,
                        const ProblemParams& pp, double tol = 1e-10);

}  // namespace psing::profiles
