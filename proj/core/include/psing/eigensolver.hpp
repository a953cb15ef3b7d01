#pragma once

#include <string>
#include <utility>
#include <vector>

#include "psing/params.hpp"
#include "psing/profile.hpp"

namespace psing::eigensolver {

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double theta)
        : std::runtime_error(what), theta_exit(theta) {}
    double theta_exit;
};

class NoSignChangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr double kTheta0 = 1e-6;
constexpr int kMinGrid = 64;

// Solution of the phase equation for one trial β. theta[0] = θ₀ and
// theta[i] = i·(π/2)/M for i >= 1.
struct PhasePath {
    double beta = 0.0;
    ProblemParams params;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> log_r;
    double defect = 0.0;
};

struct EigenResult {
    double beta_star = 0.0;
    AzimuthalProfile profile;
    PhasePath path;
    int iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
    double identity_gap = 0.0;
};

// Right-hand sides of the regularized phase system.
double phase_rhs(double theta, double phi, double beta, const ProblemParams& pp);
double log_r_rhs(double theta, double phi, double beta, const ProblemParams& pp);

// Throws IntegrationError if φ leaves [0, π] or the step control fails.
PhasePath integrate_phase(double beta, const ProblemParams& pp, int M);

// Signed defect φ(π/2) - π/2 without recording a path. When φ leaves [0, π]
// the exit side decides the sign: below 0 counts as negative, above π as positive.
double shooting_defect(double beta, const ProblemParams& pp);

// Initial bisection bracket, before the lower-end fallback and upper-end doubling.
std::pair<double, double> initial_bracket(const ProblemParams& pp);

EigenResult solve_beta_star(const ProblemParams& pp, double tol, int M = 4096);

// Normalized so ω(0) = 1. ω_θθ comes from the ODE; residual_sup uses centered
// differences of ω_θ on interior nodes.
AzimuthalProfile reconstruct_profile(const PhasePath& path);

// ω_θθ from the eigen equation (θ = 0 handled by its limit).
double omega_tt(double theta, double w, double wt, double beta, const ProblemParams& pp);

struct IdentitySides {
    double left = 0.0;
    double right = 0.0;
    double gap = 0.0;
};

// (2-p)∫ (β²ω+ω_θθ)/(β²ω²+ω_θ²)·ω_θ²·cosθ sin^{N-2}θ = (βΛ+1-N)∫ ω cosθ sin^{N-2}θ.
// gap = |L-R| / max(|L|, |R|, 1e-3·(1+β²)∫ ω cosθ sin^{N-2}θ).
IdentitySides eigen_identity(const AzimuthalProfile& prof, const ProblemParams& pp);
double eigen_identity_gap(const AzimuthalProfile& prof, const ProblemParams& pp);
// Same, with an extra factor ω inside the left integrand. Does not close for p != 2.
IdentitySides eigen_identity_literal(const AzimuthalProfile& prof, const ProblemParams& pp);

struct NodeFailure {
    std::string property;
    int node = 0;
    double value = 0.0;
};

struct PropertyReport {
    double max_phi_theta_excess = 0.0;   // max(φ_θ - β)
    double min_convexity = 0.0;          // min(β²ω + ω_θθ)
    double laplacian_constant = 0.0;     // smallest c with |Δ'ω| <= cω on interior nodes
    double phi_theta_end = 0.0;          // φ_θ(π/2)
    bool phi_theta_constant = false;     // φ_θ ≡ β within tol on every node
    bool monotone_ok = false;
    bool convex_ok = false;
    bool laplacian_ok = false;
    bool end_slope_ok = false;
    std::vector<NodeFailure> failures;
    bool all_ok() const { return monotone_ok && convex_ok && laplacian_ok && end_slope_ok; }
};

PropertyReport certify_properties(const PhasePath& path, const AzimuthalProfile& prof,
                                  double tol = 1e-8, double end_tol = 1e-6);

}  // namespace psing::eigensolver
