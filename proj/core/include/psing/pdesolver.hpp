#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psing/params.hpp"
#include "psing/profile.hpp"

namespace psing::pde {

// Log-uniform in r over [ε, 1], uniform in θ over [0, π/2].
struct PolarGrid {
    int N = 2;
    double eps = 1e-3;
    std::vector<double> r;
    std::vector<double> theta;
    double hs = 0.0;      // step in log r
    double htheta = 0.0;

    static PolarGrid make(int N, double eps, int n_r, int n_theta);

    int n_r() const { return static_cast<int>(r.size()); }
    int n_theta() const { return static_cast<int>(theta.size()); }
    std::size_t size() const { return r.size() * theta.size(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * theta.size() + static_cast<std::size_t>(j);
    }
};

enum class BoundaryMode { weak, strong, flat };

std::string to_string(BoundaryMode m);
BoundaryMode boundary_mode_from_string(const std::string& s);

// Inner data on r = ε:
//   weak   k·ε^{-β}ψ(θ)    (profile = ψ_*, exponent = β_*)
//   strong A·ε^{-β}ω(θ)    (profile = ω_*, exponent = β_q)
//   flat   A
struct BoundaryData {
    BoundaryMode mode = BoundaryMode::flat;
    double amplitude = 1.0;
    double exponent = 0.0;
    AzimuthalProfile profile;

    double inner_value(double eps, double theta) const;
};

BoundaryData weak_data(const AzimuthalProfile& psi_star, double k);
BoundaryData strong_data(const AzimuthalProfile& omega_star, double A);
BoundaryData flat_data(double A, double beta_q);

struct SolveOptions {
    double reg_delta = 1e-6;  // relative to the shell gradient scale max_θ u / r
    int max_iter = 400;
    double tol = 1e-8;        // on the per-shell relative sup-update
    double damping = 0.5;
    bool absorption = true;
    bool central_absorption = true;  // hybrid centered/upwind convection; false: upwind only
    int stall_window = 15;
};

struct SolverStats {
    int iterations = 0;
    double final_update = 0.0;
    bool converged = false;
    int clamp_events = 0;
    int ptc_iterations = 0;
    double delta_min = 0.0, delta_max = 0.0;
};

struct PolarField {
    PolarGrid grid;
    std::vector<double> u;
    BoundaryMode mode = BoundaryMode::flat;
    SolverStats stats;
    double reg_delta = 0.0;

    double at(int i, int j) const { return u[grid.index(i, j)]; }
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Damped Picard iteration on
//   -div((|∇u|²+δ²)^{(p-2)/2}∇u) + (|∇u|²+δ²)^{q/2} = 0
// with u = 0 on r = 1 and θ = π/2, ∂_θu = 0 on θ = 0. Non-convergence is reported in
// stats, not thrown.
PolarField solve_steady(const PolarGrid& grid, const BoundaryData& data, const ProblemParams& pp,
                        const SolveOptions& opt = {});

// Pointwise residual -Δ_p u + (|∇u|²+δ²)^{q/2} of the flux discretization, per unit volume,
// with centered gradients in the absorption term. Boundary nodes get 0.
// With scale set, also returns the sum of absolute term sizes per node.
std::vector<double> discrete_residual(const PolarGrid& grid, const std::vector<double>& u,
                                      const ProblemParams& pp, double delta,
                                      std::vector<double>* scale = nullptr);

// CSV header r,theta,u, row-major over (r_i, θ_j), 17 significant digits.
void write_field_csv(std::ostream& os, const PolarField& f);
void write_field_csv(const std::string& path, const PolarField& f);

// ---- checks on converged fields ----

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitWindow {
    double r_lo = 0.0;  // <= 0: 3ε·(1+1e-9)
    double r_hi = 0.1;
};

struct ExponentFit {
    double beta_hat = 0.0;
    double r_lo = 0.0, r_hi = 0.0;
    int shells = 0;
    double r2 = 0.0;
    double r_mid = 0.0;
    std::vector<double> theta;
    std::vector<double> profile_at_mid;  // max-normalized
};

// Least squares slope of log max_θ u against log r on the shells inside the window.
// Throws FitError for fewer than 8 shells, r_lo <= 3ε, or non-positive shell maxima.
ExponentFit fit_exponent(const PolarField& f, const FitWindow& w);

// sup_j |fit profile - prof/max prof| on the field's θ nodes.
double profile_sup_distance(const ExponentFit& fit, const AzimuthalProfile& prof);

struct GradientReport {
    double sup_constant = 0.0;
    double r_at_sup = 0.0, theta_at_sup = 0.0;
    bool finite = false;
};

// sup of |∇u|·d^{1/(q+1-p)} with d = r cos θ, over interior nodes with r in
// [r_lo, r_hi] (defaults 3ε and 1/2).
GradientReport gradient_estimate_check(const PolarField& f, const ProblemParams& pp,
                                       double r_lo = 0.0, double r_hi = 0.5);

struct HarnackReport {
    double ratio = 0.0;
    int pairs = 0;
    int zero_nodes = 0;
    bool guard_tripped = false;
};

// Max over shell pairs with r_x/2 <= r_y <= 2r_x, both in [r_lo, r_hi] (defaults 3ε
// and 1/3), of max_x(u/d) / min_y(u/d), θ = π/2 excluded. Zero interior nodes trip
// the guard and are skipped.
HarnackReport harnack_spot_check(const PolarField& f, double r_lo = 0.0, double r_hi = 1.0 / 3.0);

struct ScalingReport {
    double ell = 1.0;
    double residual = 0.0;      // sup |R[T_ℓw] - ℓ^{(β_q+1)q}R[w](ℓ·)| / sup |ℓ^{(β_q+1)q}R[w](ℓ·)| terms
    double abs_residual = 0.0;
    int nodes = 0;
};

// w = r^{-β_q} cos θ on grid, T_ℓw(x) = ℓ^{β_q}w(ℓx); R[w] at ℓx by linear
// interpolation in log r. δ = 0.
ScalingReport scaling_invariance_check(const ProblemParams& pp, double ell, const PolarGrid& grid);

struct FlatReport {
    double max_barrier_ratio = 0.0;  // max over r > ε of u / (c₂((r-ε)^{-β_q} - (1-ε)^{-β_q}))
    double sup_scaled = 0.0;         // sup over r >= 2ε of u·r^{β_q}
    double probe_value = 0.0;        // u at the node nearest (r, θ) = (1/2, 0)
};

FlatReport flat_report(const PolarField& f, const ProblemParams& pp, double c2);

}  // namespace psing::pde
