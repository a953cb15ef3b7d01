#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psing/params.hpp"
#include "psing/profile.hpp"

namespace psing::profiles {

enum class Exit { reached_end, crossed_zero, derivative_blowup };

std::string to_string(Exit e);

struct ShotOutcome {
    double omega0 = 0.0;
    Exit exit = Exit::reached_end;
    double end_value = 0.0;             // ω(π/2) for reached_end, 0 otherwise
    std::optional<double> theta_cross;  // set iff exit == crossed_zero
};

class ThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Divided-form residual of the azimuthal equation with absorption
//   -ω_θθ - (N-2)cotθ ω_θ - (p-2)(β²ω+ω_θθ)ω_θ²/D + D^{(q+2-p)/2} - βΛ_β ω,  D = β²ω²+ω_θ².
// With absorption = false the D^{(q+2-p)/2} term is dropped (eigen equation).
double hj_residual(double omega, double omega_theta, double omega_tt, double theta, double beta,
                   const ProblemParams& pp, bool absorption = true);

// ω_θθ solved from the same equation; θ = 0 uses the pole limit.
double hj_omega_tt(double theta, double omega, double omega_theta, double beta,
                   const ProblemParams& pp);

// Pole value at which absorption and the linear term balance:
// (β_qΛ)^{1/m} / β_q^{(m+1)/m}, m = q+1-p. Returns 1 when β_qΛ <= 0.
double natural_amplitude(const ProblemParams& pp);

ShotOutcome shoot_profile(double omega0, const ProblemParams& pp, int M = 4096);

// Same shot, also returning the profile on the output grid up to the exit point.
ShotOutcome shoot_profile(double omega0, const ProblemParams& pp, int M, AzimuthalProfile& out);

struct SweepSpec {
    double omega_lo = 1e-6;
    double omega_hi = 1e6;
    int per_decade = 4;
    int M = 1024;
    int workers = 1;
};

// [min(1e-6, ω_nat·1e-10), max(1e6, ω_nat·1e8)].
SweepSpec default_sweep(const ProblemParams& pp);

std::vector<double> sweep_points(const SweepSpec& spec);
std::vector<ShotOutcome> sweep(const ProblemParams& pp, const SweepSpec& spec);

// Number of adjacent pairs in a sweep whose outcomes straddle ω_* (one crossed_zero,
// the other reached_end or derivative_blowup).
int count_brackets(const std::vector<ShotOutcome>& outcomes);

struct OmegaStarResult {
    AzimuthalProfile profile;
    double omega0 = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    int iterations = 0;
    int sign_changes = 0;  // over the initial sweep
    double end_value_rel = 0.0;
};

// Requires q < q_*. beta_star is computed when not supplied.
// Throws ThresholdError when the sweep finds no bracket.
OmegaStarResult solve_omega_star(const ProblemParams& pp, double tol = 1e-8, int M = 4096,
                                 std::optional<double> beta_star = std::nullopt);

struct NonexistenceReport {
    double q_star = 0.0;
    bool bracket_found = false;
    std::string signature;
    std::vector<ShotOutcome> outcomes;
};

// Requires q >= q_*; throws DomainError otherwise.
NonexistenceReport nonexistence_scan(const ProblemParams& pp, const SweepSpec& spec,
                                     std::optional<double> beta_star = std::nullopt);

// Relative sup of hj_residual over interior nodes, using centered differences of
// ω_θ and scaled by β_qΛ_{β_q}·ω(0).
double relative_residual_sup(const AzimuthalProfile& prof, const ProblemParams& pp);

}  // namespace psing::profiles
