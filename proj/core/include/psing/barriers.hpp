#pragma once

#include <optional>
#include <string>
#include <vector>

namespace psing::profiles {

enum class BarrierKind { power_supersolution, log_supersolution, tangential };

std::string to_string(BarrierKind k);

// power_supersolution: v(s) = a((s-ε)^{-β_q} - (R-ε)^{-β_q}) on (ε, R]
// log_supersolution:   v(s) = a·ln((R-ε)/(s-ε)) on (ε, R], q = p, a = p-1 by default
// tangential:          v(s) = a(r'-s)^{-β_q} - b on [τ, r')
struct BarrierSpec {
    BarrierKind kind = BarrierKind::power_supersolution;
    double offset = 0.1;     // ε or τ
    double outer = 1.0;      // R or r'
    double amplitude = 1.0;  // c₂, the log coefficient, or a
    double shift = 0.0;      // b
};

struct RadialDerivs {
    double v = 0.0, dv = 0.0, d2v = 0.0;
};

// c₂ = (p-q)^{-1}(q+p-1)^{(q-p)/(q+1-p)} the nominal power-barrier amplitude.
double c2_nominal(double p, double q);
// Smallest amplitude that makes the power barrier a supersolution:
// (m/(p-q))·((p-1)/m)^{1/m}, m = q+1-p.
double c2_sharp(double p, double q);
// Smallest a with (aβ_q)^m >= (p-1)/m + (N-1)(r'-τ)/τ.
double tangential_min_amplitude(int N, double p, double q, double tau, double r_outer);

RadialDerivs barrier_value(const BarrierSpec& spec, double p, double q, double s);

// |v'|^{p-2}(-(p-1)v'' - (N-1)v'/s) + |v'|^q.
double radial_residual(const RadialDerivs& d, double s, int N, double p, double q);

// Log-spaced in the distance to the singular end, n points.
std::vector<double> barrier_grid(const BarrierSpec& spec, int n = 1000);

struct BarrierReport {
    double min_residual = 0.0;             // raw
    double min_scaled_residual = 0.0;      // residual / sum of absolute term sizes
    double s_at_min = 0.0;
    bool sign_ok = false;
    std::optional<bool> amplitude_ok;      // tangential only
    double amplitude_margin = 0.0;         // min over grid of (aβ)^m - (p-1)/m - (N-1)(r'-s)/s
};

// sign_ok when the scaled residual is >= -tol on every grid node.
// Throws DomainError if v' vanishes on the grid.
BarrierReport barrier_residual(const BarrierSpec& spec, int N, double p, double q,
                               const std::vector<double>& grid, double tol = 1e-12);

}  // namespace psing::profiles
