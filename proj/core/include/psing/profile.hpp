#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psing {

enum class ProfileKind { eigen, singular };

std::string to_string(ProfileKind k);

// ω(θ) on a uniform grid over [0, π/2].
struct AzimuthalProfile {
    double beta = 0.0;
    std::vector<double> theta;
    std::vector<double> omega;
    std::vector<double> omega_theta;
    double residual_sup = 0.0;
    ProfileKind kind = ProfileKind::eigen;

    std::size_t size() const { return theta.size(); }
    // Cubic Hermite interpolation from (ω, ω_θ); clamps θ to the grid.
    double eval(double th) const;
    double max_value() const;
};

// CSV with header theta,omega,omega_theta and 17 significant digits.
void write_profile_csv(std::ostream& os, const AzimuthalProfile& prof);
void write_profile_csv(const std::string& path, const AzimuthalProfile& prof);

// Composite Simpson rule on a uniform grid with an even number of intervals;
// the last interval falls back to the trapezoid rule when the count is odd.
double simpson(const std::vector<double>& f, double h);

}  // namespace psing
