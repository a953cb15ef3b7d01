#pragma once

#include <vector>

#include "psing/pdesolver.hpp"

namespace psing::pde::detail {

// Control-volume metrics shared by the solver and the residual checks.
struct Geometry {
    std::vector<double> S;         // ∫ sin^{N-2} over θ cell j
    std::vector<double> sin_face;  // sin^{N-2} at θ_{j+1/2}
    std::vector<double> rf;        // √(r_i r_{i+1})
    std::vector<double> vol_r;     // ∫ r^N ds over radial cell i
    std::vector<double> ang_r;     // ∫ r^{N-2} ds over radial cell i

    explicit Geometry(const PolarGrid& g);
};

double d_s(const PolarGrid& g, const std::vector<double>& u, int i, int j);
double d_theta(const PolarGrid& g, const std::vector<double>& u, int i, int j);
double radial_face_grad2(const PolarGrid& g, const Geometry& geo, const std::vector<double>& u, int i,
                         int j);
double angular_face_grad2(const PolarGrid& g, const std::vector<double>& u, int i, int j);
// max_θ |u| per shell, zero shells borrowing from a neighbour.
std::vector<double> shell_scale(const PolarGrid& g, const std::vector<double>& u);

}  // namespace psing::pde::detail
