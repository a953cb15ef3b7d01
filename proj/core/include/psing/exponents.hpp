#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psing/params.hpp"

namespace psing::exponents {

enum class Regime { subcritical, critical_or_above };

std::string to_string(Regime r);

struct BoundCheck {
    std::string name;
    bool satisfied = false;
    bool equality_case = false;
};

struct ExponentReport {
    std::optional<double> beta_q;
    std::optional<double> lambda_beta_q;
    double beta_star = 0.0;
    double lambda_beta_star = 0.0;
    double q_star = 0.0;
    std::optional<Regime> regime;
    std::vector<BoundCheck> bound_checks;
};

// (p - q)/(q + 1 - p).
double beta_q(const ProblemParams& pp);
double beta_q(double p, double q);

// β(p - 1) + p - N.
double lambda_of(double beta, const ProblemParams& pp);
double lambda_of(double beta, int N, double p);

// p - β*/(β* + 1).
double q_star(double beta_star, const ProblemParams& pp);

// N-1 at p = 2, 1 at p = N, the two-dimensional formula for N = 2 and 1 < p <= 2,
// nothing otherwise.
std::optional<double> beta_star_closed_form(const ProblemParams& pp);

// Variants of the N = 2 formula, (3-p+2√(p²-5p+7))/(3(p-1)) and
// (1+2√(p²-3p+3))/(3(p-1)). Both disagree with the shooting solution for p != 2
// and are kept only for diagnostics.
double beta_star_n2_variant_a(double p);
double beta_star_n2_variant_b(double p);

constexpr double kEqualityRelTol = 1e-8;

// β_q > β_* with a 1e-12 relative margin, so that q = q_* computed in floating
// point lands on the critical side.
bool is_subcritical(double beta_q, double beta_star);
bool is_subcritical(const ProblemParams& pp, double beta_star);

std::vector<BoundCheck> check_bounds(double beta_star, const ProblemParams& pp);
bool all_satisfied(const std::vector<BoundCheck>& checks);

// Fills every field; beta_star comes from the caller (closed form or eigensolver).
ExponentReport make_report(double beta_star, const ProblemParams& pp);

}  // namespace psing::exponents
