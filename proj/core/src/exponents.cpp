#include "psing/exponents.hpp"

#include <algorithm>
#include <cmath>

namespace psing::exponents {

std::string to_string(Regime r) {
    return r == Regime::subcritical ? "subcritical" : "critical_or_above";
}

double beta_q(double p, double q) {
    if (!(q > p - 1.0) || !(q < p))
        throw DomainError("beta_q needs p-1 < q < p");
    return (p - q) / (q + 1.0 - p);
}

double beta_q(const ProblemParams& pp) {
    return beta_q(pp.p, pp.q_or_throw());
}

double lambda_of(double beta, int N, double p) {
    return beta * (p - 1.0) + p - N;
}

double lambda_of(double beta, const ProblemParams& pp) {
    return lambda_of(beta, pp.N, pp.p);
}

double q_star(double beta_star, const ProblemParams& pp) {
    if (!(beta_star > 0.0)) throw DomainError("q_star needs beta_star > 0");
    return pp.p - beta_star / (beta_star + 1.0);
}

double beta_star_n2_variant_a(double p) {
    return (3.0 - p + 2.0 * std::sqrt(p * p - 5.0 * p + 7.0)) / (3.0 * (p - 1.0));
}

double beta_star_n2_variant_b(double p) {
    return (1.0 + 2.0 * std::sqrt(p * p - 3.0 * p + 3.0)) / (3.0 * (p - 1.0));
}

namespace {

double beta_star_n2(double p) {
    return (3.0 - p + 2.0 * std::sqrt(p * p - 3.0 * p + 3.0)) / (3.0 * (p - 1.0));
}

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::optional<double> beta_star_closed_form(const ProblemParams& pp) {
    if (pp.p == 2.0) return static_cast<double>(pp.N - 1);
    if (pp.p == static_cast<double>(pp.N)) return 1.0;
    if (pp.N == 2 && pp.p > 1.0 && pp.p <= 2.0) return beta_star_n2(pp.p);
    return std::nullopt;
}

std::vector<BoundCheck> check_bounds(double beta_star, const ProblemParams& pp) {
    const double N = pp.N, p = pp.p;
    const double serrin = (N - p) / (p - 1.0);
    const double upper = (N - 1.0) / (p - 1.0);
    const double tol = kEqualityRelTol;
    std::vector<BoundCheck> out;

    if (p < N)
        out.push_back({"beta_star > (N-p)/(p-1)", beta_star > serrin, false});
    if (p > 2.0 && p < N)
        out.push_back({"beta_star < (N-1)/(p-1)", beta_star < upper, false});
    if (p < 2.0)
        out.push_back({"beta_star > (N-1)/(p-1)", beta_star > upper, false});
    if (p == 2.0 || p == N) {
        bool eq = close_rel(beta_star, upper, tol);
        out.push_back({"beta_star = (N-1)/(p-1)", eq, eq});
    }
    const double lo = std::max(1.0, serrin);
    bool eq = close_rel(beta_star, lo, tol);
    out.push_back({"beta_star >= max{1,(N-p)/(p-1)}", beta_star >= lo || eq, eq});
    return out;
}

bool is_subcritical(double bq, double beta_star) {
    return bq > beta_star * (1.0 + 1e-12);
}

bool is_subcritical(const ProblemParams& pp, double beta_star) {
    return is_subcritical(beta_q(pp), beta_star);
}

bool all_satisfied(const std::vector<BoundCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const BoundCheck& c) { return c.satisfied; });
}

ExponentReport make_report(double beta_star, const ProblemParams& pp) {
    ExponentReport r;
    r.beta_star = beta_star;
    r.lambda_beta_star = lambda_of(beta_star, pp);
    r.q_star = q_star(beta_star, pp);
    if (pp.q) {
        r.beta_q = beta_q(pp);
        r.lambda_beta_q = lambda_of(*r.beta_q, pp);
        r.regime = is_subcritical(*r.beta_q, beta_star) ? Regime::subcritical : Regime::critical_or_above;
    }
    r.bound_checks = check_bounds(beta_star, pp);
    return r;
}

}  // namespace psing::exponents
