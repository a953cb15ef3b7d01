#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace psing {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// (N, p, q) for -Δ_p u + |∇u|^q = 0. q is absent for purely p-harmonic work.
struct ProblemParams {
    int N = 2;
    double p = 2.0;
    std::optional<double> q;

    ProblemParams() = default;
    ProblemParams(int n, double p_, std::optional<double> q_ = std::nullopt)
        : N(n), p(p_), q(q_) {}

    // Throws DomainError unless N >= 2, 1 < p <= N and, if q is set, p-1 < q < p.
    void validate() const;
    // validate() plus a required q.
    void validate_with_q() const;
    double q_or_throw() const;
};

std::string describe(const ProblemParams& pp);

}  // namespace psing
