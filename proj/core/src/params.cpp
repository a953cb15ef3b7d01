#include "psing/params.hpp"

#include <cmath>
#include <sstream>

namespace psing {

void ProblemParams::validate() const {
    if (N < 2) throw DomainError("N must be >= 2, got " + std::to_string(N));
    if (!std::isfinite(p) || !(p > 1.0) || p > N)
        throw DomainError("p must satisfy 1 < p <= N, got p=" + std::to_string(p));
    if (q) {
        double qq = *q;
        if (!std::isfinite(qq) || !(qq > p - 1.0) || !(qq < p))
            throw DomainError("q must satisfy p-1 < q < p, got q=" + std::to_string(qq));
    }
}

void ProblemParams::validate_with_q() const {
    if (!q) throw DomainError("q is required");
    validate();
}

double ProblemParams::q_or_throw() const {
    if (!q) throw DomainError("q is required");
    return *q;
}

std::string describe(const ProblemParams& pp) {
    std::ostringstream os;
    os.precision(17);
    os << "N=" << pp.N << " p=" << pp.p;
    if (pp.q) os << " q=" << *pp.q;
    return os.str();
}

}  // namespace psing
