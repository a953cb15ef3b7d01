#include "psing/barriers.hpp"

#include <algorithm>
#include <cmath>

#include "psing/params.hpp"

namespace psing::profiles {

std::string to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::power_supersolution: return "power_supersolution";
        case BarrierKind::log_supersolution: return "log_supersolution";
        case BarrierKind::tangential: return "tangential";
    }
    return "?";
}

namespace {

double beta_of(double p, double q) { return (p - q) / (q + 1.0 - p); }

void check_q(double p, double q, bool allow_equal) {
    if (!(p > 1.0) || !(q > p - 1.0) || (allow_equal ? q > p : q >= p))
        throw DomainError("barrier needs p > 1 and p-1 < q < p (q = p for the log barrier)");
}

}  // namespace

double c2_nominal(double p, double q) {
    check_q(p, q, false);
    const double m = q + 1.0 - p;
    return std::pow(q + p - 1.0, (q - p) / m) / (p - q);
}

double c2_sharp(double p, double q) {
    check_q(p, q, false);
    const double m = q + 1.0 - p;
    return m / (p - q) * std::pow((p - 1.0) / m, 1.0 / m);
}

double tangential_min_amplitude(int N, double p, double q, double tau, double r_outer) {
    check_q(p, q, false);
    const double m = q + 1.0 - p;
    const double need = (p - 1.0) / m + (N - 1.0) * (r_outer - tau) / tau;
    return std::pow(need, 1.0 / m) / beta_of(p, q);
}

RadialDerivs barrier_value(const BarrierSpec& spec, double p, double q, double s) {
    RadialDerivs d;
    const double a = spec.amplitude;
    switch (spec.kind) {
        case BarrierKind::power_supersolution: {
            const double b = beta_of(p, q);
            const double t = s - spec.offset;
            d.v = a * (std::pow(t, -b) - std::pow(spec.outer - spec.offset, -b));
            d.dv = -a * b * std::pow(t, -b - 1.0);
            d.d2v = a * b * (b + 1.0) * std::pow(t, -b - 2.0);
            break;
        }
        case BarrierKind::log_supersolution: {
            const double t = s - spec.offset;
            d.v = a * std::log((spec.outer - spec.offset) / t);
            d.dv = -a / t;
            d.d2v = a / (t * t);
            break;
        }
        case BarrierKind::tangential: {
            const double b = beta_of(p, q);
            const double t = spec.outer - s;
            d.v = a * std::pow(t, -b) - spec.shift;
            d.dv = a * b * std::pow(t, -b - 1.0);
            d.d2v = a * b * (b + 1.0) * std::pow(t, -b - 2.0);
            break;
        }
    }
    return d;
}

double radial_residual(const RadialDerivs& d, double s, int N, double p, double q) {
    const double g = std::abs(d.dv);
    return std::pow(g, p - 2.0) * (-(p - 1.0) * d.d2v - (N - 1.0) * d.dv / s) + std::pow(g, q);
}

std::vector<double> barrier_grid(const BarrierSpec& spec, int n) {
    if (n < 2) throw DomainError("barrier grid needs at least 2 points");
    const double span = spec.outer - spec.offset;
    if (!(spec.offset > 0.0) || !(span > 0.0)) throw DomainError("barrier needs 0 < offset < outer");
    std::vector<double> s(n);
    const double lo = std::log(1e-6 * span), hi = std::log(span);
    for (int i = 0; i < n; ++i) {
        const double t = std::exp(lo + (hi - lo) * i / (n - 1));
        s[i] = spec.kind == BarrierKind::tangential ? spec.outer - t : spec.offset + t;
    }
    return s;
}

BarrierReport barrier_residual(const BarrierSpec& spec, int N, double p, double q,
                               const std::vector<double>& grid, double tol) {
    check_q(p, q, spec.kind == BarrierKind::log_supersolution);
    if (spec.kind == BarrierKind::tangential && spec.offset > 0.5 * spec.outer)
        throw DomainError("tangential barrier needs tau <= r'/2");
    BarrierReport rep;
    rep.min_residual = 1e300;
    rep.min_scaled_residual = 1e300;
    for (double s : grid) {
        const RadialDerivs d = barrier_value(spec, p, q, s);
        if (d.dv == 0.0 || !std::isfinite(d.dv))
            throw DomainError("barrier derivative vanishes on the grid");
        const double g = std::abs(d.dv);
        const double r = radial_residual(d, s, N, p, q);
        const double size = std::pow(g, p - 2.0) * ((p - 1.0) * std::abs(d.d2v) + (N - 1.0) * g / s) +
                            std::pow(g, q);
        const double scaled = r / size;
        rep.min_residual = std::min(rep.min_residual, r);
        if (scaled < rep.min_scaled_residual) {
            rep.min_scaled_residual = scaled;
            rep.s_at_min = s;
        }
    }
    rep.sign_ok = rep.min_scaled_residual >= -tol;
    if (spec.kind == BarrierKind::tangential) {
        const double m = q + 1.0 - p;
        const double lhs = std::pow(spec.amplitude * beta_of(p, q), m);
        double margin = 1e300;
        for (double s : grid)
            margin = std::min(margin, lhs - (p - 1.0) / m - (N - 1.0) * (spec.outer - s) / s);
        rep.amplitude_margin = margin;
        rep.amplitude_ok = margin >= 0.0;
    }
    return rep;
}

}  // namespace psing::profiles
