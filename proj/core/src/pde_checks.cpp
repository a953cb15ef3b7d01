#include <algorithm>
#include <cmath>

#include "pde_detail.hpp"
#include "psing/exponents.hpp"
#include "psing/pdesolver.hpp"

namespace psing::pde {

ExponentFit fit_exponent(const PolarField& f, const FitWindow& w) {
    const PolarGrid& g = f.grid;
    const double floor = 3.0 * g.eps;
    const double r_lo = w.r_lo > 0.0 ? w.r_lo : floor * (1.0 + 1e-9);
    if (!(r_lo > floor)) throw FitError("fit window must start above 3·eps");
    if (!(w.r_hi > r_lo)) throw FitError("fit window is empty");

    std::vector<int> shells;
    for (int i = 0; i < g.n_r(); ++i)
        if (g.r[i] >= r_lo && g.r[i] <= w.r_hi) shells.push_back(i);
    if (shells.size() < 8) throw FitError("fit window holds fewer than 8 shells");

    std::vector<double> x, y;
    for (int i : shells) {
        double m = 0.0;
        for (int j = 0; j < g.n_theta(); ++j) m = std::max(m, f.at(i, j));
        if (!(m > 0.0)) throw FitError("non-positive shell maximum in fit window");
        x.push_back(std::log(g.r[i]));
        y.push_back(std::log(m));
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - (my + slope * (x[k] - mx));
        ss_res += e * e;
    }

    ExponentFit fit;
    fit.beta_hat = -slope;
    fit.r_lo = g.r[shells.front()];
    fit.r_hi = g.r[shells.back()];
    fit.shells = static_cast<int>(shells.size());
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;

    const double target = 0.5 * (std::log(fit.r_lo) + std::log(fit.r_hi));
    int mid = shells.front();
    for (int i : shells)
        if (std::abs(std::log(g.r[i]) - target) < std::abs(std::log(g.r[mid]) - target)) mid = i;
    fit.r_mid = g.r[mid];
    fit.theta = g.theta;
    double m = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) m = std::max(m, f.at(mid, j));
    fit.profile_at_mid.resize(g.n_theta());
    for (int j = 0; j < g.n_theta(); ++j) fit.profile_at_mid[j] = f.at(mid, j) / m;
    return fit;
}

double profile_sup_distance(const ExponentFit& fit, const AzimuthalProfile& prof) {
    const double m = prof.max_value();
    if (!(m > 0.0)) throw FitError("reference profile has no positive maximum");
    double d = 0.0;
    for (std::size_t j = 0; j < fit.theta.size(); ++j)
        d = std::max(d, std::abs(fit.profile_at_mid[j] - prof.eval(fit.theta[j]) / m));
    return d;
}

GradientReport gradient_estimate_check(const PolarField& f, const ProblemParams& pp, double r_lo,
                                       double r_hi) {
    pp.validate_with_q();
    const PolarGrid& g = f.grid;
    const double inv_m = 1.0 / (*pp.q + 1.0 - pp.p);
    const double lo = r_lo > 0.0 ? r_lo : 3.0 * g.eps;
    GradientReport rep;
    rep.finite = true;
    for (int i = 1; i + 1 < g.n_r(); ++i) {
        const double r = g.r[i];
        if (r < lo || r > r_hi) continue;
        for (int j = 0; j + 1 < g.n_theta(); ++j) {
            const double gr = detail::d_s(g, f.u, i, j) / r;
            const double gt = detail::d_theta(g, f.u, i, j) / r;
            const double d = r * std::cos(g.theta[j]);
            const double c = std::hypot(gr, gt) * std::pow(d, inv_m);
            if (!std::isfinite(c)) {
                rep.finite = false;
                continue;
            }
            if (c > rep.sup_constant) {
                rep.sup_constant = c;
                rep.r_at_sup = r;
                rep.theta_at_sup = g.theta[j];
            }
        }
    }
    return rep;
}

HarnackReport harnack_spot_check(const PolarField& f, double r_lo, double r_hi) {
    const PolarGrid& g = f.grid;
    const double lo = r_lo > 0.0 ? r_lo : 3.0 * g.eps;
    HarnackReport rep;
    std::vector<int> shells;
    std::vector<double> hi_v, lo_v;
    for (int i = 1; i + 1 < g.n_r(); ++i) {
        const double r = g.r[i];
        if (r < lo || r > r_hi) continue;
        double mx = 0.0, mn = 1e300;
        for (int j = 0; j + 1 < g.n_theta(); ++j) {
            const double u = f.at(i, j);
            if (!(u > 0.0)) {
                ++rep.zero_nodes;
                rep.guard_tripped = true;
                continue;
            }
            const double v = u / (r * std::cos(g.theta[j]));
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        if (mx > 0.0) {
            shells.push_back(i);
            hi_v.push_back(mx);
            lo_v.push_back(mn);
        }
    }
    for (std::size_t a = 0; a < shells.size(); ++a) {
        for (std::size_t b = 0; b < shells.size(); ++b) {
            const double rx = g.r[shells[a]], ry = g.r[shells[b]];
            if (ry < 0.5 * rx || ry > 2.0 * rx) continue;
            ++rep.pairs;
            rep.ratio = std::max(rep.ratio, hi_v[a] / lo_v[b]);
        }
    }
    return rep;
}

ScalingReport scaling_invariance_check(const ProblemParams& pp, double ell, const PolarGrid& grid) {
    pp.validate_with_q();
    if (!(ell > 0.0) || ell > 1.0) throw DomainError("ell must lie in (0, 1]");
    const double bq = exponents::beta_q(pp);
    const int nr = grid.n_r(), nt = grid.n_theta();
    auto w = [bq](double r, double th) { return std::pow(r, -bq) * std::cos(th); };

    std::vector<double> base(grid.size()), scaled(grid.size());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
            base[grid.index(i, j)] = w(grid.r[i], grid.theta[j]);
            scaled[grid.index(i, j)] = std::pow(ell, bq) * w(ell * grid.r[i], grid.theta[j]);
        }
    std::vector<double> sz;
    const std::vector<double> rw = discrete_residual(grid, base, pp, 0.0, &sz);
    const std::vector<double> rt = discrete_residual(grid, scaled, pp, 0.0);
    const double factor = std::pow(ell, (bq + 1.0) * *pp.q);
    const double s0 = std::log(grid.r[0]);

    ScalingReport rep;
    rep.ell = ell;
    double num = 0.0, den = 0.0;
    for (int i = 1; i + 1 < nr; ++i) {
        double pos = (std::log(ell * grid.r[i]) - s0) / grid.hs;
        if (std::abs(pos - std::round(pos)) < 1e-9) pos = std::round(pos);
        if (pos < 1.0 || pos > nr - 2.0) continue;
        const int k = std::min(static_cast<int>(pos), nr - 3);
        const double t = pos - k;
        for (int j = 0; j + 1 < nt; ++j) {
            const std::size_t a = grid.index(k, j), b = grid.index(k + 1, j);
            const double ref = factor * ((1.0 - t) * rw[a] + t * rw[b]);
            const double size = factor * ((1.0 - t) * sz[a] + t * sz[b]);
            num = std::max(num, std::abs(rt[grid.index(i, j)] - ref));
            den = std::max(den, size);
            ++rep.nodes;
        }
    }
    rep.abs_residual = num;
    rep.residual = den > 0.0 ? num / den : 0.0;
    return rep;
}

FlatReport flat_report(const PolarField& f, const ProblemParams& pp, double c2) {
    pp.validate_with_q();
    const PolarGrid& g = f.grid;
    const double bq = exponents::beta_q(pp);
    const double eps = g.eps;
    FlatReport rep;
    double best = 1e300;
    for (int i = 1; i + 1 < g.n_r(); ++i) {
        const double r = g.r[i];
        const double bar = c2 * (std::pow(r - eps, -bq) - std::pow(1.0 - eps, -bq));
        for (int j = 0; j + 1 < g.n_theta(); ++j) {
            const double u = f.at(i, j);
            rep.max_barrier_ratio = std::max(rep.max_barrier_ratio, u / bar);
            if (r >= 2.0 * eps) rep.sup_scaled = std::max(rep.sup_scaled, u * std::pow(r, bq));
        }
        if (std::abs(std::log(r / 0.5)) < best) {
            best = std::abs(std::log(r / 0.5));
            rep.probe_value = f.at(i, 0);
        }
    }
    return rep;
}

}  // namespace psing::pde
