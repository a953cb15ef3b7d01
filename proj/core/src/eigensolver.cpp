#include "psing/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psing/exponents.hpp"
#include "psing/ode.hpp"

namespace psing::eigensolver {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

ode::Options phase_options() {
    ode::Options o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-12;
    o.max_dt = 0.02;
    o.dt0 = 1e-8;
    return o;
}

double cot(double th) { return std::cos(th) / std::sin(th); }

}  // namespace

double phase_rhs(double theta, double phi, double beta, const ProblemParams& pp) {
    const double L = exponents::lambda_of(beta, pp);
    const double s = std::sin(phi), c = std::cos(phi);
    const double den = (pp.p - 1.0) * s * s + c * c;
    const double num = (2.0 - pp.N) * cot(theta) * s * c + (pp.p - 1.0) * beta * s * s + L * c * c;
    return num / den;
}

double log_r_rhs(double theta, double phi, double beta, const ProblemParams& pp) {
    const double L = exponents::lambda_of(beta, pp);
    const double s = std::sin(phi), c = std::cos(phi);
    const double den = (pp.p - 1.0) * s * s + c * c;
    return -s * ((beta - L) * c + (pp.N - 2.0) * cot(theta) * s) / den;
}

namespace {

struct PhaseRun {
    ode::RunResult<2> run;
    double phi0 = 0.0;
};

template <class Out>
PhaseRun run_phase(double beta, const ProblemParams& pp, const std::vector<double>& times,
                   Out&& out) {
    const double L = exponents::lambda_of(beta, pp);
    PhaseRun pr;
    pr.phi0 = L * kTheta0 / (pp.N - 1.0);
    auto rhs = [&](double t, const ode::State<2>& x, ode::State<2>& dx) {
        dx[0] = phase_rhs(t, x[0], beta, pp);
        dx[1] = log_r_rhs(t, x[0], beta, pp);
    };
    auto event = [](const ode::State<2>& x) {
        return std::min(x[0], std::numbers::pi - x[0]);
    };
    pr.run = ode::integrate<2>(rhs, {pr.phi0, 0.0}, kTheta0, kHalfPi, times, out, event,
                               phase_options());
    return pr;
}

}  // namespace

PhasePath integrate_phase(double beta, const ProblemParams& pp, int M) {
    pp.validate();
    if (!(beta > 0.0)) throw DomainError("integrate_phase needs beta > 0");
    if (M < kMinGrid) throw DomainError("integrate_phase needs M >= 64");

    PhasePath path;
    path.beta = beta;
    path.params = pp;
    path.theta.resize(M + 1);
    path.phi.assign(M + 1, 0.0);
    path.log_r.assign(M + 1, 0.0);
    const double h = kHalfPi / M;
    std::vector<double> times(M + 1);
    times[0] = kTheta0;
    for (int i = 1; i <= M; ++i) times[i] = i * h;
    times[M] = kHalfPi;
    path.theta = times;

    auto out = [&](std::size_t i, double, const ode::State<2>& x) {
        path.phi[i] = x[0];
        path.log_r[i] = x[1];
    };
    PhaseRun pr = run_phase(beta, pp, times, out);
    if (pr.phi0 <= 0.0)
        throw IntegrationError("phase start is not positive (Lambda_beta <= 0)", kTheta0);
    if (pr.run.stop == ode::Stop::event)
        throw IntegrationError("phase left [0, pi]", pr.run.t_stop);
    if (pr.run.stop == ode::Stop::failure)
        throw IntegrationError("step control failed", pr.run.t_stop);
    path.defect = path.phi[M] - kHalfPi;
    return path;
}

double shooting_defect(double beta, const ProblemParams& pp) {
    static const std::vector<double> none;
    auto out = [](std::size_t, double, const ode::State<2>&) {};
    PhaseRun pr = run_phase(beta, pp, none, out);
    if (pr.phi0 <= 0.0) return -kHalfPi;
    if (pr.run.stop == ode::Stop::event) return pr.run.x_stop[0] < kHalfPi ? -kHalfPi : kHalfPi;
    if (pr.run.stop == ode::Stop::failure)
        throw IntegrationError("step control failed", pr.run.t_stop);
    return pr.run.x_stop[0] - kHalfPi;
}

std::pair<double, double> initial_bracket(const ProblemParams& pp) {
    const double N = pp.N, p = pp.p;
    const double lo = std::max(1.0, (N - p) / (p - 1.0)) + 1e-9;
    const double hi = p >= 2.0 ? (N - 1.0) / (p - 1.0) + 1.0 : (N - 1.0) / (p - 1.0);
    return {lo, hi};
}

EigenResult solve_beta_star(const ProblemParams& pp, double tol, int M) {
    pp.validate();
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    const double serrin = (pp.N - pp.p) / (pp.p - 1.0);
    auto [lo, hi] = initial_bracket(pp);

    double dlo = shooting_defect(lo, pp);
    for (int k = 0; dlo >= 0.0 && k < 60; ++k) {
        lo = 0.5 * (std::max(serrin, 0.0) + lo);
        dlo = shooting_defect(lo, pp);
    }
    double dhi = shooting_defect(hi, pp);
    for (int k = 0; dhi <= 0.0 && k < 60; ++k) {
        hi *= 2.0;
        dhi = shooting_defect(hi, pp);
    }
    if (!(dlo < 0.0 && dhi > 0.0))
        throw NoSignChangeError("shooting defect has no sign change on [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "] for " + describe(pp));

    EigenResult res;
    int it = 0;
    while (hi - lo >= tol && it < 200) {
        const double mid = 0.5 * (lo + hi);
        const double d = shooting_defect(mid, pp);
        if (d == 0.0) {
            lo = hi = mid;
            break;
        }
        (d < 0.0 ? lo : hi) = mid;
        ++it;
    }
    res.iterations = it;
    res.bracket = {lo, hi};
    res.beta_star = 0.5 * (lo + hi);
    res.path = integrate_phase(res.beta_star, pp, M);
    res.profile = reconstruct_profile(res.path);
    res.identity_gap = eigen_identity_gap(res.profile, pp);
    return res;
}

double omega_tt(double theta, double w, double wt, double beta, const ProblemParams& pp) {
    const double L = exponents::lambda_of(beta, pp);
    if (theta <= 0.0) return -beta * L * w / (pp.N - 1.0);
    const double D = beta * beta * w * w + wt * wt;
    const double y = D > 0.0 ? wt * wt / D : 0.0;
    const double num = beta * L * w + (pp.N - 2.0) * cot(theta) * wt +
                       (D > 0.0 ? (pp.p - 2.0) * beta * beta * w * wt * wt / D : 0.0);
    return -num / (1.0 + (pp.p - 2.0) * y);
}

AzimuthalProfile reconstruct_profile(const PhasePath& path) {
    const ProblemParams& pp = path.params;
    const int M = static_cast<int>(path.theta.size()) - 1;
    const double beta = path.beta;
    const double h = kHalfPi / M;
    AzimuthalProfile prof;
    prof.beta = beta;
    prof.kind = ProfileKind::eigen;
    prof.theta.resize(M + 1);
    prof.omega.resize(M + 1);
    prof.omega_theta.resize(M + 1);
    const double norm = std::exp(path.log_r[0]) * std::cos(path.phi[0]);
    for (int i = 0; i <= M; ++i) {
        const double r = std::exp(path.log_r[i]);
        prof.theta[i] = i * h;
        prof.omega[i] = r * std::cos(path.phi[i]) / norm;
        prof.omega_theta[i] = -beta * r * std::sin(path.phi[i]) / norm;
    }
    prof.theta[M] = kHalfPi;
    prof.omega[0] = 1.0;
    prof.omega_theta[0] = 0.0;

    const double L = exponents::lambda_of(beta, pp);
    double sup = 0.0;
    for (int i = 1; i < M; ++i) {
        const double th = prof.theta[i], w = prof.omega[i], wt = prof.omega_theta[i];
        const double wtt = (prof.omega_theta[i + 1] - prof.omega_theta[i - 1]) / (2.0 * h);
        const double D = beta * beta * w * w + wt * wt;
        const double res = -wtt - (pp.N - 2.0) * cot(th) * wt -
                           (pp.p - 2.0) * (beta * beta * w + wtt) * wt * wt / D - beta * L * w;
        sup = std::max(sup, std::abs(res));
    }
    prof.residual_sup = sup;
    return prof;
}

namespace {

IdentitySides identity_impl(const AzimuthalProfile& prof, const ProblemParams& pp, bool literal) {
    const double beta = prof.beta;
    const double L = exponents::lambda_of(beta, pp);
    const std::size_t n = prof.size();
    if (n < 3) throw DomainError("profile too short");
    const double h = prof.theta[1] - prof.theta[0];
    std::vector<double> fl(n), fr(n), fw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = prof.theta[i], w = prof.omega[i], wt = prof.omega_theta[i];
        const double weight = std::cos(th) * std::pow(std::sin(th), pp.N - 2.0);
        const double D = beta * beta * w * w + wt * wt;
        const double wtt = omega_tt(th, w, wt, beta, pp);
        double left = D > 0.0 ? (beta * beta * w + wtt) / D * wt * wt * weight : 0.0;
        if (literal) left *= w;
        fl[i] = left;
        fr[i] = w * weight;
        fw[i] = std::abs(w) * weight;
    }
    IdentitySides s;
    s.left = (2.0 - pp.p) * simpson(fl, h);
    s.right = (beta * L + 1.0 - pp.N) * simpson(fr, h);
    // Floor: both sides vanish identically at p = 2 and at p = N.
    const double floor = 1e-3 * (1.0 + beta * beta) * simpson(fw, h);
    const double scale = std::max({std::abs(s.left), std::abs(s.right), floor, 1e-300});
    s.gap = std::abs(s.left - s.right) / scale;
    return s;
}

}  // namespace

IdentitySides eigen_identity(const AzimuthalProfile& prof, const ProblemParams& pp) {
    return identity_impl(prof, pp, false);
}

IdentitySides eigen_identity_literal(const AzimuthalProfile& prof, const ProblemParams& pp) {
    return identity_impl(prof, pp, true);
}

double eigen_identity_gap(const AzimuthalProfile& prof, const ProblemParams& pp) {
    if (prof.kind != ProfileKind::eigen) throw DomainError("identity needs an eigen profile");
    return eigen_identity(prof, pp).gap;
}

PropertyReport certify_properties(const PhasePath& path, const AzimuthalProfile& prof,
                                  double tol, double end_tol) {
    const ProblemParams& pp = path.params;
    const int n = static_cast<int>(path.theta.size());
    if (n < kMinGrid + 1 || static_cast<int>(prof.size()) != n)
        throw DomainError("certify_properties needs a path with M >= 64 matching the profile");
    const double beta = path.beta;
    PropertyReport rep;
    rep.max_phi_theta_excess = -1e300;
    rep.min_convexity = 1e300;
    double max_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pt = phase_rhs(path.theta[i], path.phi[i], beta, pp);
        rep.max_phi_theta_excess = std::max(rep.max_phi_theta_excess, pt - beta);
        max_dev = std::max(max_dev, std::abs(pt - beta));
        if (pt > beta + tol) rep.failures.push_back({"phi_theta <= beta", i, pt - beta});
        if (i == n - 1) rep.phi_theta_end = pt;

        const double th = prof.theta[i], w = prof.omega[i], wt = prof.omega_theta[i];
        const double wtt = omega_tt(th, w, wt, beta, pp);
        const double conv = beta * beta * w + wtt;
        rep.min_convexity = std::min(rep.min_convexity, conv);
        if (conv < -tol) rep.failures.push_back({"beta^2 omega + omega_tt >= 0", i, conv});
        if (i > 0 && i < n - 1 && w > 0.0) {
            const double lap = wtt + (pp.N - 2.0) * cot(th) * wt;
            rep.laplacian_constant = std::max(rep.laplacian_constant, std::abs(lap) / w);
        }
    }
    rep.monotone_ok = rep.max_phi_theta_excess <= tol;
    rep.convex_ok = rep.min_convexity >= -tol;
    rep.laplacian_ok = std::isfinite(rep.laplacian_constant);
    rep.end_slope_ok = std::abs(rep.phi_theta_end - beta) <= end_tol;
    if (!rep.end_slope_ok)
        rep.failures.push_back({"phi_theta(pi/2) = beta", n - 1, rep.phi_theta_end - beta});
    rep.phi_theta_constant = max_dev <= tol;
    return rep;
}

}  // namespace psing::eigensolver
