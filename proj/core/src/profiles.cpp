#include "psing/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "psing/eigensolver.hpp"
#include "psing/exponents.hpp"
#include "psing/ode.hpp"

namespace psing::profiles {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTheta0 = 1e-6;
constexpr double kBlowup = 1e150;

double cot(double th) { return std::cos(th) / std::sin(th); }

struct Coeffs {
    int N;
    double p, m, beta, lambda;
};

Coeffs coeffs(const ProblemParams& pp) {
    pp.validate_with_q();
    Coeffs c;
    c.N = pp.N;
    c.p = pp.p;
    c.m = *pp.q + 1.0 - pp.p;
    c.beta = exponents::beta_q(pp);
    c.lambda = exponents::lambda_of(c.beta, pp);
    return c;
}

// Scaled equation for w = ω/ω₀; amp = ω₀^m multiplies the absorption term.
double scaled_wtt(double th, double w, double wt, const Coeffs& c, double amp) {
    const double b2 = c.beta * c.beta;
    const double D = b2 * w * w + wt * wt;
    const double absorb = amp * std::pow(D, 0.5 * (c.m + 1.0));
    const double y = D > 0.0 ? wt * wt / D : 0.0;
    const double rhs = -(c.N - 2.0) * cot(th) * wt -
                       (D > 0.0 ? (c.p - 2.0) * b2 * w * wt * wt / D : 0.0) + absorb -
                       c.beta * c.lambda * w;
    return rhs / (1.0 + (c.p - 2.0) * y);
}

ode::Options shot_options() {
    ode::Options o;
    o.abs_tol = 1e-12;
    o.rel_tol = 1e-12;
    o.max_dt = 0.02;
    o.dt0 = 1e-8;
    o.max_steps = 400000;
    return o;
}

ShotOutcome shoot_impl(double omega0, const ProblemParams& pp, int M, AzimuthalProfile* prof) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw DomainError("shoot_profile needs omega0 > 0");
    const Coeffs c = coeffs(pp);
    const double amp = std::exp(c.m * std::log(omega0));
    const double a = (std::pow(c.beta, c.m + 1.0) * amp - c.beta * c.lambda) / (2.0 * (c.N - 1.0));
    const ode::State<2> x0{1.0 + a * kTheta0 * kTheta0, 2.0 * a * kTheta0};

    auto rhs = [&](double t, const ode::State<2>& x, ode::State<2>& dx) {
        dx[0] = x[1];
        dx[1] = scaled_wtt(t, x[0], x[1], c, amp);
    };
    auto event = [](const ode::State<2>& x) {
        return std::min(x[0], kBlowup - std::abs(x[0]) - std::abs(x[1]));
    };

    std::vector<double> times;
    if (prof) {
        times.resize(M + 1);
        for (int i = 0; i <= M; ++i) times[i] = i * (kHalfPi / M);
        times[0] = kTheta0;
        times[M] = kHalfPi;
        prof->beta = c.beta;
        prof->kind = ProfileKind::singular;
        prof->theta.clear();
        prof->omega.clear();
        prof->omega_theta.clear();
    }
    auto out = [&](std::size_t i, double, const ode::State<2>& x) {
        if (!prof) return;
        prof->theta.push_back(i == 0 ? 0.0 : times[i]);
        prof->omega.push_back(i == 0 ? omega0 : omega0 * x[0]);
        prof->omega_theta.push_back(i == 0 ? 0.0 : omega0 * x[1]);
    };

    auto run = ode::integrate<2>(rhs, x0, kTheta0, kHalfPi, times, out, event, shot_options());
    ShotOutcome o;
    o.omega0 = omega0;
    if (run.stop == ode::Stop::event) {
        if (run.x_stop[0] <= 0.5 && std::abs(run.x_stop[1]) < kBlowup / 2) {
            o.exit = Exit::crossed_zero;
            o.theta_cross = run.t_stop;
        } else {
            o.exit = Exit::derivative_blowup;
        }
    } else if (run.stop == ode::Stop::failure) {
        o.exit = Exit::derivative_blowup;
    } else {
        o.exit = Exit::reached_end;
        o.end_value = omega0 * run.x_stop[0];
    }
    return o;
}

bool straddles(const ShotOutcome& a, const ShotOutcome& b) {
    return (a.exit == Exit::crossed_zero) != (b.exit == Exit::crossed_zero);
}

double beta_star_for(const ProblemParams& pp, std::optional<double> beta_star) {
    if (beta_star) return *beta_star;
    ProblemParams base(pp.N, pp.p);
    if (auto cf = exponents::beta_star_closed_form(base)) return *cf;
    return eigensolver::solve_beta_star(base, 1e-11, eigensolver::kMinGrid).beta_star;
}

}  // namespace

std::string to_string(Exit e) {
    switch (e) {
        case Exit::reached_end: return "reached_end";
        case Exit::crossed_zero: return "crossed_zero";
        case Exit::derivative_blowup: return "derivative_blowup";
    }
    return "?";
}

double hj_residual(double omega, double omega_theta, double omega_tt, double theta, double beta,
                   const ProblemParams& pp, bool absorption) {
    const double D = beta * beta * omega * omega + omega_theta * omega_theta;
    if (!(D > 0.0)) throw DomainError("hj_residual: degenerate point beta^2 w^2 + w_t^2 = 0");
    const double L = exponents::lambda_of(beta, pp);
    const double lap = theta > 0.0 ? omega_tt + (pp.N - 2.0) * cot(theta) * omega_theta
                                   : (pp.N - 1.0) * omega_tt;
    double r = -lap - (pp.p - 2.0) * (beta * beta * omega + omega_tt) * omega_theta * omega_theta / D -
               beta * L * omega;
    if (absorption) r += std::pow(D, 0.5 * (pp.q_or_throw() + 2.0 - pp.p));
    return r;
}

double hj_omega_tt(double theta, double omega, double omega_theta, double beta,
                   const ProblemParams& pp) {
    const double L = exponents::lambda_of(beta, pp);
    const double b2 = beta * beta;
    const double D = b2 * omega * omega + omega_theta * omega_theta;
    const double absorb = std::pow(D, 0.5 * (pp.q_or_throw() + 2.0 - pp.p));
    if (theta <= 0.0) return (absorb - beta * L * omega) / (pp.N - 1.0);
    const double y = D > 0.0 ? omega_theta * omega_theta / D : 0.0;
    const double rhs = -(pp.N - 2.0) * cot(theta) * omega_theta -
                       (D > 0.0 ? (pp.p - 2.0) * b2 * omega * omega_theta * omega_theta / D : 0.0) +
                       absorb - beta * L * omega;
    return rhs / (1.0 + (pp.p - 2.0) * y);
}

double natural_amplitude(const ProblemParams& pp) {
    const Coeffs c = coeffs(pp);
    const double bl = c.beta * c.lambda;
    if (!(bl > 0.0)) return 1.0;
    const double lg = (std::log(bl) - (c.m + 1.0) * std::log(c.beta)) / c.m;
    return std::exp(std::clamp(lg, -600.0, 600.0));
}

ShotOutcome shoot_profile(double omega0, const ProblemParams& pp, int M) {
    return shoot_impl(omega0, pp, M, nullptr);
}

ShotOutcome shoot_profile(double omega0, const ProblemParams& pp, int M, AzimuthalProfile& out) {
    if (M < eigensolver::kMinGrid) throw DomainError("shoot_profile needs M >= 64");
    return shoot_impl(omega0, pp, M, &out);
}

SweepSpec default_sweep(const ProblemParams& pp) {
    SweepSpec s;
    const double nat = std::log10(natural_amplitude(pp));
    s.omega_lo = std::pow(10.0, std::clamp(std::min(-6.0, nat - 10.0), -290.0, 290.0));
    s.omega_hi = std::pow(10.0, std::clamp(std::max(6.0, nat + 8.0), -290.0, 290.0));
    return s;
}

std::vector<double> sweep_points(const SweepSpec& spec) {
    if (!(spec.omega_lo > 0.0) || !(spec.omega_hi > spec.omega_lo) || spec.per_decade < 1)
        throw DomainError("invalid sweep range");
    const double a = std::log10(spec.omega_lo), b = std::log10(spec.omega_hi);
    const int n = std::max(2, static_cast<int>(std::ceil((b - a) * spec.per_decade)) + 1);
    std::vector<double> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = std::pow(10.0, a + (b - a) * i / (n - 1));
    return pts;
}

std::vector<ShotOutcome> sweep(const ProblemParams& pp, const SweepSpec& spec) {
    const std::vector<double> pts = sweep_points(spec);
    std::vector<ShotOutcome> out(pts.size());
    const int workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(pts.size())));
    auto work = [&](int w) {
        for (std::size_t i = w; i < pts.size(); i += workers) out[i] = shoot_impl(pts[i], pp, spec.M, nullptr);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    return out;
}

int count_brackets(const std::vector<ShotOutcome>& outcomes) {
    int n = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        if (straddles(outcomes[i - 1], outcomes[i])) ++n;
    return n;
}

OmegaStarResult solve_omega_star(const ProblemParams& pp, double tol, int M,
                                 std::optional<double> beta_star) {
    pp.validate_with_q();
    const double bs = beta_star_for(pp, beta_star);
    const double qs = exponents::q_star(bs, pp);
    if (!exponents::is_subcritical(pp, bs))
        throw ThresholdError("solve_omega_star needs q < q_star (q_star=" + std::to_string(qs) + ")");

    const SweepSpec spec = default_sweep(pp);
    const std::vector<ShotOutcome> sw = sweep(pp, spec);
    OmegaStarResult res;
    res.sign_changes = count_brackets(sw);
    std::size_t k = 0;
    while (k + 1 < sw.size() && !straddles(sw[k], sw[k + 1])) ++k;
    if (k + 1 >= sw.size())
        throw ThresholdError("no reached_end/crossed_zero bracket over omega0 in [" +
                             std::to_string(spec.omega_lo) + ", " + std::to_string(spec.omega_hi) +
                             "] for " + describe(pp));

    // Keep lo on the crossed_zero side.
    double lo = sw[k].omega0, hi = sw[k + 1].omega0;
    if (sw[k].exit != Exit::crossed_zero) std::swap(lo, hi);
    int it = 0;
    while (std::abs(std::log(hi / lo)) > 1e-14 && it < 200) {
        const double mid = std::sqrt(lo * hi);
        if (mid == lo || mid == hi) break;
        ShotOutcome o = shoot_impl(mid, pp, M, nullptr);
        if (o.exit == Exit::crossed_zero) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++it;
        if (o.exit == Exit::reached_end && std::abs(o.end_value) <= 1e-3 * tol * mid) break;
    }
    res.iterations = it;
    res.bracket = {std::min(lo, hi), std::max(lo, hi)};

    AzimuthalProfile prof;
    ShotOutcome fin = shoot_impl(hi, pp, M, &prof);
    if (fin.exit != Exit::reached_end) {
        fin = shoot_impl(lo, pp, M, &prof);
        // The crossing sits within the last cell; pad with the boundary value.
        while (static_cast<int>(prof.size()) < M + 1) {
            const std::size_t i = prof.size();
            prof.theta.push_back(i == static_cast<std::size_t>(M) ? kHalfPi : i * (kHalfPi / M));
            prof.omega.push_back(0.0);
            prof.omega_theta.push_back(prof.omega_theta.back());
        }
    }
    res.omega0 = prof.omega.front();
    res.end_value_rel = std::abs(prof.omega.back()) / res.omega0;
    prof.residual_sup = relative_residual_sup(prof, pp);
    res.profile = std::move(prof);
    return res;
}

NonexistenceReport nonexistence_scan(const ProblemParams& pp, const SweepSpec& spec,
                                     std::optional<double> beta_star) {
    pp.validate_with_q();
    const double bs = beta_star_for(pp, beta_star);
    NonexistenceReport rep;
    rep.q_star = exponents::q_star(bs, pp);
    if (exponents::is_subcritical(pp, bs))
        throw DomainError("nonexistence_scan needs q >= q_star (q_star=" + std::to_string(rep.q_star) + ")");
    rep.outcomes = sweep(pp, spec);
    rep.bracket_found = count_brackets(rep.outcomes) > 0;
    std::map<std::string, int> counts;
    for (const auto& o : rep.outcomes) ++counts[to_string(o.exit)];
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : counts) {
        os << (first ? "" : ",") << k << ":" << v;
        first = false;
    }
    rep.signature = os.str();
    return rep;
}

double relative_residual_sup(const AzimuthalProfile& prof, const ProblemParams& pp) {
    const std::size_t n = prof.size();
    if (n < 3) return 0.0;
    const double beta = prof.beta;
    const double L = exponents::lambda_of(beta, pp);
    const double scale = std::max({std::abs(beta * L), beta * beta, 1.0}) * std::abs(prof.omega.front());
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h2 = prof.theta[i + 1] - prof.theta[i - 1];
        const double wtt = (prof.omega_theta[i + 1] - prof.omega_theta[i - 1]) / h2;
        const double D = beta * beta * prof.omega[i] * prof.omega[i] +
                         prof.omega_theta[i] * prof.omega_theta[i];
        if (!(D > 0.0)) continue;
        sup = std::max(sup, std::abs(hj_residual(prof.omega[i], prof.omega_theta[i], wtt,
                                                 prof.theta[i], beta, pp)));
    }
    return sup / scale;
}

}  // namespace psing::profiles
