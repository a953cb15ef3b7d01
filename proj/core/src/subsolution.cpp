#include "psing/subsolution.hpp"

#include <algorithm>
#include <cmath>

#include "psing/exponents.hpp"

namespace psing::profiles {

std::string to_string(GChoice g) {
    switch (g) {
        case GChoice::linear: return "linear";
        case GChoice::damped: return "damped";
        case GChoice::glued: return "glued";
        case GChoice::power: return "power";
    }
    return "?";
}

GValues g_eval(GChoice choice, double psi, double k, double gamma, double beta, double eps0) {
    GValues v;
    auto damped = [&] {
        const double e = std::exp(-k * psi);
        v.g = psi * e;
        v.g1 = e * (1.0 - k * psi);
        v.g2 = e * (k * k * psi - 2.0 * k);
    };
    auto power = [&](double c) {
        const double s = 1.0 - gamma / beta;
        v.g = c * std::pow(psi, s);
        v.g1 = c * s * std::pow(psi, s - 1.0);
        v.g2 = c * s * (s - 1.0) * std::pow(psi, s - 2.0);
    };
    switch (choice) {
        case GChoice::linear:
            v = {psi, 1.0, 0.0};
            break;
        case GChoice::damped:
            damped();
            break;
        case GChoice::power:
            power(1.0);
            break;
        case GChoice::glued:
            if (psi <= eps0) damped();
            else power(eps0 > 0.0 ? std::pow(eps0, gamma / beta) * std::exp(-k * eps0) : 1.0);
            break;
    }
    return v;
}

namespace {

double cot(double th) { return std::cos(th) / std::sin(th); }

double laplacian(const PsiPoint& x, int N) {
    return x.theta > 0.0 ? x.psi_tt + (N - 2.0) * cot(x.theta) * x.psi_t : (N - 1.0) * x.psi_tt;
}

}  // namespace

double q1_exact(const PsiPoint& x, double beta, double gamma, const GValues& g, const ProblemParams& pp) {
    const double p = pp.p;
    const double L = exponents::lambda_of(beta, pp);
    const double psi = x.psi, pt = x.psi_t, ptt = x.psi_tt;
    const double D = beta * beta * psi * psi + pt * pt;
    const double A = beta * (beta - gamma) * psi * g.g + g.g1 * pt * pt;
    const double S = -A / D;
    const double Dth = 2.0 * beta * beta * psi * pt + 2.0 * pt * ptt;
    const double Ath = beta * (beta - gamma) * (pt * g.g + psi * g.g1 * pt) + g.g2 * pt * pt * pt +
                       2.0 * g.g1 * pt * ptt;
    const double Sth = -Ath / D + A * Dth / (D * D);
    const double k = g.g1 - (p - 2.0) * S;
    const double kth = g.g2 * pt - (p - 2.0) * Sth;
    return ((L - gamma) * ((beta - gamma) * g.g - (p - 2.0) * beta * psi * S) - beta * L * psi * k +
            kth * pt) / g.g;
}

double q1_reduced(const PsiPoint& x, double beta, double gamma, const GValues& g, const ProblemParams& pp) {
    const double p = pp.p;
    const double L = exponents::lambda_of(beta, pp);
    const double psi = x.psi, pt = x.psi_t;
    const double D = beta * beta * psi * psi + pt * pt;
    const double X = 1.0 + (p - 2.0) * beta * beta * psi * psi / D;
    const double Y = pt * pt / D;
    const double r1 = psi * g.g1 / g.g, r2 = psi * psi * g.g2 / g.g;
    return (gamma - L) * (gamma - beta) * X - (p - 1.0) * beta * L * r1 +
           ((p - 4.0) * beta * L * psi - 2.0 * laplacian(x, pp.N)) * (gamma - beta * (1.0 - r1)) *
               beta * psi / D -
           (p - 2.0) * (r1 * ((beta + 1.0) * gamma - beta * L + beta) + gamma - beta + beta * r2) * Y +
           (p - 1.0) * g.g2 / g.g * pt * pt;
}

double k_constant(double beta, const ProblemParams& pp) {
    return exponents::lambda_of(beta, pp) + beta + (pp.p - 2.0) * (beta + 2.0);
}

double x_factor(const PsiPoint& x, double beta, const ProblemParams& pp) {
    const double b2p2 = beta * beta * x.psi * x.psi;
    return 1.0 + (pp.p - 2.0) * b2p2 / (b2p2 + x.psi_t * x.psi_t);
}

double q1_small_psi(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp) {
    return x_factor(x, beta, pp) * gamma * (gamma - k_constant(beta, pp));
}

double q1_bound_p_lt_2(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp) {
    const double p = pp.p;
    const double L = exponents::lambda_of(beta, pp);
    const double b2p2 = beta * beta * x.psi * x.psi, pt2 = x.psi_t * x.psi_t;
    const double K = L + beta + (p - 2.0) * ((beta + 2.0) * pt2 - L * b2p2) / ((p - 1.0) * b2p2 + pt2);
    return x_factor(x, beta, pp) * gamma * (gamma - K);
}

double q1_power(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp) {
    const double ratio = x.psi_t * x.psi_t / (beta * beta * x.psi * x.psi);
    return (1.0 - pp.p) * gamma * (beta - gamma) * (1.0 + ratio);
}

double q1_power_reduced(const PsiPoint& x, double beta, double gamma, const ProblemParams& pp) {
    const double w = gamma * (beta - gamma);
    return (1.0 - pp.p) * (w + w / (beta * beta) * std::pow(x.psi, -1.0 - gamma / beta) * x.psi_t * x.psi_t);
}

double q1_damped(const PsiPoint& x, double beta, double gamma, double k, const ProblemParams& pp) {
    const double p = pp.p;
    const double L = exponents::lambda_of(beta, pp);
    return q1_small_psi(x, beta, gamma, pp) + k * (p - 1.0) * beta * L * x.psi +
           (p - 1.0) * (-2.0 * k / x.psi + k * k) * x.psi_t * x.psi_t +
           (2.0 - p) * beta * (-2.0 * k + k * k) * x.psi;
}

double nu_of(double beta_star, double beta_q) {
    return 1.0 - (beta_star + 1.0) / (beta_q + 1.0);
}

double gamma0_limit(double beta_star, const ProblemParams& pp) {
    const double bq = exponents::beta_q(pp);
    return std::min({0.5 * k_constant(beta_star, pp), nu_of(beta_star, bq), beta_star});
}

std::vector<PsiPoint> psi_points(const eigensolver::EigenResult& eig, const ProblemParams& pp) {
    const AzimuthalProfile& pr = eig.profile;
    std::vector<PsiPoint> pts(pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) {
        pts[i].theta = pr.theta[i];
        pts[i].psi = pr.omega[i];
        pts[i].psi_t = pr.omega_theta[i];
        pts[i].psi_tt = eigensolver::omega_tt(pr.theta[i], pr.omega[i], pr.omega_theta[i], pr.beta, pp);
    }
    return pts;
}

double choose_epsilon0(const std::vector<PsiPoint>& pts, double beta, double gamma,
                       const ProblemParams& pp) {
    const double K = k_constant(beta, pp);
    // ψ decreases in θ, so walk in from θ = π/2.
    double eps0 = 0.0;
    for (std::size_t j = pts.size(); j-- > 0;) {
        const PsiPoint& x = pts[j];
        if (!(x.psi > 0.0)) continue;
        const GValues g = g_eval(GChoice::linear, x.psi, 0.0, gamma, beta, 0.0);
        const double keff = gamma - q1_exact(x, beta, gamma, g, pp) / (x_factor(x, beta, pp) * gamma);
        if (!(keff > 0.5 * K)) break;
        eps0 = x.psi;
    }
    return eps0;
}

double choose_k0(const std::vector<PsiPoint>& pts, double beta, double eps0, const ProblemParams& pp) {
    const double p = pp.p;
    const double L = exponents::lambda_of(beta, pp);
    const double pos = std::max(0.0, 2.0 - p);
    for (double k = 1.0; k > 1e-8; k *= 0.5) {
        bool ok = true;
        for (const PsiPoint& x : pts) {
            if (!(x.psi > 0.0) || x.psi > eps0) continue;
            const double lhs = k * (1.0 - p) * beta * L * x.psi +
                               (p - 1.0) * (2.0 * k / x.psi - k * k) * x.psi_t * x.psi_t;
            const double rhs = 0.5 * pos * beta * (k * k - 2.0 * k) * x.psi;
            if (lhs < rhs) {
                ok = false;
                break;
            }
        }
        if (ok) return k;
    }
    return 0.0;
}

Q1Report subsolution_Q1(const SubsolutionSpec& spec, const eigensolver::EigenResult& eig,
                        const ProblemParams& pp, double tol) {
    pp.validate_with_q();
    const double beta = eig.beta_star;
    const double gamma = spec.gamma;
    Q1Report rep;
    rep.gamma = gamma;
    rep.gamma0_limit = gamma0_limit(beta, pp);
    rep.gamma_ok = gamma >= 0.0 && gamma < rep.gamma0_limit;

    const std::vector<PsiPoint> pts = psi_points(eig, pp);
    const double g_for_eps = gamma > 0.0 ? gamma : 0.5 * rep.gamma0_limit;
    rep.epsilon0 = spec.epsilon0 > 0.0 ? spec.epsilon0 : choose_epsilon0(pts, beta, g_for_eps, pp);
    if (spec.k > 0.0) {
        rep.k = spec.k;
    } else {
        // k₀ only exists near the zero set of ψ; shrink ε₀ until it does.
        rep.k = choose_k0(pts, beta, rep.epsilon0, pp);
        while (rep.k == 0.0 && rep.epsilon0 > 1e-6 && spec.epsilon0 <= 0.0) {
            rep.epsilon0 *= 0.5;
            rep.k = choose_k0(pts, beta, rep.epsilon0, pp);
        }
    }

    const bool p_lt_2 = pp.p < 2.0;
    switch (spec.g_choice) {
        case GChoice::linear: rep.closed_form = p_lt_2 ? "p<2 bound" : "small-psi"; break;
        case GChoice::damped: rep.closed_form = "damped small-psi"; break;
        case GChoice::power: rep.closed_form = "power"; break;
        case GChoice::glued: rep.closed_form = "glued"; break;
    }

    rep.max_closed_in_region = -1e300;
    rep.max_exact_in_region = -1e300;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PsiPoint& x = pts[i];
        if (!(x.psi > 0.0)) continue;
        Q1Node nd;
        nd.theta = x.theta;
        nd.psi = x.psi;
        const bool low = x.psi <= rep.epsilon0;
        switch (spec.g_choice) {
            case GChoice::linear:
                nd.closed = p_lt_2 ? q1_bound_p_lt_2(x, beta, gamma, pp) : q1_small_psi(x, beta, gamma, pp);
                nd.in_region = p_lt_2 || low;
                break;
            case GChoice::damped:
                nd.closed = q1_damped(x, beta, gamma, rep.k, pp);
                nd.in_region = low;
                break;
            case GChoice::power:
                nd.closed = q1_power(x, beta, gamma, pp);
                nd.in_region = !low;
                break;
            case GChoice::glued:
                nd.closed = low ? q1_damped(x, beta, gamma, rep.k, pp) : q1_power(x, beta, gamma, pp);
                nd.in_region = true;
                break;
        }
        const GValues g = g_eval(spec.g_choice, x.psi, rep.k, gamma, beta, rep.epsilon0);
        nd.exact = q1_exact(x, beta, gamma, g, pp);
        nd.reduced = q1_reduced(x, beta, gamma, g, pp);
        if (nd.in_region) {
            ++rep.region_nodes;
            if (nd.closed <= tol) ++rep.region_nonpositive;
            else rep.positive_nodes.push_back(static_cast<int>(i));
            if (nd.exact <= tol) ++rep.region_exact_nonpositive;
            rep.max_closed_in_region = std::max(rep.max_closed_in_region, nd.closed);
            rep.max_exact_in_region = std::max(rep.max_exact_in_region, nd.exact);
        }
        rep.nodes.push_back(nd);
    }
    rep.fraction_nonpositive =
        rep.region_nodes > 0 ? static_cast<double>(rep.region_nonpositive) / rep.region_nodes : 0.0;
    return rep;
}

}  // namespace psing::profiles
