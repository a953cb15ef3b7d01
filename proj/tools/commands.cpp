#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include "psing/barriers.hpp"
#include "psing/eigensolver.hpp"
#include "psing/exponents.hpp"
#include "psing/pdesolver.hpp"
#include "psing/profiles.hpp"
#include "psing/subsolution.hpp"
#include "run_config.hpp"

namespace psing::cli {

using nlohmann::json;

namespace {

struct Outcome {
    json body;
    int code = ExitCode::ok;
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ProblemParams params_of(const RunConfig& c) { return ProblemParams(c.N, c.p, c.q); }

ProblemParams params_with_q(const RunConfig& c) {
    if (!c.q) throw UsageError("--q", "this command needs --q");
    return params_of(c);
}

eigensolver::EigenResult eigen_of(const RunConfig& c) {
    return eigensolver::solve_beta_star(ProblemParams(c.N, c.p), c.tol, c.grid);
}

json exponent_json(const exponents::ExponentReport& r) {
    json checks = json::array();
    for (const auto& b : r.bound_checks)
        checks.push_back({{"name", b.name}, {"satisfied", b.satisfied}, {"equality_case", b.equality_case}});
    json j{{"beta_star", r.beta_star},
           {"lambda_beta_star", r.lambda_beta_star},
           {"q_star", r.q_star},
           {"bound_checks", checks}};
    j["beta_q"] = r.beta_q ? json(*r.beta_q) : json(nullptr);
    j["lambda_beta_q"] = r.lambda_beta_q ? json(*r.lambda_beta_q) : json(nullptr);
    j["regime"] = r.regime ? json(exponents::to_string(*r.regime)) : json(nullptr);
    return j;
}

json properties_json(const eigensolver::PropertyReport& r) {
    return {{"max_phi_theta_excess", num(r.max_phi_theta_excess)},
            {"min_convexity", num(r.min_convexity)},
            {"laplacian_constant", num(r.laplacian_constant)},
            {"phi_theta_end", num(r.phi_theta_end)},
            {"phi_theta_constant", r.phi_theta_constant},
            {"monotone_ok", r.monotone_ok},
            {"convex_ok", r.convex_ok},
            {"laplacian_ok", r.laplacian_ok},
            {"end_slope_ok", r.end_slope_ok}};
}

bool subcritical(const ProblemParams& pp, double beta_star) {
    return exponents::is_subcritical(pp, beta_star);
}

Outcome cmd_exponents(const RunConfig& c) {
    const ProblemParams pp = params_of(c);
    const auto closed = exponents::beta_star_closed_form(pp);
    const double bs = closed ? *closed : eigen_of(c).beta_star;
    Outcome o;
    o.body = exponent_json(exponents::make_report(bs, pp));
    o.body["beta_star_source"] = closed ? "closed_form" : "eigensolver";
    if (pp.q && !subcritical(pp, bs)) o.code = ExitCode::nonexistence;
    return o;
}

Outcome cmd_eigen(const RunConfig& c) {
    const ProblemParams pp(c.N, c.p);
    const auto eig = eigen_of(c);
    Outcome o;
    o.body = {{"beta_star", eig.beta_star},
              {"bracket", {eig.bracket.first, eig.bracket.second}},
              {"iterations", eig.iterations},
              {"identity_gap", num(eig.identity_gap)},
              {"profile_residual_sup", num(eig.profile.residual_sup)},
              {"properties", properties_json(eigensolver::certify_properties(eig.path, eig.profile))}};
    if (const auto closed = exponents::beta_star_closed_form(pp)) o.body["beta_star_closed_form"] = *closed;
    if (!c.out.empty()) {
        write_profile_csv(c.out, eig.profile);
        o.body["profile_csv"] = c.out;
    }
    return o;
}

Outcome cmd_profile(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const double bs = eigen_of(c).beta_star;
    Outcome o;
    o.body["q_star"] = exponents::q_star(bs, pp);
    if (!subcritical(pp, bs)) {
        profiles::SweepSpec spec = profiles::default_sweep(pp);
        spec.workers = c.workers;
        const auto rep = profiles::nonexistence_scan(pp, spec, bs);
        o.body["regime"] = exponents::to_string(exponents::Regime::critical_or_above);
        o.body["bracket"] = nullptr;
        o.body["bracket_found"] = rep.bracket_found;
        o.body["signature"] = rep.signature;
        o.code = rep.bracket_found ? ExitCode::no_convergence : ExitCode::nonexistence;
        return o;
    }
    const auto res = profiles::solve_omega_star(pp, c.tol, c.grid, bs);
    o.body["regime"] = exponents::to_string(exponents::Regime::subcritical);
    o.body["omega0"] = res.omega0;
    o.body["bracket"] = {res.bracket.first, res.bracket.second};
    o.body["iterations"] = res.iterations;
    o.body["sign_changes"] = res.sign_changes;
    o.body["end_value_rel"] = num(res.end_value_rel);
    o.body["relative_residual_sup"] = num(profiles::relative_residual_sup(res.profile, pp));
    if (!c.out.empty()) {
        write_profile_csv(c.out, res.profile);
        o.body["profile_csv"] = c.out;
    }
    return o;
}

Outcome cmd_sweep(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const double bs = eigen_of(c).beta_star;
    profiles::SweepSpec spec = profiles::default_sweep(pp);
    if (c.omega_lo > 0.0) spec.omega_lo = c.omega_lo;
    if (c.omega_hi > 0.0) spec.omega_hi = c.omega_hi;
    if (!(spec.omega_hi > spec.omega_lo)) throw UsageError("--omega-range", "sweep range is empty");
    spec.per_decade = c.per_decade;
    spec.workers = c.workers;
    const auto outs = profiles::sweep(pp, spec);
    json list = json::array();
    for (const auto& s : outs)
        list.push_back({{"omega0", s.omega0}, {"exit", profiles::to_string(s.exit)}, {"end_value", num(s.end_value)}});
    Outcome o;
    o.body = {{"params", {{"N", pp.N}, {"p", pp.p}, {"q", *pp.q}}},
              {"q_star", exponents::q_star(bs, pp)},
              {"brackets", profiles::count_brackets(outs)},
              {"outcomes", list}};
    return o;
}

pde::FitWindow default_window(const RunConfig& c, const pde::PolarGrid& g) {
    pde::FitWindow w;
    if (c.r_lo > 0.0 || c.r_hi > 0.0) {
        w.r_lo = c.r_lo;
        if (c.r_hi > 0.0) w.r_hi = c.r_hi;
        return w;
    }
    if (c.mode == "strong") {
        // past the relaxation layer left by the finite amplitude
        w.r_lo = 1e3 * g.eps;
        w.r_hi = std::min(1e5 * g.eps, 0.1);
        if (w.r_hi / w.r_lo < 10.0) w = {0.0, 0.1};
    } else {
        w.r_hi = std::min(100.0 * g.eps, 0.1);
    }
    return w;
}

json fit_json(const pde::ExponentFit& f) {
    return {{"beta_hat", f.beta_hat}, {"r_window", {f.r_lo, f.r_hi}}, {"r2", f.r2}, {"shells", f.shells}};
}

json stats_json(const pde::PolarField& f) {
    const auto& s = f.stats;
    return {{"iterations", s.iterations},
            {"final_update", num(s.final_update)},
            {"converged", s.converged},
            {"clamp_events", s.clamp_events},
            {"ptc_iterations", s.ptc_iterations},
            {"reg_delta", f.reg_delta},
            {"delta_range", {num(s.delta_min), num(s.delta_max)}}};
}

struct PdeRun {
    pde::PolarField field;
    json body;
    bool converged = false;
};

PdeRun pde_run(const RunConfig& c, const std::string& mode, const ProblemParams& pp,
               const eigensolver::EigenResult& eig, const AzimuthalProfile* omega) {
    RunConfig rc = c;
    rc.mode = mode;
    const pde::PolarGrid g = pde::PolarGrid::make(c.N, c.eps, c.n_r, c.n_theta);
    pde::SolveOptions opt;
    opt.reg_delta = c.reg_delta;
    opt.max_iter = c.max_iter;
    opt.tol = c.pde_tol;
    const double bq = exponents::beta_q(pp);

    pde::BoundaryData data;
    if (mode == "weak") data = pde::weak_data(eig.profile, c.k);
    else if (mode == "strong") data = pde::strong_data(*omega, c.amp);
    else data = pde::flat_data(c.amp, bq);

    PdeRun r;
    r.field = pde::solve_steady(g, data, pp, opt);
    r.converged = r.field.stats.converged;
    r.body["mode"] = mode;
    r.body["stats"] = stats_json(r.field);
    if (mode == "flat") {
        const double c2 = profiles::c2_sharp(pp.p, *pp.q);
        const auto fr = pde::flat_report(r.field, pp, c2);
        r.body["flat"] = {{"c2", c2},
                          {"c2_nominal", profiles::c2_nominal(pp.p, *pp.q)},
                          {"max_barrier_ratio", num(fr.max_barrier_ratio)},
                          {"sup_scaled", num(fr.sup_scaled)},
                          {"probe_value", num(fr.probe_value)}};
        return r;
    }
    const pde::FitWindow w = default_window(rc, g);
    const auto fit = pde::fit_exponent(r.field, w);
    const double target = mode == "weak" ? eig.beta_star : bq;
    const AzimuthalProfile& ref = mode == "weak" ? eig.profile : *omega;
    r.body["fit"] = fit_json(fit);
    r.body["beta_target"] = target;
    r.body["beta_rel_error"] = std::abs(fit.beta_hat - target) / target;
    r.body["profile_sup_distance"] = pde::profile_sup_distance(fit, ref);
    const auto gr = pde::gradient_estimate_check(r.field, pp, fit.r_lo);
    r.body["gradient"] = {{"sup_constant", num(gr.sup_constant)},
                          {"r_at_sup", gr.r_at_sup},
                          {"theta_at_sup", gr.theta_at_sup},
                          {"finite", gr.finite}};
    const auto h = pde::harnack_spot_check(r.field, fit.r_lo);
    r.body["harnack"] = {{"ratio", num(h.ratio)},
                         {"pairs", h.pairs},
                         {"zero_nodes", h.zero_nodes},
                         {"guard_tripped", h.guard_tripped}};
    return r;
}

Outcome cmd_pde(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const auto eig = eigen_of(c);
    const bool sub = subcritical(pp, eig.beta_star);
    Outcome o;
    o.body["q_star"] = exponents::q_star(eig.beta_star, pp);
    o.body["beta_star"] = eig.beta_star;
    o.body["beta_q"] = exponents::beta_q(pp);
    o.body["regime"] = exponents::to_string(sub ? exponents::Regime::subcritical
                                                : exponents::Regime::critical_or_above);
    std::optional<profiles::OmegaStarResult> om;
    if (c.mode == "strong") {
        if (!sub) {
            o.body["omega_star"] = nullptr;
            o.code = ExitCode::nonexistence;
            return o;
        }
        om = profiles::solve_omega_star(pp, c.tol, c.grid, eig.beta_star);
        o.body["omega0"] = om->omega0;
    }
    PdeRun r = pde_run(c, c.mode, pp, eig, om ? &om->profile : nullptr);
    o.body.update(r.body);
    if (!c.out.empty()) {
        pde::write_field_csv(c.out, r.field);
        o.body["field_csv"] = c.out;
    }
    if (!r.converged) o.code = ExitCode::no_convergence;
    else if (!sub) o.code = ExitCode::nonexistence;
    return o;
}

json barrier_json(const profiles::BarrierSpec& s, const profiles::BarrierReport& r) {
    json j{{"kind", profiles::to_string(s.kind)},
           {"amplitude", s.amplitude},
           {"min_scaled_residual", num(r.min_scaled_residual)},
           {"s_at_min", r.s_at_min},
           {"sign_ok", r.sign_ok}};
    if (r.amplitude_ok) j["amplitude_ok"] = *r.amplitude_ok;
    return j;
}

Outcome suite_bounds(const RunConfig& c) {
    const ProblemParams pp(c.N, c.p);
    const auto eig = eigen_of(c);
    const auto checks = exponents::check_bounds(eig.beta_star, pp);
    json items = json::array();
    for (const auto& b : checks)
        items.push_back({{"name", b.name}, {"satisfied", b.satisfied}, {"equality_case", b.equality_case}});
    Outcome o;
    o.body = {{"beta_star", eig.beta_star}, {"items", items}, {"passed", exponents::all_satisfied(checks)}};
    return o;
}

Outcome suite_identity(const RunConfig& c) {
    const ProblemParams pp(c.N, c.p);
    const auto fine = eigensolver::solve_beta_star(pp, c.tol, c.grid);
    const auto coarse = eigensolver::solve_beta_star(pp, c.tol, c.grid / 2);
    const auto lit = eigensolver::eigen_identity_literal(fine.profile, pp);
    const auto props = eigensolver::certify_properties(fine.path, fine.profile);
    Outcome o;
    o.body = {{"beta_star", fine.beta_star},
              {"identity_gap", num(fine.identity_gap)},
              {"identity_gap_half_grid", num(coarse.identity_gap)},
              {"literal_identity_gap", num(lit.gap)},
              {"properties", properties_json(props)},
              {"passed", fine.identity_gap < 1e-5 && props.all_ok()}};
    return o;
}

Outcome suite_barriers(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const double q = *pp.q;
    json items = json::array();
    bool passed = true;
    auto check = [&](const profiles::BarrierSpec& s, double qq, bool claimed) {
        const auto rep = profiles::barrier_residual(s, pp.N, pp.p, qq, profiles::barrier_grid(s));
        json j = barrier_json(s, rep);
        j["claimed"] = claimed;
        items.push_back(j);
        if (claimed) passed = passed && rep.sign_ok;
    };
    profiles::BarrierSpec power{profiles::BarrierKind::power_supersolution, 0.1, 1.0,
                                profiles::c2_nominal(pp.p, q), 0.0};
    check(power, q, true);
    power.amplitude = profiles::c2_sharp(pp.p, q);
    check(power, q, false);
    check({profiles::BarrierKind::log_supersolution, 0.1, 1.0, pp.p - 1.0, 0.0}, pp.p, true);
    const double tau = 0.5, r_outer = 1.0;
    check({profiles::BarrierKind::tangential, tau, r_outer,
           profiles::tangential_min_amplitude(pp.N, pp.p, q, tau, r_outer), 0.0},
          q, true);
    Outcome o;
    o.body = {{"items", items}, {"passed", passed}};
    return o;
}

Outcome suite_subsolution(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const auto eig = eigen_of(c);
    const double gamma = 0.5 * profiles::gamma0_limit(eig.beta_star, pp);
    std::vector<profiles::GChoice> choices;
    if (pp.p < 2.0) choices = {profiles::GChoice::linear};
    else choices = {profiles::GChoice::linear, profiles::GChoice::damped, profiles::GChoice::power};
    json items = json::array();
    bool passed = true;
    for (auto g : choices) {
        const auto rep = profiles::subsolution_Q1({gamma, 0.0, 0.0, g}, eig, pp);
        const bool ok = rep.region_nodes > 0 && rep.region_nonpositive == rep.region_nodes;
        passed = passed && ok;
        items.push_back({{"g", profiles::to_string(g)},
                         {"closed_form", rep.closed_form},
                         {"gamma", rep.gamma},
                         {"epsilon0", rep.epsilon0},
                         {"k", rep.k},
                         {"region_nodes", rep.region_nodes},
                         {"region_nonpositive", rep.region_nonpositive},
                         {"region_exact_nonpositive", rep.region_exact_nonpositive},
                         {"max_closed_in_region", num(rep.max_closed_in_region)},
                         {"max_exact_in_region", num(rep.max_exact_in_region)},
                         {"passed", ok}});
    }
    Outcome o;
    o.body = {{"beta_star", eig.beta_star}, {"items", items}, {"passed", passed}};
    return o;
}

Outcome suite_dichotomy(const RunConfig& c) {
    const ProblemParams pp = params_with_q(c);
    const auto eig = eigen_of(c);
    Outcome o;
    if (!subcritical(pp, eig.beta_star)) {
        o.body = {{"regime", "critical_or_above"}, {"passed", false}};
        o.code = ExitCode::nonexistence;
        return o;
    }
    const auto om = profiles::solve_omega_star(pp, c.tol, c.grid, eig.beta_star);
    auto weak = std::async(std::launch::async, [&] { return pde_run(c, "weak", pp, eig, nullptr); });
    PdeRun strong = pde_run(c, "strong", pp, eig, &om.profile);
    PdeRun w = weak.get();
    auto within = [](const json& b) {
        return b["beta_rel_error"].get<double>() < 0.05 && b["profile_sup_distance"].get<double>() < 0.05;
    };
    o.body = {{"weak", w.body},
              {"strong", strong.body},
              {"passed", w.converged && strong.converged && within(w.body) && within(strong.body)}};
    if (!w.converged || !strong.converged) o.code = ExitCode::no_convergence;
    return o;
}

Outcome cmd_verify(const RunConfig& c) {
    Outcome o;
    if (c.suite == "bounds") o = suite_bounds(c);
    else if (c.suite == "identity") o = suite_identity(c);
    else if (c.suite == "barriers") o = suite_barriers(c);
    else if (c.suite == "subsolution") o = suite_subsolution(c);
    else o = suite_dichotomy(c);
    o.body["suite"] = c.suite;
    return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        Outcome o;
        switch (cfg.command) {
            case Command::exponents: o = cmd_exponents(cfg); break;
            case Command::eigen: o = cmd_eigen(cfg); break;
            case Command::profile: o = cmd_profile(cfg); break;
            case Command::verify: o = cmd_verify(cfg); break;
            case Command::pde: o = cmd_pde(cfg); break;
            case Command::sweep: o = cmd_sweep(cfg); break;
        }
        json doc{{"config", cfg}, {"result", o.body}, {"exit_code", o.code}};
        out << doc.dump(2) << '\n';
        return o.code;
    } catch (const UsageError& e) {
        err << "usage error (" << e.flag() << "): " << e.what() << '\n';
        return ExitCode::usage;
    } catch (const DomainError& e) {
        err << "usage error (parameters): " << e.what() << '\n';
        return ExitCode::usage;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << '\n';
        return ExitCode::no_convergence;
    }
}

}  // namespace psing::cli
