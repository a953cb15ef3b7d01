#pragma once

// Dense-output Dormand-Prince driver with a fixed output grid and a single
// sign-change event, built on Boost.Odeint.

#include <array>
#include <cmath>
#include <cstddef>
#include <algorithm>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace psing::ode {

template <std::size_t K>
using State = std::array<double, K>;

enum class Stop { reached_end, event, failure };

template <std::size_t K>
struct RunResult {
    Stop stop = Stop::reached_end;
    double t_stop = 0.0;
    State<K> x_stop{};
    std::size_t steps = 0;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double max_dt = 0.0;  // 0: unlimited
    double dt0 = 1e-8;
    std::size_t max_steps = 2000000;
};

// Integrates x' = f(t, x) from t0 to t1. out(i, t_i, x) is called for every
// output time reached before the run stops. When event(x) changes sign the
// crossing is located on the dense interpolant and the run stops there.
template <std::size_t K, class Rhs, class Event, class Out>
RunResult<K> integrate(Rhs&& rhs, State<K> x0, double t0, double t1,
                       const std::vector<double>& out_times, Out&& out, Event&& event,
                       const Options& opt = {}) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<State<K>>;
    auto system = [&](const State<K>& x, State<K>& dx, double t) { rhs(t, x, dx); };
    auto dense = opt.max_dt > 0.0
                     ? odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dt, Stepper())
                     : odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Stepper());

    RunResult<K> res;
    std::size_t k = 0;
    while (k < out_times.size() && out_times[k] < t0) ++k;
    while (k < out_times.size() && out_times[k] == t0) {
        out(k, t0, x0);
        ++k;
    }

    auto finite = [](const State<K>& x) {
        for (double v : x)
            if (!std::isfinite(v)) return false;
        return true;
    };

    double ev_prev = event(x0);
    dense.initialize(x0, t0, std::min(opt.dt0, t1 - t0));
    State<K> tmp{};
    try {
        const double t_end = t1 - 1e-14 * std::max(1.0, std::abs(t1));
        while (dense.current_time() < t_end) {
            double rest = t1 - dense.current_time();
            if (dense.current_time_step() > rest)
                dense.initialize(dense.current_state(), dense.current_time(), rest);
            auto [ta, tb] = dense.do_step(system);
            ++res.steps;
            const State<K>& xb = dense.current_state();
            if (!finite(xb) || res.steps > opt.max_steps || tb - ta < 1e-15 * std::max(1.0, std::abs(tb))) {
                res.stop = Stop::failure;
                res.t_stop = ta;
                dense.calc_state(ta, tmp);
                res.x_stop = tmp;
                return res;
            }
            double ev = event(xb);
            if ((ev_prev > 0.0 && ev <= 0.0) || (ev_prev < 0.0 && ev >= 0.0)) {
                double lo = ta, hi = tb;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                    double mid = 0.5 * (lo + hi);
                    dense.calc_state(mid, tmp);
                    double em = event(tmp);
                    bool same = (ev_prev > 0.0) ? em > 0.0 : em < 0.0;
                    (same ? lo : hi) = mid;
                }
                while (k < out_times.size() && out_times[k] <= lo) {
                    dense.calc_state(out_times[k], tmp);
                    out(k, out_times[k], tmp);
                    ++k;
                }
                res.stop = Stop::event;
                res.t_stop = hi;
                dense.calc_state(hi, tmp);
                res.x_stop = tmp;
                return res;
            }
            ev_prev = ev;
            while (k < out_times.size() && out_times[k] <= tb) {
                dense.calc_state(out_times[k], tmp);
                out(k, out_times[k], tmp);
                ++k;
            }
        }
    } catch (const odeint::step_adjustment_error&) {
        res.stop = Stop::failure;
        res.t_stop = dense.current_time();
        res.x_stop = dense.current_state();
        return res;
    }
    while (k < out_times.size() && out_times[k] <= t1) {
        dense.calc_state(out_times[k], tmp);
        out(k, out_times[k], tmp);
        ++k;
    }
    res.stop = Stop::reached_end;
    res.t_stop = t1;
    dense.calc_state(t1, tmp);
    res.x_stop = tmp;
    return res;
}

}  // namespace psing::ode
