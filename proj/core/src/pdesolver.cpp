#include "psing/pdesolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "pde_detail.hpp"

namespace psing::pde {

std::string to_string(BoundaryMode m) {
    switch (m) {
        case BoundaryMode::weak: return "weak";
        case BoundaryMode::strong: return "strong";
        case BoundaryMode::flat: return "flat";
    }
    return "?";
}

BoundaryMode boundary_mode_from_string(const std::string& s) {
    if (s == "weak") return BoundaryMode::weak;
    if (s == "strong") return BoundaryMode::strong;
    if (s == "flat") return BoundaryMode::flat;
    throw DomainError("unknown boundary mode: " + s);
}

PolarGrid PolarGrid::make(int N, double eps, int n_r, int n_theta) {
    if (N < 2) throw DomainError("grid needs N >= 2");
    if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("grid needs 0 < eps < 1");
    if (n_r < 16 || n_theta < 16) throw DomainError("grid needs n_r, n_theta >= 16");
    PolarGrid g;
    g.N = N;
    g.eps = eps;
    const double s0 = std::log(eps);
    g.hs = -s0 / (n_r - 1);
    g.r.resize(n_r);
    for (int i = 0; i < n_r; ++i) g.r[i] = std::exp(s0 + g.hs * i);
    g.r.back() = 1.0;
    g.htheta = 0.5 * std::numbers::pi / (n_theta - 1);
    g.theta.resize(n_theta);
    for (int j = 0; j < n_theta; ++j) g.theta[j] = g.htheta * j;
    g.theta.back() = 0.5 * std::numbers::pi;
    return g;
}

double BoundaryData::inner_value(double eps, double th) const {
    if (th >= 0.5 * std::numbers::pi - 1e-14) return 0.0;
    switch (mode) {
        case BoundaryMode::weak:
        case BoundaryMode::strong:
            return std::max(0.0, amplitude * std::pow(eps, -exponent) * profile.eval(th));
        case BoundaryMode::flat:
            return amplitude;
    }
    return 0.0;
}

BoundaryData weak_data(const AzimuthalProfile& psi_star, double k) {
    if (!(k > 0.0)) throw DomainError("weak data needs k > 0");
    return {BoundaryMode::weak, k, psi_star.beta, psi_star};
}

BoundaryData strong_data(const AzimuthalProfile& omega_star, double A) {
    if (!(A > 0.0)) throw DomainError("strong data needs A > 0");
    return {BoundaryMode::strong, A, omega_star.beta, omega_star};
}

BoundaryData flat_data(double A, double beta_q) {
    if (!(A > 0.0)) throw DomainError("flat data needs A > 0");
    BoundaryData d;
    d.mode = BoundaryMode::flat;
    d.amplitude = A;
    d.exponent = beta_q;
    return d;
}

namespace detail {

Geometry::Geometry(const PolarGrid& g) {
    const int nr = g.n_r(), nt = g.n_theta();
    const int N = g.N;
    const double half_pi = 0.5 * std::numbers::pi;
    auto w = [N](double th) { return N == 2 ? 1.0 : std::pow(std::sin(th), N - 2); };

    S.resize(nt);
    for (int j = 0; j < nt; ++j) {
        const double lo = std::max(0.0, g.theta[j] - 0.5 * g.htheta);
        const double hi = std::min(half_pi, g.theta[j] + 0.5 * g.htheta);
        constexpr int m = 8;
        const double h = (hi - lo) / m;
        double acc = w(lo) + w(hi);
        for (int k = 1; k < m; ++k) acc += (k % 2 ? 4.0 : 2.0) * w(lo + k * h);
        S[j] = acc * h / 3.0;
    }
    sin_face.resize(nt - 1);
    for (int j = 0; j + 1 < nt; ++j) sin_face[j] = w(0.5 * (g.theta[j] + g.theta[j + 1]));

    rf.resize(nr - 1);
    for (int i = 0; i + 1 < nr; ++i) rf[i] = std::sqrt(g.r[i] * g.r[i + 1]);

    auto int_pow = [&](int k, double a, double b) {
        // ∫ r^k ds over [ln a, ln b]
        return k == 0 ? std::log(b / a) : (std::pow(b, k) - std::pow(a, k)) / k;
    };
    vol_r.resize(nr);
    ang_r.resize(nr);
    const double e = std::exp(0.5 * g.hs);
    for (int i = 0; i < nr; ++i) {
        const double a = g.r[i] / e, b = g.r[i] * e;
        vol_r[i] = int_pow(N, a, b);
        ang_r[i] = int_pow(N - 2, a, b);
    }
}

double d_s(const PolarGrid& g, const std::vector<double>& u, int i, int j) {
    const int nr = g.n_r();
    if (i == 0) return (u[g.index(1, j)] - u[g.index(0, j)]) / g.hs;
    if (i == nr - 1) return (u[g.index(nr - 1, j)] - u[g.index(nr - 2, j)]) / g.hs;
    return (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) / (2.0 * g.hs);
}

double d_theta(const PolarGrid& g, const std::vector<double>& u, int i, int j) {
    const int nt = g.n_theta();
    if (j == 0) return 0.0;
    if (j == nt - 1) return (u[g.index(i, nt - 1)] - u[g.index(i, nt - 2)]) / g.htheta;
    return (u[g.index(i, j + 1)] - u[g.index(i, j - 1)]) / (2.0 * g.htheta);
}

double radial_face_grad2(const PolarGrid& g, const Geometry& geo, const std::vector<double>& u, int i,
                         int j) {
    const double r = geo.rf[i];
    const double gr = (u[g.index(i + 1, j)] - u[g.index(i, j)]) / (g.hs * r);
    const double gt = 0.5 * (d_theta(g, u, i, j) + d_theta(g, u, i + 1, j)) / r;
    return gr * gr + gt * gt;
}

double angular_face_grad2(const PolarGrid& g, const std::vector<double>& u, int i, int j) {
    const double r = g.r[i];
    const double gt = (u[g.index(i, j + 1)] - u[g.index(i, j)]) / (g.htheta * r);
    const double gr = 0.5 * (d_s(g, u, i, j) + d_s(g, u, i, j + 1)) / r;
    return gr * gr + gt * gt;
}

std::vector<double> shell_scale(const PolarGrid& g, const std::vector<double>& u) {
    const int nr = g.n_r(), nt = g.n_theta();
    std::vector<double> s(nr, 0.0);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) s[i] = std::max(s[i], std::abs(u[g.index(i, j)]));
    for (int i = nr - 1; i >= 0; --i)
        if (!(s[i] > 0.0)) s[i] = i + 1 < nr ? s[i + 1] : 0.0;
    for (int i = 1; i < nr; ++i)
        if (!(s[i] > 0.0)) s[i] = s[i - 1];
    for (double& v : s)
        if (!(v > 0.0)) v = 1.0;
    return s;
}

}  // namespace detail

namespace {

using detail::Geometry;

bool is_dirichlet(const PolarGrid& g, int i, int j) {
    return i == 0 || i == g.n_r() - 1 || j == g.n_theta() - 1;
}

std::vector<double> initial_guess(const PolarGrid& g, const BoundaryData& data) {
    const int nr = g.n_r(), nt = g.n_theta();
    std::vector<double> u(g.size(), 0.0);
    const double b = data.exponent > 0.0 ? data.exponent : 1.0;
    const double eps = g.eps;
    for (int i = 0; i < nr; ++i) {
        const double r = g.r[i];
        const double radial = (std::pow(r, -b) - 1.0) / (std::pow(eps, -b) - 1.0);
        for (int j = 0; j < nt; ++j) {
            const double th = g.theta[j];
            double v = 0.0;
            if (i == 0) {
                v = data.inner_value(eps, th);
            } else if (i < nr - 1 && j < nt - 1) {
                switch (data.mode) {
                    case BoundaryMode::weak:
                        v = data.inner_value(eps, th) * radial;
                        break;
                    case BoundaryMode::strong: {
                        // A decays to 1 within a few ε.
                        const double lift = 1.0 + (data.amplitude - 1.0) * std::pow(eps / r, 8.0);
                        v = data.inner_value(eps, th) / data.amplitude * radial * lift;
                        break;
                    }
                    case BoundaryMode::flat:
                        v = data.amplitude * radial * std::cos(th);
                        break;
                }
            }
            u[g.index(i, j)] = std::max(0.0, v);
        }
    }
    return u;
}

struct Entry {
    std::size_t col;
    double val;
};

}  // namespace

PolarField solve_steady(const PolarGrid& grid, const BoundaryData& data, const ProblemParams& pp,
                        const SolveOptions& opt) {
    pp.validate_with_q();
    if (!(opt.reg_delta > 0.0)) throw DomainError("reg_delta must be positive");
    if (!(opt.damping > 0.0) || opt.damping > 1.0) throw DomainError("damping must be in (0, 1]");
    if (opt.max_iter < 1 || !(opt.tol > 0.0)) throw DomainError("max_iter and tol must be positive");
    if (data.mode != BoundaryMode::flat && data.profile.size() < 2)
        throw DomainError("weak and strong data need a profile");

    const double p = pp.p, q = *pp.q;
    const int nr = grid.n_r(), nt = grid.n_theta();
    const std::size_t n = grid.size();
    const Geometry geo(grid);

    PolarField field;
    field.grid = grid;
    field.mode = data.mode;
    field.reg_delta = opt.reg_delta;
    field.u = initial_guess(grid, data);
    std::vector<double>& u = field.u;
    SolverStats& st = field.stats;

    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n)), sol;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(6 * n);
    std::vector<Entry> row;
    std::vector<double> unew(n), delta(nr);

    std::vector<double> history;
    double sigma = 0.0;  // pseudo-transient weight relative to the diagonal
    double prev_upd = 1e300;

    for (int it = 1; it <= opt.max_iter; ++it) {
        const std::vector<double> scale = detail::shell_scale(grid, u);
        for (int i = 0; i < nr; ++i) delta[i] = opt.reg_delta * scale[i] / grid.r[i];
        st.delta_min = *std::min_element(delta.begin(), delta.end());
        st.delta_max = *std::max_element(delta.begin(), delta.end());

        trip.clear();
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nt; ++j) {
                const std::size_t P = grid.index(i, j);
                if (is_dirichlet(grid, i, j)) {
                    trip.emplace_back(P, P, 1.0);
                    rhs[P] = (i == 0 ? data.inner_value(grid.eps, grid.theta[j]) : 0.0) / scale[i];
                    continue;
                }
                row.clear();
                double diag = 0.0;
                // T[0..1]: radial faces toward i-1, i+1; T[2..3]: angular faces toward j-1, j+1
                double T[4] = {0.0, 0.0, 0.0, 0.0};
                const std::size_t nb[4] = {grid.index(i - 1, j), grid.index(i + 1, j),
                                           j > 0 ? grid.index(i, j - 1) : P, grid.index(i, j + 1)};
                for (int side = 0; side < 2; ++side) {
                    const int f = side == 0 ? i - 1 : i;
                    const double d = 0.5 * (delta[f] + delta[f + 1]);
                    const double a = std::pow(detail::radial_face_grad2(grid, geo, u, f, j) + d * d,
                                              0.5 * (p - 2.0));
                    T[side] = a * std::pow(geo.rf[f], grid.N - 2) * geo.S[j] / grid.hs;
                }
                for (int side = 0; side < 2; ++side) {
                    const int f = side == 0 ? j - 1 : j;
                    if (f < 0) continue;  // no flux through the axis
                    const double d = delta[i];
                    const double a =
                        std::pow(detail::angular_face_grad2(grid, u, i, f) + d * d, 0.5 * (p - 2.0));
                    T[2 + side] = a * geo.sin_face[f] * geo.ang_r[i] / grid.htheta;
                }
                for (int k = 0; k < 4; ++k) {
                    if (k == 2 && j == 0) continue;
                    diag += T[k];
                    row.push_back({nb[k], -T[k]});
                }

                const double vol = geo.vol_r[i] * geo.S[j];
                if (opt.absorption) {
                    // b·∇u with b = (|g|²+δ²)^{q/2} g/|g|², g the centered gradient of the iterate
                    const double r = grid.r[i];
                    const double gr = detail::d_s(grid, u, i, j) / r;
                    const double gt = detail::d_theta(grid, u, i, j) / r;
                    const double g2 = gr * gr + gt * gt;
                    const double d = delta[i];
                    const double c = g2 > 0.0 ? std::pow(g2 + d * d, 0.5 * q) / g2 : 0.0;
                    auto convect = [&](double bcomp, double h, int lo, int hi) {
                        // centered while the row stays an M-matrix, upwind otherwise
                        const double k = vol * bcomp / (h * r);
                        if (opt.central_absorption && 0.5 * std::abs(k) <= std::min(T[lo], T[hi])) {
                            row.push_back({nb[hi], 0.5 * k});
                            row.push_back({nb[lo], -0.5 * k});
                        } else {
                            diag += std::abs(k);
                            row.push_back({nb[k < 0.0 ? hi : lo], -std::abs(k)});
                        }
                    };
                    convect(c * gr, grid.hs, 0, 1);
                    if (j > 0) convect(c * gt, grid.htheta, 2, 3);
                }
                double b = 0.0;
                if (sigma > 0.0) {
                    const double extra = sigma * diag;
                    diag += extra;
                    b = extra * u[P];
                }
                // unit diagonal after row and column scaling
                const double inv = 1.0 / (diag * scale[i]);
                trip.emplace_back(P, P, 1.0);
                for (const Entry& e : row) {
                    const int ie = static_cast<int>(e.col / nt);
                    trip.emplace_back(P, e.col, e.val * scale[ie] * inv);
                }
                rhs[P] = b * inv;
            }
        }
        A.setFromTriplets(trip.begin(), trip.end());
        if (!analyzed) {
            lu.analyzePattern(A);
            analyzed = true;
        }
        lu.factorize(A);
        if (lu.info() != Eigen::Success) throw SolverError("sparse factorization failed: " + lu.lastErrorMessage());
        sol = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw SolverError("sparse solve failed");

        double upd = 0.0;
        for (int i = 0; i < nr; ++i) {
            double shell_max = 0.0, shell_du = 0.0;
            for (int j = 0; j < nt; ++j) {
                const std::size_t P = grid.index(i, j);
                double v = sol[P] * scale[i];
                if (!is_dirichlet(grid, i, j)) v = u[P] + opt.damping * (v - u[P]);
                if (!std::isfinite(v)) throw SolverError("non-finite iterate");
                if (v < 0.0) {
                    ++st.clamp_events;
                    v = 0.0;
                }
                unew[P] = v;
                shell_max = std::max(shell_max, std::abs(v));
                shell_du = std::max(shell_du, std::abs(v - u[P]));
            }
            if (i > 0 && i < nr - 1 && shell_max > 0.0) upd = std::max(upd, shell_du / shell_max);
        }
        u.swap(unew);
        st.iterations = it;
        st.final_update = upd;
        if (sigma > 0.0) ++st.ptc_iterations;
        if (upd < opt.tol) {
            st.converged = true;
            break;
        }

        if (sigma > 0.0) {
            sigma = upd < prev_upd ? 0.5 * sigma : std::min(1e3, 2.0 * sigma);
            if (sigma < 1e-3) {
                sigma = 0.0;
                history.clear();
            }
        } else {
            history.push_back(upd);
            const int w = opt.stall_window;
            if (static_cast<int>(history.size()) > w) {
                const double best_before = *std::min_element(history.begin(), history.end() - w);
                const double recent = *std::min_element(history.end() - w, history.end());
                if (recent > 0.9 * best_before) {
                    sigma = 1.0;
                    history.clear();
                }
            }
        }
        prev_upd = upd;
    }
    return field;
}

std::vector<double> discrete_residual(const PolarGrid& grid, const std::vector<double>& u,
                                      const ProblemParams& pp, double delta, std::vector<double>* scale) {
    pp.validate_with_q();
    if (u.size() != grid.size()) throw DomainError("field size does not match grid");
    const double p = pp.p, q = *pp.q;
    const int nr = grid.n_r(), nt = grid.n_theta();
    const Geometry geo(grid);
    std::vector<double> res(grid.size(), 0.0);
    if (scale) scale->assign(grid.size(), 0.0);
    const double d2 = delta * delta;
    for (int i = 1; i + 1 < nr; ++i) {
        for (int j = 0; j + 1 < nt; ++j) {
            const std::size_t P = grid.index(i, j);
            double div = 0.0, mag = 0.0;
            for (int side = -1; side <= 1; side += 2) {
                const int f = side < 0 ? i - 1 : i;
                const double a = std::pow(detail::radial_face_grad2(grid, geo, u, f, j) + d2, 0.5 * (p - 2.0));
                const double T = a * std::pow(geo.rf[f], grid.N - 2) * geo.S[j] / grid.hs;
                const double flux = T * (u[P] - u[grid.index(i + side, j)]);
                div += flux;
                mag += std::abs(flux);
            }
            for (int side = -1; side <= 1; side += 2) {
                const int f = side < 0 ? j - 1 : j;
                if (f < 0) continue;
                const double a = std::pow(detail::angular_face_grad2(grid, u, i, f) + d2, 0.5 * (p - 2.0));
                const double T = a * geo.sin_face[f] * geo.ang_r[i] / grid.htheta;
                const double flux = T * (u[P] - u[grid.index(i, j + side)]);
                div += flux;
                mag += std::abs(flux);
            }
            const double vol = geo.vol_r[i] * geo.S[j];
            const double r = grid.r[i];
            const double gr = detail::d_s(grid, u, i, j) / r;
            const double gt = detail::d_theta(grid, u, i, j) / r;
            const double absorb = std::pow(gr * gr + gt * gt + d2, 0.5 * q);
            res[P] = div / vol + absorb;
            if (scale) (*scale)[P] = mag / vol + absorb;
        }
    }
    return res;
}

void write_field_csv(std::ostream& os, const PolarField& f) {
    const auto old = os.precision(17);
    os << "r,theta,u\n";
    for (int i = 0; i < f.grid.n_r(); ++i)
        for (int j = 0; j < f.grid.n_theta(); ++j)
            os << f.grid.r[i] << ',' << f.grid.theta[j] << ',' << f.at(i, j) << '\n';
    os.precision(old);
}

void write_field_csv(const std::string& path, const PolarField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_field_csv(os, f);
}

}  // namespace psing::pde
