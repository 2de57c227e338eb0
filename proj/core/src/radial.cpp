#include "cnls/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kBlowupFactor = 10.0;  // |u| > 10*u0 declares divergence
constexpr double kTailCutLevel = 1e-4;  // splice the asymptotic tail below this
constexpr double kBlendWidth = 0.5;     // radial width of the splice blend

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double odd_power(double u, double p) {
    // |u|^{p-1} u : odd extension keeps the flow defined past a zero crossing
    // for non-integer p.
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(u), p), u);
}

struct State {
    double u;
    double w; // u'
};

State rhs(double r, State s, double dim_m1, double p) {
    return {s.w, s.u - odd_power(s.u, p) - dim_m1 / r * s.w};
}

State rk4_step(double r, State s, double h, double dim_m1, double p) {
    const State k1 = rhs(r, s, dim_m1, p);
    const State k2 = rhs(r + 0.5 * h, {s.u + 0.5 * h * k1.u, s.w + 0.5 * h * k1.w}, dim_m1, p);
    const State k3 = rhs(r + 0.5 * h, {s.u + 0.5 * h * k2.u, s.w + 0.5 * h * k2.w}, dim_m1, p);
    const State k4 = rhs(r + h, {s.u + h * k3.u, s.w + h * k3.w}, dim_m1, p);
    return {s.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w)};
}

double simpson_weighted_raw(const std::vector<double>& g, double h) {
    const int n = static_cast<int>(g.size()) - 1;
    if (n < 2) throw precondition_error("simpson: need at least 2 intervals");
    double total = 0.0;
    int n_simpson = n;
    if (n % 2 != 0) n_simpson = n - 3; // close the last 3 intervals with 3/8
    if (n_simpson >= 2) {
        double s = g[0] + g[n_simpson];
        for (int j = 1; j < n_simpson; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * g[j];
        total += s * h / 3.0;
    }
    if (n_simpson != n) {
        total += 3.0 * h / 8.0 *
                 (g[n - 3] + 3.0 * g[n - 2] + 3.0 * g[n - 1] + g[n]);
    }
    return total;
}

} // namespace

RadialGrid RadialGrid::make(double r_max, int n_steps) {
    if (!(r_max > 0.0)) throw precondition_error("RadialGrid: r_max must be positive");
    if (n_steps < 16) throw precondition_error("RadialGrid: need n_steps >= 16");
    return RadialGrid{r_max, n_steps};
}

double RadialProfile::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool RadialProfile::decaying(double tail_tol) const {
    if (values.empty()) return false;
    return std::abs(values.back()) <= tail_tol * max_abs();
}

double surface_area(int dim) {
    using std::numbers::pi;
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        case 4: return 2.0 * pi * pi;
        case 5: return 8.0 * pi * pi / 3.0;
        case 6: return pi * pi * pi;
        case 7: return 16.0 * pi * pi * pi / 15.0;
        case 8: return pi * pi * pi * pi / 3.0;
        default: throw precondition_error("surface_area: dimension must be in 1..8");
    }
}

IvpResult integrate_ivp(int dim, double p, double u0, const RadialGrid& grid) {
    if (dim < 1 || dim > 8) throw precondition_error("integrate_ivp: dimension must be in 1..8");
    if (!(u0 > 0.0)) throw precondition_error("integrate_ivp: u0 must be positive");
    if (!(p > 1.0)) throw precondition_error("integrate_ivp: exponent must exceed 1");

    const double h = grid.h();
    const double dim_m1 = dim - 1;
    const int n = grid.n_steps;
    const double blow = kBlowupFactor * u0;

    std::vector<double> vals;
    std::vector<double> ders;
    vals.reserve(n + 1);
    ders.reserve(n + 1);
    vals.push_back(u0);
    ders.push_back(0.0);

    // Taylor start: u'' (0) = (u0 - u0^p)/N removes the friction singularity.
    const double c0 = (u0 - odd_power(u0, p)) / dim;
    State s{u0 + 0.5 * c0 * h * h, c0 * h};

    IvpOutcome outcome = IvpOutcome::stays_positive;
    double event_radius = grid.r_max;
    int last = 0;

    for (int j = 1; j <= n; ++j) {
        if (j > 1) s = rk4_step(grid.node(j - 1), s, h, dim_m1, p);
        vals.push_back(s.u);
        ders.push_back(s.w);
        last = j;
        if (!std::isfinite(s.u) || !std::isfinite(s.w) || std::abs(s.u) > blow) {
            outcome = IvpOutcome::diverges;
            event_radius = grid.node(j);
            break;
        }
        if (s.u <= 0.0) {
            outcome = IvpOutcome::crosses_zero;
            const double prev = vals[j - 1];
            // linear sub-step localization of the sign change
            const double frac = (prev > 0.0 && prev - s.u > 0.0) ? prev / (prev - s.u) : 1.0;
            event_radius = grid.node(j - 1) + frac * h;
            break;
        }
    }

    IvpResult out;
    out.outcome = outcome;
    out.event_radius = event_radius;
    out.profile.grid = RadialGrid{last * h, last};
    out.profile.values = std::move(vals);
    out.profile.derivs = std::move(ders);
    out.profile.dim = dim;
    return out;
}

namespace {

bool crossing_class(IvpOutcome o) { return o == IvpOutcome::crosses_zero; }

RadialGrid grid_for(double r_max, double h) {
    int n = static_cast<int>(std::lround(r_max / h));
    n = std::max(16, ((n + 3) / 4) * 4); // multiple of 4: keeps half-stride grids Simpson-friendly
    return RadialGrid{n * h, n};
}

// Decaying solution of the far-field equation v'' + (N-1)/r v' = v, obtained
// by integrating backward from r_max (the decaying branch is attracting in
// that direction). Fills v, v' from index j_cut to n.
void backward_linear_tail(int dim, const RadialGrid& grid, int j_cut,
                          std::vector<double>& v, std::vector<double>& dv) {
    const double h = grid.h();
    const double dim_m1 = dim - 1;
    const int n = grid.n_steps;
    v.assign(n + 1, 0.0);
    dv.assign(n + 1, 0.0);
    double r = grid.r_max;
    State s{1.0, -1.0 - dim_m1 / (2.0 * r)};
    v[n] = s.u;
    dv[n] = s.w;
    auto lin_rhs = [&](double rr, State st) -> State {
        return {st.w, st.u - dim_m1 / rr * st.w};
    };
    for (int j = n - 1; j >= j_cut; --j) {
        const double step = -h;
        const State k1 = lin_rhs(r, s);
        const State k2 = lin_rhs(r + 0.5 * step, {s.u + 0.5 * step * k1.u, s.w + 0.5 * step * k1.w});
        const State k3 = lin_rhs(r + 0.5 * step, {s.u + 0.5 * step * k2.u, s.w + 0.5 * step * k2.w});
        const State k4 = lin_rhs(r + step, {s.u + step * k3.u, s.w + step * k3.w});
        s = {s.u + step / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
             s.w + step / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w)};
        r += step;
        v[j] = s.u;
        dv[j] = s.w;
    }
}

// Integrates at the converged u0 and splices the asymptotic decaying tail
// below kTailCutLevel. Raw shooting cannot hold the tail below ~1e-8 of the
// peak in double precision (the growing mode is seeded at the bisection
// resolution), hence the splice.
RadialProfile build_decaying_profile(int dim, double p, double u0, const RadialGrid& grid) {
    IvpResult run = integrate_ivp(dim, p, u0, grid);
    const int n = grid.n_steps;
    const double h = grid.h();

    std::vector<double> vals(n + 1, 0.0);
    std::vector<double> ders(n + 1, 0.0);
    const int filled = run.profile.grid.n_steps;
    for (int j = 0; j <= filled; ++j) {
        vals[j] = run.profile.values[j];
        ders[j] = run.profile.derivs[j];
    }

    int j_cut = -1;
    for (int j = 1; j <= filled; ++j) {
        if (vals[j] > 0.0 && vals[j] <= kTailCutLevel && ders[j] < 0.0) {
            j_cut = j;
            break;
        }
    }
    if (j_cut < 0) {
        // Tail never reached the splice level (short grid); return as computed.
        RadialProfile prof;
        prof.grid = grid;
        prof.values = std::move(vals);
        prof.derivs = std::move(ders);
        prof.dim = dim;
        if (filled < n) throw numerical_error("ground-state profile lost positivity before r_max");
        return prof;
    }

    std::vector<double> tail_v, tail_dv;
    backward_linear_tail(dim, grid, j_cut, tail_v, tail_dv);
    const double scale = vals[j_cut] / tail_v[j_cut];

    int j_blend_end = j_cut + static_cast<int>(std::lround(kBlendWidth / h));
    j_blend_end = std::min({j_blend_end, filled, n});

    for (int j = j_cut; j <= n; ++j) {
        const double up = scale * tail_v[j];
        const double dup = scale * tail_dv[j];
        if (j <= j_blend_end && j_blend_end > j_cut) {
            const double t = static_cast<double>(j - j_cut) / (j_blend_end - j_cut);
            const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
            const double ds_dr = 30.0 * t * t * (1.0 - t) * (1.0 - t) /
                                 ((j_blend_end - j_cut) * h);
            const double uc = vals[j];
            const double duc = ders[j];
            vals[j] = (1.0 - s) * uc + s * up;
            ders[j] = (1.0 - s) * duc + s * dup + ds_dr * (up - uc);
        } else {
            vals[j] = up;
            ders[j] = dup;
        }
    }

    RadialProfile prof;
    prof.grid = grid;
    prof.values = std::move(vals);
    prof.derivs = std::move(ders);
    prof.dim = dim;
    return prof;
}

} // namespace

GroundState shoot_ground_state(int dim, double p, const ShootOptions& opts) {
    if (dim < 1 || dim > 8) throw precondition_error("shoot_ground_state: dimension must be in 1..8");
    if (!(p > 1.0)) throw precondition_error("shoot_ground_state: exponent must exceed 1");
    if (dim >= 3) {
        const double p_crit = static_cast<double>(dim + 2) / (dim - 2);
        if (!(p < p_crit))
            throw precondition_error("shoot_ground_state: supercritical exponent for N=" +
                                     std::to_string(dim));
    }
    if (!(opts.tol > 0.0)) throw precondition_error("shoot_ground_state: tol must be positive");

    const RadialGrid bisect_grid = grid_for(opts.r_max_init, opts.h);
    auto classify = [&](double u0) {
        return integrate_ivp(dim, p, u0, bisect_grid).outcome;
    };

    // Bracket: naive [u0_min, 10], then a 0.5-spaced upward scan.
    double lo = opts.u0_min;
    if (crossing_class(classify(lo)))
        throw numerical_error("no ground-state bracket: lower endpoint already crosses");
    double hi = 10.0;
    if (!crossing_class(classify(std::min(hi, opts.u0_max)))) {
        bool found = false;
        for (double c = std::min(hi, opts.u0_max) + 0.5; c <= opts.u0_max; c += 0.5) {
            if (crossing_class(classify(c))) {
                hi = c;
                lo = c - 0.5;
                found = true;
                break;
            }
        }
        if (!found) throw numerical_error("no ground-state bracket in [1+1e-6, u0_max]");
    }

    // Bisect to floating-point stall; opts.tol is only an upper bound on the
    // final width (the tail splice wants the sharpest separatrix available).
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (crossing_class(classify(mid)))
            hi = mid;
        else
            lo = mid;
    }
    if (hi - lo > opts.tol)
        throw numerical_error("ground-state bisection stalled above requested tolerance");
    const double u0 = 0.5 * (lo + hi);

    double r_max = bisect_grid.r_max;
    RadialProfile prof;
    for (;;) {
        prof = build_decaying_profile(dim, p, u0, grid_for(r_max, opts.h));
        if (!opts.adapt_r_max) break;
        if (prof.values.back() <= opts.tail_tol * u0) break;
        if (r_max > 1.0e4)
            throw numerical_error("tail tolerance unreachable while enlarging r_max");
        r_max *= 2.0;
    }

    GroundState g;
    g.dim = dim;
    g.p = p;
    g.u0 = u0;

    RadialProfile squared;
    squared.grid = prof.grid;
    squared.dim = dim;
    squared.values.resize(prof.values.size());
    for (size_t j = 0; j < prof.values.size(); ++j)
        squared.values[j] = prof.values[j] * prof.values[j];
    g.radial_mass = radial_quadrature(squared, 0);
    g.gamma = surface_area(dim) * g.radial_mass;
    g.gamma_tilde = surface_area(dim) * radial_quadrature(squared, 2);
    g.profile = std::move(prof);
    return g;
}

double radial_quadrature(const RadialProfile& f, int weight_power) {
    const int n = f.grid.n_steps;
    const double h = f.grid.h();
    const int pw = f.dim - 1 + weight_power;
    if (pw < 0) throw precondition_error("radial_quadrature: negative weight exponent");
    std::vector<double> g(n + 1);
    for (int j = 0; j <= n; ++j) g[j] = f.values[j] * ipow(j * h, pw);
    return simpson_weighted_raw(g, h);
}

double radial_quadrature_product(const RadialProfile& a, const RadialProfile& b,
                                 int weight_power, int stride_a) {
    const int n = b.grid.n_steps;
    const double h = b.grid.h();
    if (static_cast<int>(a.values.size()) < n * stride_a + 1)
        throw precondition_error("radial_quadrature_product: grids not aligned");
    if (std::abs(a.grid.h() * stride_a - h) > 1e-12 * h)
        throw precondition_error("radial_quadrature_product: step mismatch");
    const int pw = b.dim - 1 + weight_power;
    if (pw < 0) throw precondition_error("radial_quadrature_product: negative weight exponent");
    std::vector<double> g(n + 1);
    for (int j = 0; j <= n; ++j)
        g[j] = a.values[static_cast<size_t>(j) * stride_a] * b.values[j] * ipow(j * h, pw);
    return simpson_weighted_raw(g, h);
}

} // namespace cnls
