#include "cnls/linearized.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "affine_engine.hpp"
#include "cnls/errors.hpp"

namespace cnls {

namespace {

int coarse_index_for_radius(const GroundState& g, double r0) {
    const double H = 2.0 * g.profile.grid.h();
    const int n_coarse = g.profile.grid.n_steps / 2;
    const int j = static_cast<int>(std::lround(r0 / H));
    if (j < 8 || j > n_coarse)
        throw precondition_error("linearized solve: r0 outside the ground grid");
    return j;
}

} // namespace

double default_r0(const GroundState& ground) {
    const int j = detail::default_truncation_index(ground, 1e-10);
    return j * 2.0 * ground.profile.grid.h();
}

RadialProfile quadratic_source(const GroundState& ground) {
    RadialProfile src;
    src.grid = ground.profile.grid;
    src.dim = ground.dim;
    src.values.resize(ground.profile.values.size());
    const double h = src.grid.h();
    for (size_t j = 0; j < src.values.size(); ++j) {
        const double r = static_cast<double>(j) * h;
        src.values[j] = r * r * ground.profile.values[j];
    }
    return src;
}

RadialProfile solve_linearized_affine(const LinearizedProblem& problem) {
    const GroundState& g = problem.ground;
    if (problem.source.values.size() != g.profile.values.size())
        throw precondition_error("linearized solve: source not on the ground grid");
    const int j0 = coarse_index_for_radius(g, problem.r0);

    Matrix coupling(1, 1);
    coupling(0, 0) = problem.coefficient_q;
    std::vector<std::vector<double>> sources(1, problem.source.values);
    auto sol = detail::solve_affine_system(g, g.p - 1.0, coupling, sources, j0,
                                           problem.resonance_tol);
    return std::move(sol.z[0]);
}

AlphaPoint compute_alpha(int dim, double p, const ShootOptions& opts) {
    const GroundState g = shoot_ground_state(dim, p, opts);
    const RadialProfile src = quadratic_source(g);
    const RadialProfile s =
        solve_linearized_affine({g, p, src, default_r0(g)});

    AlphaPoint out;
    out.dim = dim;
    out.p = p;
    out.alpha_radial = radial_quadrature_product(g.profile, s, 0, 2);
    out.alpha_full = surface_area(dim) * out.alpha_radial;
    return out;
}

std::vector<SweepEntry> sweep_alpha(int dim, double p_min, double p_max, int n_points,
                                    const ShootOptions& opts, int threads) {
    if (n_points <= 0) return {};
    if (!(p_min > 1.0) || p_min > p_max)
        throw precondition_error("sweep_alpha: need 1 < p_min <= p_max");

    std::vector<SweepEntry> entries(n_points);
    for (int i = 0; i < n_points; ++i) {
        entries[i].p = (n_points == 1)
                           ? p_min
                           : p_min + (p_max - p_min) * i / (n_points - 1);
    }

    auto run_point = [&](int i) {
        try {
            entries[i].point = compute_alpha(dim, entries[i].p, opts);
        } catch (const std::exception& e) {
            entries[i].error = e.what();
        }
    };

    const int workers = std::min(threads, n_points);
    if (workers <= 1) {
        for (int i = 0; i < n_points; ++i) run_point(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_points; i = next.fetch_add(1))
                    run_point(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return entries;
}

void write_alpha_tsv(std::ostream& os, int dim, const std::vector<SweepEntry>& entries,
                     const std::string& config_line) {
    char buf[128];
    os << "# " << config_line << "\n";
    for (const auto& e : entries) {
        if (e.point) {
            std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", e.p, e.point->alpha_radial);
            os << buf;
        } else {
            std::snprintf(buf, sizeof buf, "# skip p=%.17g %s\n", e.p,
                          e.error.empty() ? "failed" : e.error.c_str());
            os << buf;
        }
    }
    (void)dim;
}

RadialProfile closed_form_z(const GroundState& ground, double c) {
    if (!ground.profile.has_derivs())
        throw precondition_error("closed_form_z: ground profile lacks the derivative channel");
    RadialProfile z;
    z.grid = ground.profile.grid;
    z.dim = ground.dim;
    z.values.resize(ground.profile.values.size());
    const double h = z.grid.h();
    for (size_t j = 0; j < z.values.size(); ++j) {
        const double r = static_cast<double>(j) * h;
        z.values[j] = -0.5 * c * (ground.profile.values[j] + r * ground.profile.derivs[j]);
    }
    return z;
}

RadialProfile solve_z0(const GroundState& ground) {
    if (ground.dim != 2 || std::abs(ground.p - 3.0) > 1e-12)
        throw precondition_error("solve_z0: requires the N=2, p=3 ground state");
    const RadialProfile src = quadratic_source(ground);
    return solve_linearized_affine({ground, 3.0, src, default_r0(ground)});
}

} // namespace cnls
