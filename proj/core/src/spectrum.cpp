#include "cnls/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "affine_engine.hpp"
#include "cnls/errors.hpp"

namespace cnls {

namespace {

constexpr double kLambdaTol = 1e-8; // absolute bisection tolerance on lambda

struct Shot {
    std::vector<double> vals; // phi at coarse nodes
    std::vector<double> ders;
    int nodes = 0;       // interior sign changes
    double endpoint = 0; // phi(r_max)
};

struct SectorContext {
    const GroundState* g;
    std::vector<double> weight; // U^2 on the fine grid
    int dim_eff;
    int n_coarse;
};

SectorContext make_context(const GroundState& g, int sector) {
    if (sector < 0) throw precondition_error("spectrum: sector index must be >= 0");
    if (std::abs(g.p - 3.0) > 1e-12)
        throw precondition_error("spectrum: the weighted problem is defined at p = 3");
    SectorContext ctx;
    ctx.g = &g;
    ctx.weight = detail::weight_power(g, 2.0);
    ctx.dim_eff = g.dim + 2 * sector;
    ctx.n_coarse = detail::default_truncation_index(g, 1e-10);
    return ctx;
}

Shot shoot(const SectorContext& ctx, double lambda) {
    detail::LinearSystemSpec spec;
    spec.k = 1;
    spec.dim_eff = ctx.dim_eff;
    spec.coupling = Matrix(1, 1);
    spec.coupling(0, 0) = lambda;
    spec.weight = &ctx.weight;
    spec.sources.assign(1, nullptr);
    spec.h_fine = ctx.g->profile.grid.h();
    spec.n_coarse = ctx.n_coarse;

    detail::LinearRun run = detail::integrate_linear(spec, {1.0});
    Shot s;
    s.vals = std::move(run.vals[0]);
    s.ders = std::move(run.ders[0]);
    s.endpoint = s.vals.back();
    for (size_t j = 0; j + 1 < s.vals.size(); ++j)
        if (s.vals[j] * s.vals[j + 1] < 0.0) ++s.nodes;
    return s;
}

// One eigenvalue: bracket where the node count jumps past m, then refine on
// the endpoint sign (it flips exactly at the Dirichlet eigenvalue).
double find_eigenvalue(const SectorContext& ctx, int m, double lo, double hi) {
    double a = lo, b = hi;
    while (b - a > 1e-4) {
        const double mid = 0.5 * (a + b);
        if (shoot(ctx, mid).nodes >= m)
            b = mid;
        else
            a = mid;
    }
    Shot sa = shoot(ctx, a);
    Shot sb = shoot(ctx, b);
    if (sa.endpoint * sb.endpoint >= 0.0) {
        // count jumped by more than one inside the slab; fall back to pure
        // count bisection
        while (b - a > kLambdaTol) {
            const double mid = 0.5 * (a + b);
            if (shoot(ctx, mid).nodes >= m)
                b = mid;
            else
                a = mid;
        }
        return 0.5 * (a + b);
    }
    double ea = sa.endpoint, eb = sb.endpoint;
    while (b - a > kLambdaTol) {
        double cand = b - eb * (b - a) / (eb - ea); // secant
        const double margin = 0.1 * (b - a);
        if (!(cand > a + margin && cand < b - margin)) cand = 0.5 * (a + b);
        const double ec = shoot(ctx, cand).endpoint;
        if (ec * ea <= 0.0) {
            b = cand;
            eb = ec;
        } else {
            a = cand;
            ea = ec;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

SectorSpectrum sector_eigenvalues(const SpectralQuery& query) {
    if (query.how_many < 1) throw precondition_error("spectrum: how_many must be >= 1");
    if (!(query.lambda_max > 0.0))
        throw precondition_error("spectrum: lambda_max must be positive");
    SectorContext ctx = make_context(query.ground, query.sector);

    const int available = shoot(ctx, query.lambda_max).nodes;
    const int take = std::min(query.how_many, available);

    SectorSpectrum out;
    out.complete = available >= query.how_many;
    double lo = 0.0;
    for (int m = 1; m <= take; ++m) {
        const double lambda = find_eigenvalue(ctx, m, lo, query.lambda_max);
        out.lambdas.push_back(lambda);
        lo = lambda;
    }
    return out;
}

RadialProfile sector_eigenfunction(const GroundState& ground, int sector, double lambda) {
    SectorContext ctx = make_context(ground, sector);
    Shot s = shoot(ctx, lambda);

    const double H = 2.0 * ground.profile.grid.h();
    const int n = ctx.n_coarse;
    RadialProfile psi;
    psi.grid = RadialGrid{n * H, n};
    psi.dim = ground.dim;
    psi.values.resize(n + 1);
    psi.derivs.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double r = j * H;
        const double rl = (sector == 0) ? 1.0 : std::pow(r, sector);
        const double rlm1 = (sector == 0) ? 0.0 : sector * std::pow(r, sector - 1);
        psi.values[j] = rl * s.vals[j];
        psi.derivs[j] = rl * s.ders[j] + rlm1 * s.vals[j];
    }
    const double scale = psi.max_abs();
    if (scale > 0.0) {
        for (auto& v : psi.values) v /= scale;
        for (auto& d : psi.derivs) d /= scale;
    }
    return psi;
}

std::vector<SpectralLine> merged_spectrum(const GroundState& ground, int sector_max,
                                          double lambda_max) {
    if (sector_max < 1) throw precondition_error("merged_spectrum: sector_max must be >= 1");
    std::vector<SpectralLine> lines;
    for (int l = 0; l <= sector_max; ++l) {
        SectorContext ctx = make_context(ground, l);
        const int available = shoot(ctx, lambda_max).nodes;
        double lo = 0.0;
        for (int m = 1; m <= available; ++m) {
            const double lambda = find_eigenvalue(ctx, m, lo, lambda_max);
            lines.push_back({lambda, l});
            lo = lambda;
        }
    }
    std::sort(lines.begin(), lines.end(),
              [](const SpectralLine& x, const SpectralLine& y) { return x.lambda < y.lambda; });
    std::vector<SpectralLine> merged;
    for (const auto& ln : lines) {
        if (!merged.empty() && std::abs(ln.lambda - merged.back().lambda) <= 1e-6) continue;
        merged.push_back(ln);
    }
    return merged;
}

} // namespace cnls
