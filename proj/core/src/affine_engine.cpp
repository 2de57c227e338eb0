#include "affine_engine.hpp"

#include <algorithm>
#include <cmath>

#include "cnls/errors.hpp"

namespace cnls::detail {

namespace {

struct VecState {
    std::vector<double> u;
    std::vector<double> w;
};

// dw_i = u_i - w(r) (M u)_i - g_i - (d-1)/r w_i, evaluated at fine index f.
void eval_rhs(const LinearSystemSpec& spec, int f, const VecState& s,
              std::vector<double>& du, std::vector<double>& dw) {
    const int k = spec.k;
    const double r = f * spec.h_fine;
    const double wgt = (*spec.weight)[f];
    const double fric = (spec.dim_eff - 1) / r;
    for (int i = 0; i < k; ++i) {
        double coup = 0.0;
        for (int j = 0; j < k; ++j) coup += spec.coupling(i, j) * s.u[j];
        const double src = spec.sources[i] ? (*spec.sources[i])[f] : 0.0;
        du[i] = s.w[i];
        dw[i] = s.u[i] - wgt * coup - src - fric * s.w[i];
    }
}

} // namespace

LinearRun integrate_linear(const LinearSystemSpec& spec, const std::vector<double>& z0) {
    const int k = spec.k;
    const int n = spec.n_coarse;
    const double H = 2.0 * spec.h_fine;

    LinearRun out;
    out.vals.assign(k, std::vector<double>(n + 1, 0.0));
    out.ders.assign(k, std::vector<double>(n + 1, 0.0));
    out.max_abs.assign(k, 0.0);

    VecState s{z0, std::vector<double>(k, 0.0)};
    for (int i = 0; i < k; ++i) {
        out.vals[i][0] = z0[i];
        out.max_abs[i] = std::abs(z0[i]);
    }

    // Taylor start to the first coarse node: Z ~ Z0 + F(0) r^2/(2d).
    {
        std::vector<double> f0(k);
        const double w0 = (*spec.weight)[0];
        for (int i = 0; i < k; ++i) {
            double coup = 0.0;
            for (int j = 0; j < k; ++j) coup += spec.coupling(i, j) * z0[j];
            const double src = spec.sources[i] ? (*spec.sources[i])[0] : 0.0;
            f0[i] = z0[i] - w0 * coup - src;
        }
        for (int i = 0; i < k; ++i) {
            s.u[i] = z0[i] + f0[i] * H * H / (2.0 * spec.dim_eff);
            s.w[i] = f0[i] * H / spec.dim_eff;
        }
    }
    for (int i = 0; i < k; ++i) {
        out.vals[i][1] = s.u[i];
        out.ders[i][1] = s.w[i];
        out.max_abs[i] = std::max(out.max_abs[i], std::abs(s.u[i]));
    }

    std::vector<double> du1(k), dw1(k), du2(k), dw2(k), du3(k), dw3(k), du4(k), dw4(k);
    VecState tmp{std::vector<double>(k), std::vector<double>(k)};

    for (int t = 1; t < n; ++t) {
        const int f = 2 * t; // fine index of the current coarse node
        eval_rhs(spec, f, s, du1, dw1);
        for (int i = 0; i < k; ++i) {
            tmp.u[i] = s.u[i] + 0.5 * H * du1[i];
            tmp.w[i] = s.w[i] + 0.5 * H * dw1[i];
        }
        eval_rhs(spec, f + 1, tmp, du2, dw2);
        for (int i = 0; i < k; ++i) {
            tmp.u[i] = s.u[i] + 0.5 * H * du2[i];
            tmp.w[i] = s.w[i] + 0.5 * H * dw2[i];
        }
        eval_rhs(spec, f + 1, tmp, du3, dw3);
        for (int i = 0; i < k; ++i) {
            tmp.u[i] = s.u[i] + H * du3[i];
            tmp.w[i] = s.w[i] + H * dw3[i];
        }
        eval_rhs(spec, f + 2, tmp, du4, dw4);
        for (int i = 0; i < k; ++i) {
            s.u[i] += H / 6.0 * (du1[i] + 2.0 * du2[i] + 2.0 * du3[i] + du4[i]);
            s.w[i] += H / 6.0 * (dw1[i] + 2.0 * dw2[i] + 2.0 * dw3[i] + dw4[i]);
        }
        for (int i = 0; i < k; ++i) {
            out.vals[i][t + 1] = s.u[i];
            out.ders[i][t + 1] = s.w[i];
            out.max_abs[i] = std::max(out.max_abs[i], std::abs(s.u[i]));
        }
    }
    return out;
}

std::vector<double> weight_power(const GroundState& g, double q) {
    std::vector<double> w(g.profile.values.size());
    for (size_t j = 0; j < w.size(); ++j) w[j] = std::pow(g.profile.values[j], q);
    return w;
}

int default_truncation_index(const GroundState& ground, double level) {
    const int n_coarse = ground.profile.grid.n_steps / 2;
    const double cutoff = level * ground.u0;
    for (int j = 1; j <= n_coarse; ++j) {
        if (std::abs(ground.profile.values[static_cast<size_t>(2) * j]) < cutoff) return j;
    }
    throw numerical_error("ground-state profile does not decay below the truncation level");
}

namespace {

AffineSolution attempt_affine(const GroundState& ground, const std::vector<double>& weight,
                              const Matrix& coupling,
                              const std::vector<std::vector<double>>& sources, int j0,
                              double resonance_tol) {
    const int k = coupling.rows;
    LinearSystemSpec spec;
    spec.k = k;
    spec.dim_eff = ground.dim;
    spec.coupling = coupling;
    spec.weight = &weight;
    spec.h_fine = ground.profile.grid.h();
    spec.n_coarse = j0;
    spec.sources.assign(k, nullptr);

    // k homogeneous runs (unit initial values) without sources.
    std::vector<LinearRun> hom(k);
    for (int j = 0; j < k; ++j) {
        std::vector<double> e(k, 0.0);
        e[j] = 1.0;
        hom[j] = integrate_linear(spec, e);
    }
    // one particular run carrying the sources
    for (int i = 0; i < k; ++i) spec.sources[i] = &sources[i];
    const LinearRun part = integrate_linear(spec, std::vector<double>(k, 0.0));

    Matrix endpoint(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) endpoint(i, j) = hom[j].vals[i][j0];
    double colprod = 1.0;
    for (int j = 0; j < k; ++j) {
        double c = 0.0;
        for (int i = 0; i < k; ++i) c = std::max(c, hom[j].max_abs[i]);
        colprod *= std::max(c, 1e-300);
    }
    if (std::abs(determinant(endpoint)) < resonance_tol * colprod)
        throw numerical_error("resonant truncation radius, perturb r0");

    std::vector<double> rhs(k);
    for (int i = 0; i < k; ++i) rhs[i] = -part.vals[i][j0];
    const std::vector<double> s0 = solve_dense(endpoint, rhs);

    AffineSolution out;
    out.j0 = j0;
    const double H = 2.0 * ground.profile.grid.h();
    out.z.resize(k);
    for (int i = 0; i < k; ++i) {
        RadialProfile p;
        p.grid = RadialGrid{j0 * H, j0};
        p.dim = ground.dim;
        p.values.resize(j0 + 1);
        p.derivs.resize(j0 + 1);
        for (int t = 0; t <= j0; ++t) {
            double v = part.vals[i][t];
            double d = part.ders[i][t];
            for (int j = 0; j < k; ++j) {
                v += s0[j] * hom[j].vals[i][t];
                d += s0[j] * hom[j].ders[i][t];
            }
            p.values[t] = v;
            p.derivs[t] = d;
        }
        out.z[i] = std::move(p);
    }
    return out;
}

} // namespace

AffineSolution solve_affine_system(const GroundState& ground, double weight_exp,
                                   const Matrix& coupling,
                                   const std::vector<std::vector<double>>& sources,
                                   int j0_coarse, double resonance_tol) {
    if (coupling.rows != coupling.cols)
        throw precondition_error("solve_affine_system: coupling must be square");
    if (static_cast<int>(sources.size()) != coupling.rows)
        throw precondition_error("solve_affine_system: need one source per component");
    const int n_coarse = ground.profile.grid.n_steps / 2;
    if (j0_coarse < 8 || j0_coarse > n_coarse)
        throw precondition_error("solve_affine_system: truncation index out of range");

    const std::vector<double> weight = weight_power(ground, weight_exp);
    const int retries[3] = {j0_coarse,
                            std::min(n_coarse, std::max(8, (j0_coarse * 9) / 10)),
                            std::min(n_coarse, std::max(8, (j0_coarse * 11) / 10))};
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            return attempt_affine(ground, weight, coupling, sources, retries[attempt],
                                  resonance_tol);
        } catch (const numerical_error&) {
            if (attempt == 2) throw;
        }
    }
    throw numerical_error("resonant truncation radius, perturb r0");
}

} // namespace cnls::detail
