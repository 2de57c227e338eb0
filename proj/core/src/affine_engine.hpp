#ifndef CNLS_AFFINE_ENGINE_HPP
#define CNLS_AFFINE_ENGINE_HPP

// Internal engine for linear radial systems of the form
//
//   Z_i'' + (d-1)/r Z_i' = Z_i - w(r) (M Z)_i - g_i(r),   i = 1..k,
//
// where w(r) = U(r)^q is sampled on the ground state's fine grid. The
// integrator steps on a coarse grid of twice the fine step so that RK4 stage
// points land exactly on fine nodes. Endpoint conditions Z(r0) = 0 are
// enforced by the affine method: k homogeneous runs plus one particular run,
// then a k-by-k solve for the initial values.

#include <vector>

#include "cnls/linalg.hpp"
#include "cnls/radial.hpp"

namespace cnls::detail {

struct LinearSystemSpec {
    int k = 1;
    int dim_eff = 1;                       // effective dimension in the friction term
    Matrix coupling;                       // k x k matrix M
    const std::vector<double>* weight = nullptr;  // w at fine nodes
    std::vector<const std::vector<double>*> sources; // k pointers (null = zero source)
    double h_fine = 0.0;
    int n_coarse = 0;                      // coarse steps; coarse step = 2*h_fine
};

struct LinearRun {
    // per component, values and derivatives at coarse nodes 0..n_coarse
    std::vector<std::vector<double>> vals;
    std::vector<std::vector<double>> ders;
    std::vector<double> max_abs; // per component, over the run
};

/// Integrates the system from Z(0) = z0, Z'(0) = 0 (Taylor-started origin).
LinearRun integrate_linear(const LinearSystemSpec& spec, const std::vector<double>& z0);

/// w = U^q sampled on the ground grid.
std::vector<double> weight_power(const GroundState& g, double q);

struct AffineSolution {
    std::vector<RadialProfile> z; // k profiles on the coarse grid, dim = ground dim
    int j0 = 0;                   // coarse endpoint index where z = 0 was imposed
};

/// Affine endpoint solve with resonance detection and the 0.9/1.1 r0 retry.
/// `sources` are fine-grid arrays (one per component). Throws numerical_error
///("resonant truncation radius...") when every retry hits a near-singular
/// endpoint map.
AffineSolution solve_affine_system(const GroundState& ground, double weight_exp,
                                   const Matrix& coupling,
                                   const std::vector<std::vector<double>>& sources,
                                   int j0_coarse, double resonance_tol);

/// Default truncation index: first coarse node where U drops below
/// level*U(0). Throws when the profile never gets there.
int default_truncation_index(const GroundState& ground, double level);

} // namespace cnls::detail

#endif
