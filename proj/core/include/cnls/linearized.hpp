#ifndef CNLS_LINEARIZED_HPP
#define CNLS_LINEARIZED_HPP

// The inhomogeneous linearized radial equation
//
//     -S'' - (N-1)/r S' + S - q U^{p-1} S = g(r),   S'(0) = 0,  S(r0) = 0,
//
// solved by the affine method: the endpoint value S(r0) is an affine function
// of S(0), so one homogeneous and one particular integration suffice. On top
// of it sit the alpha constants (response to the source r^2 U), their p-sweeps,
// and the closed-form dilation corrections.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cnls/radial.hpp"

namespace cnls {

struct LinearizedProblem {
    const GroundState& ground;
    double coefficient_q;        // multiplier of U^{p-1}: p itself, or 3 for the cubic reduction
    const RadialProfile& source; // g on the ground's fine grid
    double r0;                   // truncation radius for S(r0) = 0
    double resonance_tol = 1e-12;
};

/// Solution profile on the coarse grid (step 2h), carrying the derivative
/// channel; S(r0) = 0 holds to machine precision by construction.
RadialProfile solve_linearized_affine(const LinearizedProblem& problem);

/// Default truncation radius: where U first drops below 1e-10 * U(0).
double default_r0(const GroundState& ground);

/// Fine-grid source r^2 U(r).
RadialProfile quadratic_source(const GroundState& ground);

struct AlphaPoint {
    int dim = 0;
    double p = 0.0;
    double alpha_radial = 0.0; // integral of U S r^{N-1} dr on (0, inf)
    double alpha_full = 0.0;   // surface_area(N) * alpha_radial
};

/// Ground state + linearized solve with q = p and source r^2 U.
AlphaPoint compute_alpha(int dim, double p, const ShootOptions& opts = {});

struct SweepEntry {
    double p = 0.0;
    std::optional<AlphaPoint> point; // empty on failure
    std::string error;               // reason when empty
};

/// Uniform inclusive p-grid; points computed independently (failures recorded,
/// sweep continues). `threads` <= 1 runs sequentially.
std::vector<SweepEntry> sweep_alpha(int dim, double p_min, double p_max, int n_points,
                                    const ShootOptions& opts = {}, int threads = 1);

/// Two-column TSV ("p\talpha_radial"), one '#' header line carrying the
/// resolved configuration, failed points as '# skip' lines.
void write_alpha_tsv(std::ostream& os, int dim, const std::vector<SweepEntry>& entries,
                     const std::string& config_line);

/// z(r) = -(c/2) (U + r U'), the closed-form radial correction for the cubic
/// problem; uses the integrator's derivative channel. Fine-grid output.
RadialProfile closed_form_z(const GroundState& ground, double c);

/// Radial solution of the cubic linearized problem with source r^2 U
/// (N = 2, p = 3); its weighted integral against U reproduces alpha.
RadialProfile solve_z0(const GroundState& ground);

} // namespace cnls

#endif
