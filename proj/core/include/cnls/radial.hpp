#ifndef CNLS_RADIAL_HPP
#define CNLS_RADIAL_HPP

// Radial machinery on the half line: uniform grids, composite Simpson
// quadrature with an r^m weight, the regularized initial value problem
//
//     u'' + (N-1)/r u' = u - |u|^{p-1} u,   u(0) = u0,  u'(0) = 0,
//
// and the shooting/bisection solver for the positive decaying ground state
// of -Du + u = u^p in R^N.

#include <vector>

namespace cnls {

struct RadialGrid {
    double r_max = 0.0;
    int n_steps = 0;

    double h() const { return r_max / n_steps; }
    double node(int j) const { return j * h(); }

    /// Validating constructor: r_max > 0, n_steps >= 16.
    static RadialGrid make(double r_max, int n_steps);
};

/// A sampled radial function. `derivs` is the integrator's derivative
/// channel; it is empty for profiles built by pointwise formulas unless
/// stated otherwise.
struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;
    std::vector<double> derivs;
    int dim = 0;

    int size() const { return static_cast<int>(values.size()); }
    bool has_derivs() const { return derivs.size() == values.size(); }
    double max_abs() const;
    /// True when |values.back()| <= tail_tol * max|values|.
    bool decaying(double tail_tol) const;
};

enum class IvpOutcome {
    stays_positive, // survived to r_max without crossing or blowing up
    crosses_zero,   // first sign change detected
    diverges,       // |u| exceeded the blow-up threshold or became non-finite
};

struct IvpResult {
    RadialProfile profile; // sampled up to the event node (grid truncated there)
    IvpOutcome outcome = IvpOutcome::stays_positive;
    double event_radius = 0.0; // r* for crossing/divergence, r_max otherwise
};

/// |S^{N-1}| for N in 1..8 (returns 2 for N = 1).
double surface_area(int dim);

/// Integrates the radial IVP up to the first event. The origin is started by
/// one Taylor step, u(h) = u0 + (u0 - u0^p) h^2 / (2N), which removes the
/// (N-1)/r singularity exactly to the order of the integrator.
IvpResult integrate_ivp(int dim, double p, double u0, const RadialGrid& grid);

struct GroundState {
    RadialProfile profile; // U with derivative channel, polished decaying tail
    int dim = 0;
    double p = 0.0;
    double u0 = 0.0;         // U(0)
    double gamma = 0.0;      // integral of U^2 over R^N
    double gamma_tilde = 0.0; // integral of |x|^2 U^2 over R^N
    double radial_mass = 0.0; // integral of U^2 r^{N-1} dr over (0, inf)
};

struct ShootOptions {
    double tol = 1e-12;        // requested bisection width on u0 (upper bound)
    double h = 1e-3;           // grid step
    double r_max_init = 20.0;  // starting half-line truncation
    double tail_tol = 1e-12;   // required U(r_max)/U(0); r_max doubles until met
    double u0_min = 1.0 + 1e-6;
    double u0_max = 1e3;       // scan ceiling when the naive bracket fails
    bool adapt_r_max = true;   // set false to pin r_max (grid-refinement studies)
};

/// Bisects U(0) between the crossing and non-crossing classes, then builds
/// the positive decaying profile and its mass integrals (composite Simpson).
/// Throws precondition_error for p <= 1 or supercritical p, numerical_error
/// when no bracket exists below u0_max.
GroundState shoot_ground_state(int dim, double p, const ShootOptions& opts = {});

/// Composite Simpson value of  \int_0^{r_max} f(r) r^{dim-1+weight_power} dr.
double radial_quadrature(const RadialProfile& f, int weight_power);

/// Same quadrature for the pointwise product a*b (profiles on equal grids;
/// `stride_a` consumes every stride_a-th node of `a`, letting a fine-grid
/// profile pair with one sampled twice as coarsely).
double radial_quadrature_product(const RadialProfile& a, const RadialProfile& b,
                                 int weight_power, int stride_a = 1);

} // namespace cnls

#endif
