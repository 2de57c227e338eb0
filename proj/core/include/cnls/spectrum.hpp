#ifndef CNLS_SPECTRUM_HPP
#define CNLS_SPECTRUM_HPP

// Eigenvalues of the weighted problem -Dpsi + psi = lambda U^2 psi in R^N,
// reduced to angular sectors. In sector l the substitution phi = psi / r^l
// turns the radial equation into the regular problem
//
//     phi'' + (N + 2l - 1)/r phi' = (1 - lambda U^2) phi,
//
// i.e. the same operator in effective dimension N + 2l, which the shared
// integrator handles without the r^{-2} centrifugal stiffness. Eigenvalues
// are bracketed by node counting (the m-th eigenfunction has m-1 interior
// zeros) and refined on the endpoint value.

#include <vector>

#include "cnls/radial.hpp"

namespace cnls {

struct SpectralQuery {
    const GroundState& ground; // requires p = 3
    int sector = 0;            // angular index l >= 0
    int how_many = 1;          // lowest eigenvalues requested
    double lambda_max = 10.0;  // search ceiling
};

struct SectorSpectrum {
    std::vector<double> lambdas; // strictly increasing
    bool complete = false;       // false when fewer than how_many live below lambda_max
};

/// Lowest eigenvalues of the sector problem below lambda_max.
SectorSpectrum sector_eigenvalues(const SpectralQuery& query);

/// Shooting solution at a given lambda (psi = r^l phi, normalized to max 1,
/// derivative channel filled). Exact ODE solution regardless of whether
/// lambda is an eigenvalue; at an eigenvalue it decays up to truncation.
RadialProfile sector_eigenfunction(const GroundState& ground, int sector, double lambda);

struct SpectralLine {
    double lambda = 0.0;
    int sector = 0;
};

/// Union over sectors 0..sector_max of all eigenvalues below lambda_max,
/// sorted ascending, duplicates within 1e-6 merged (first sector kept).
std::vector<SpectralLine> merged_spectrum(const GroundState& ground, int sector_max,
                                          double lambda_max);

} // namespace cnls

#endif
