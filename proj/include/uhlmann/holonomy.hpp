// Uhlmann holonomy over the Brillouin-zone loop for chiral two-band models:
// the accumulated angle theta(T), the holonomy unitary exp(-i theta sigma_z/2)
// in the chiral basis, the phase arg Tr(rho_pi U), and a discrete
// polar-product oracle that rebuilds the holonomy step by step from parallel
// transport of amplitudes.
#pragma once

#include <complex>

#include <Eigen/Core>

#include "uhlmann/models.hpp"

namespace uhlmann {

struct HolonomyResult {
    double theta = 0.0;           // accumulated angle around the loop
    Eigen::Matrix2cd U;           // exp(-i theta sigma_z / 2)
    double phase = 0.0;           // arg Tr(rho_pi U), in (-pi, pi]
};

// Integral of (1 - sech(E/2T)) dphi/dk over the loop, refined by grid doubling
// until successive values differ by less than 1e-6 (at most 12 doublings).
double holonomy_angle(const ModelParams& model, double T, const MomentumGrid& grid);

// arg Tr(rho_pi exp(-i theta sigma_z/2)) where rho_pi is the two-level thermal
// state at the zone edge; {0, pi} for chiral models, DegeneratePhase when the
// trace vanishes (the exact step point).
double uhlmann_phase(const ModelParams& model, double T, const MomentumGrid& grid);

HolonomyResult holonomy(const ModelParams& model, double T, const MomentumGrid& grid);

// Ordered product of per-step polar factors of sqrt(rho_{k+1}) sqrt(rho_k)
// around the closed loop; converges to exp(-i theta sigma_z/2) as the grid is
// refined. Requires T > 0 (full-rank states).
Eigen::Matrix2cd holonomy_oracle(const ModelParams& model, double T, const MomentumGrid& grid);

namespace detail {

// Single periodic-trapezoid pass on a fixed grid (no refinement).
double holonomy_angle_fixed_grid(const ModelParams& model, double T, const MomentumGrid& grid);

// Phase extraction with the degenerate-trace guard, exposed for direct tests.
double phase_from_trace(std::complex<double> tr);

} // namespace detail

} // namespace uhlmann
