// Self-consistent BCS gap on a constant-density-of-states shell |xi| <= omega_D,
// the critical temperature, the BdG pseudo-spin mapping, and the thermal-state
// fidelity total over a Gauss-Legendre energy grid. The T = 0 gap has the
// closed form omega_D / sinh(1/(N0 V)), which serves as the solver oracle.
#pragma once

#include <array>
#include <vector>

#include "uhlmann/fidelity.hpp"
#include "uhlmann/models.hpp"

namespace uhlmann {

struct GapSolution {
    double delta = 0.0;     // self-consistent gap, 0 in the normal phase
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // gap-equation mismatch at the returned delta
};

struct BdGMode {
    double xi = 0.0;                       // single-particle energy from the Fermi level
    double E = 0.0;                        // quasiparticle energy sqrt(xi^2 + delta^2)
    std::array<double, 3> n{0.0, 0.0, 1.0}; // pseudo-spin (delta/E, 0, xi/E)
};

// N0 V * integral_0^omega_D tanh(sqrt(xi^2+delta^2)/2T)/sqrt(xi^2+delta^2) dxi - 1.
// Adaptive quadrature to relative error < 1e-12; the root in delta is the gap.
double gap_rhs(double delta, double V, double T, const BCSParams& params);

// Bisection on [0, 10 * weak-coupling estimate]; returns delta = 0 (converged)
// when the normal phase is the only solution.
GapSolution solve_gap(double V, double T, const BCSParams& params);

// Smallest T at which the gap falls below 1e-12, bisected to 1e-8 in T.
double critical_temperature(double V, const BCSParams& params);

BdGMode bcs_bloch(double xi, double V, double T, const BCSParams& params);

// Fidelity / trace-sqrt / indicator between the thermal states at (V1,T1) and
// (V2,T2), as a product of per-mode factors over a Gauss-Legendre xi grid on
// [-omega_D, omega_D]. Node count defaults to 256.
FidelityReport bcs_fidelity_total(double V1, double T1, double V2, double T2,
                                  const BCSParams& params, int nodes = 256);

namespace detail {

// Gauss-Legendre nodes on [-scale, scale], ascending.
std::vector<double> gauss_legendre_nodes(int n, double scale);

} // namespace detail

} // namespace uhlmann
